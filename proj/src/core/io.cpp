/*
 * Copyright 2026 The toolreason Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "toolreason/io.h"

#include <fstream>
#include <sstream>

#include "toolreason/errors.h"

namespace toolreason::io {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("'" + path + "' is not valid JSON");
  return j;
}

std::vector<Json> parse_jsonl(const std::string& text, const std::string& origin) {
  std::vector<Json> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw InputError(origin + ":" + std::to_string(lineno) + ": invalid JSON");
    }
    if (j.is_object() && j.value("type", "") == "header") continue;
    rows.push_back(std::move(j));
  }
  return rows;
}

std::vector<Json> read_jsonl(const std::string& path) {
  return parse_jsonl(read_text_file(path), path);
}

}  // namespace toolreason::io
