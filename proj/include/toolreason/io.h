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

#pragma once

#include <string>
#include <vector>

#include "toolreason/value.h"

namespace toolreason::io {

/// Throws IoError when the file cannot be opened or written.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Json read_json_file(const std::string& path);

/// One JSON value per non-blank line. Lines that are header records
/// ({"type": "header", ...}) are skipped. Throws InputError with the line
/// number on malformed input.
std::vector<Json> read_jsonl(const std::string& path);
std::vector<Json> parse_jsonl(const std::string& text, const std::string& origin = "<string>");

}  // namespace toolreason::io
