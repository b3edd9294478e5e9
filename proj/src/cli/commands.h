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

#include <ostream>
#include <sstream>
#include <string>

#include "toolreason/cli.h"

namespace toolreason::cli {

/// Collects a command's primary output and writes it to cfg.out ("-" is
/// the caller's stream) once the command has finished.
class Sink {
 public:
  Sink(const RunConfig& cfg, const std::string& command, std::ostream& stdout_stream);

  void line(const std::string& s) { buf_ << s << '\n'; }
  void record(const Json& j) { line(j.dump()); }
  /// A comma-separated row; fields are quoted when needed.
  void row(const std::vector<std::string>& fields);
  void flush();

  bool csv() const { return csv_; }

 private:
  std::string path_;
  std::ostream& stdout_;
  std::ostringstream buf_;
  bool csv_;
};

std::string csv_number(double x);

int cmd_score(const RunConfig& cfg, Sink& out, std::ostream& err);
int cmd_advantage(const RunConfig& cfg, Sink& out, std::ostream& err);
int cmd_gradcheck(const RunConfig& cfg, Sink& out, std::ostream& err);
int cmd_analyze(const RunConfig& cfg, Sink& out, std::ostream& err);
int cmd_synthesize(const RunConfig& cfg, Sink& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, Sink& out, std::ostream& err);

}  // namespace toolreason::cli
