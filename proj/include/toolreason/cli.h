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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "toolreason/advantage.h"
#include "toolreason/oracle.h"
#include "toolreason/parser.h"
#include "toolreason/reward.h"

namespace toolreason::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Effective settings: defaults, then the --config file, then flags.
struct RunConfig {
  DAConfig da;
  int min_tokens = 300;
  int min_reflections = 3;
  std::string lexicon;  // BehaviorLexicon file; empty for the default lexicon
  ParseConfig parse;
  RewardWeights weights;

  std::string oracle = "scripted";  // scripted | http
  std::string script = "builtin";   // scripted rules file or "builtin"
  double noise = 0.0;               // NoisyOracle base rate, 0 disables
  HttpOracleConfig http;

  std::string registry = "builtin";
  std::string templates;             // directory; empty for the built-in set
  std::string few_shots = "builtin";  // JSON array file, "builtin" or "none"
  bool prompt_with_reference = true;

  std::string input;
  std::string gt;
  std::string pred;
  std::string out = "-";
  std::string report;

  int fd_instances = 50;
  int theorem_instances = 100;

  std::uint64_t seed = 0;
  int jobs = 1;
  std::string emit = "jsonl";  // jsonl | csv | plots
};

Json to_json(const RunConfig& cfg);
/// Keys absent from `j` keep their value in `base`. Also accepts a header
/// record {"type": "header", "config": {...}} as written by every command.
RunConfig run_config_from_json(const Json& j, RunConfig base = {});
/// Throws InputError on out-of-range settings.
void validate(const RunConfig& cfg);

/// Entry point: `toolreason <score|advantage|gradcheck|analyze|synthesize|verify> [flags]`.
/// Returns 0 on success, 1 on validation failure, 2 on I/O or oracle failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace toolreason::cli
