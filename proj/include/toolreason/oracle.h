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
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "toolreason/types.h"

namespace toolreason {

struct GenerationParams {
  double temperature = 0.0;
  int max_tokens = 2048;
};

/// The model behind decomposition and per-subtask reasoning. Implementations
/// must be safe to call from several threads at once.
class OracleClient {
 public:
  virtual ~OracleClient() = default;
  /// Throws OracleUnavailable when no answer can be produced.
  virtual std::string generate(const std::vector<ChatMessage>& messages,
                               const GenerationParams& params) const = 0;
};

/// All message contents joined with newlines; what scripted rules match on.
std::string conversation_text(const std::vector<ChatMessage>& messages);

/**
 * Rule table. The first rule whose `contains` strings all occur in the
 * conversation and whose placeholders all resolve wins. A response may use
 * {{last_tool.FIELD}}, replaced by FIELD of the JSON object in the most
 * recent tool message, rendered as a Python literal.
 */
struct ScriptRule {
  std::vector<std::string> contains;
  std::string response;
};

class ScriptedOracle : public OracleClient {
 public:
  explicit ScriptedOracle(std::vector<ScriptRule> rules) : rules_(std::move(rules)) {}

  /// {"rules": [{"contains": str | [str], "response": str | json}]}
  static ScriptedOracle from_json(const Json& j);
  static ScriptedOracle load(const std::string& path);

  std::string generate(const std::vector<ChatMessage>& messages,
                       const GenerationParams& params) const override;

  const std::vector<ScriptRule>& rules() const { return rules_; }

 private:
  std::vector<ScriptRule> rules_;
};

/**
 * Wraps another oracle and corrupts some decomposition answers by dropping
 * (or, for one-step plans, duplicating) a subtask. Whether a prompt is
 * corrupted depends only on the seed and the prompt text. Prompts that carry
 * reference calls or worked examples are corrupted less often:
 *
 *     rate = base_rate * (1 - reference_discount)^[has reference]
 *                      * (1 - example_discount)^[has examples]
 */
struct NoiseModel {
  double base_rate = 0.0;
  double reference_discount = 0.5;
  double example_discount = 0.5;
};

class NoisyOracle : public OracleClient {
 public:
  NoisyOracle(std::shared_ptr<const OracleClient> inner, NoiseModel noise, std::uint64_t seed)
      : inner_(std::move(inner)), noise_(noise), seed_(seed) {}

  std::string generate(const std::vector<ChatMessage>& messages,
                       const GenerationParams& params) const override;

  double rate_for(const std::string& prompt) const;

 private:
  std::shared_ptr<const OracleClient> inner_;
  NoiseModel noise_;
  std::uint64_t seed_;
};

struct HttpOracleConfig {
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string model = "default";
  double temperature = 0.0;
  int max_tokens = 2048;
  double timeout_s = 60.0;
  int retries = 3;
  double backoff_s = 0.5;  // doubled after every failed attempt
  std::string api_key_env = "OPENAI_API_KEY";
  int max_in_flight = 4;
};

Json to_json(const HttpOracleConfig& cfg);
HttpOracleConfig http_oracle_config_from_json(const Json& j, HttpOracleConfig base = {});

/// POSTs {model, messages, temperature, max_tokens} to
/// {base_url}/chat/completions and returns choices[0].message.content.
/// Connection errors, 429 and 5xx are retried with exponential backoff;
/// other statuses and exhausted retries throw OracleUnavailable.
class HttpOracle : public OracleClient {
 public:
  explicit HttpOracle(HttpOracleConfig cfg);

  std::string generate(const std::vector<ChatMessage>& messages,
                       const GenerationParams& params) const override;

  const HttpOracleConfig& config() const { return cfg_; }

 private:
  HttpOracleConfig cfg_;
  std::string origin_;
  std::string path_prefix_;
  mutable std::unique_ptr<std::counting_semaphore<>> slots_;
};

/// 64-bit FNV-1a; stable across platforms, used for seeded decisions.
std::uint64_t stable_hash(std::string_view text, std::uint64_t seed = 0);

}  // namespace toolreason
