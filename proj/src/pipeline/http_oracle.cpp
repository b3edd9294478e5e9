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

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>

#include "toolreason/errors.h"
#include "toolreason/oracle.h"

namespace toolreason {
namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

template <typename T>
void read_field(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InputError(std::string("oracle config field '") + key + "' has the wrong type");
  }
}

}  // namespace

Json to_json(const HttpOracleConfig& cfg) {
  return Json{{"base_url", cfg.base_url},     {"model", cfg.model},
              {"temperature", cfg.temperature}, {"max_tokens", cfg.max_tokens},
              {"timeout_s", cfg.timeout_s},   {"retries", cfg.retries},
              {"backoff_s", cfg.backoff_s},   {"api_key_env", cfg.api_key_env},
              {"max_in_flight", cfg.max_in_flight}};
}

HttpOracleConfig http_oracle_config_from_json(const Json& j, HttpOracleConfig base) {
  if (!j.is_object()) throw InputError("oracle config must be an object");
  read_field(j, "base_url", base.base_url);
  read_field(j, "model", base.model);
  read_field(j, "temperature", base.temperature);
  read_field(j, "max_tokens", base.max_tokens);
  read_field(j, "timeout_s", base.timeout_s);
  read_field(j, "retries", base.retries);
  read_field(j, "backoff_s", base.backoff_s);
  read_field(j, "api_key_env", base.api_key_env);
  read_field(j, "max_in_flight", base.max_in_flight);
  return base;
}

HttpOracle::HttpOracle(HttpOracleConfig cfg) : cfg_(std::move(cfg)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(cfg_.base_url, m, kUrl)) {
    throw InputError("oracle base_url '" + cfg_.base_url + "' is not an http(s) URL");
  }
  origin_ = m[1].str();
  path_prefix_ = m[2].str();
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (cfg_.max_in_flight < 1) throw InputError("oracle max_in_flight must be at least 1");
  if (cfg_.retries < 0) throw InputError("oracle retries must be non-negative");
  if (!(cfg_.timeout_s > 0.0)) throw InputError("oracle timeout_s must be positive");
  slots_ = std::make_unique<std::counting_semaphore<>>(cfg_.max_in_flight);
}

std::string HttpOracle::generate(const std::vector<ChatMessage>& messages,
                                 const GenerationParams& params) const {
  Json body;
  body["model"] = cfg_.model;
  body["messages"] = Json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  body["temperature"] = params.temperature;
  body["max_tokens"] = params.max_tokens;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  SlotGuard slot(*slots_);
  httplib::Client client(origin_);
  const auto timeout = std::chrono::duration<double>(cfg_.timeout_s);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

  const std::string path = path_prefix_ + "/chat/completions";
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::duration<double>(cfg_.backoff_s * std::ldexp(1.0, attempt - 1)));
    }
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw OracleUnavailable("oracle returned HTTP " + std::to_string(res->status));
    }
    const Json reply = Json::parse(res->body, nullptr, false);
    try {
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const Json::exception&) {
      throw OracleUnavailable("oracle reply has no choices[0].message.content");
    }
  }
  throw OracleUnavailable("oracle unreachable after " + std::to_string(cfg_.retries + 1) +
                          " attempts (" + last_error + ")");
}

}  // namespace toolreason
