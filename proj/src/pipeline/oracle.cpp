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

#include "toolreason/oracle.h"

#include <cmath>

#include "json_block.h"
#include "toolreason/errors.h"
#include "toolreason/io.h"
#include "toolreason/templates.h"

namespace toolreason {
namespace {

constexpr std::string_view kLastTool = "last_tool";

const Json* last_tool_json(const std::vector<ChatMessage>& messages, Json& storage) {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role != "tool") continue;
    storage = Json::parse(it->content, nullptr, false);
    return storage.is_discarded() ? nullptr : &storage;
  }
  return nullptr;
}

// Substitutes {{last_tool...}} placeholders; nullopt when one cannot be
// resolved.
std::optional<std::string> fill(const std::string& response,
                                const std::vector<ChatMessage>& messages) {
  if (response.find("{{") == std::string::npos) return response;
  Json storage;
  const Json* tool = nullptr;
  bool looked = false;

  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto open = response.find("{{", pos);
    if (open == std::string::npos) break;
    const auto close = response.find("}}", open + 2);
    if (close == std::string::npos) break;
    const std::string path = response.substr(open + 2, close - open - 2);
    if (path.compare(0, kLastTool.size(), kLastTool) != 0) {
      out += response.substr(pos, close + 2 - pos);
      pos = close + 2;
      continue;
    }
    if (!looked) {
      tool = last_tool_json(messages, storage);
      looked = true;
    }
    if (tool == nullptr) return std::nullopt;

    const Json* node = tool;
    std::size_t at = kLastTool.size();
    while (at < path.size()) {
      if (path[at] != '.') return std::nullopt;
      const auto next = path.find('.', at + 1);
      const std::string key = path.substr(at + 1, next == std::string::npos ? next : next - at - 1);
      if (!node->is_object() || !node->contains(key)) return std::nullopt;
      node = &node->at(key);
      at = next == std::string::npos ? path.size() : next;
    }
    out += response.substr(pos, open - pos);
    out += to_python_literal(value_from_json(*node));
    pos = close + 2;
  }
  out += response.substr(pos);
  return out;
}

// Drops the last subtask, or duplicates a lone one, so the plan size no
// longer matches.
std::optional<std::string> perturb_plan(const std::string& response) {
  auto j = detail::extract_json_block(response);
  if (!j) return std::nullopt;
  Json* list = nullptr;
  if (j->is_object() && j->contains("subtasks") && j->at("subtasks").is_array()) {
    list = &(*j)["subtasks"];
  } else if (j->is_array() && !j->empty()) {
    for (const auto& item : *j) {
      if (!item.is_object() || !item.contains("step")) return std::nullopt;
    }
    list = &*j;
  }
  if (list == nullptr || list->empty()) return std::nullopt;
  if (list->size() >= 2) {
    list->erase(list->size() - 1);
  } else {
    Json copy = list->at(0);
    if (copy.is_object()) copy["step"] = 2;
    list->push_back(copy);
  }
  return j->dump();
}

}  // namespace

std::uint64_t stable_hash(std::string_view text, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull ^ (seed * 0x9e3779b97f4a7c15ull);
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string conversation_text(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += '\n';
    out += m.content;
  }
  return out;
}

ScriptedOracle ScriptedOracle::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rules") || !j.at("rules").is_array()) {
    throw InputError("script must be an object with a 'rules' array");
  }
  std::vector<ScriptRule> rules;
  for (const auto& r : j.at("rules")) {
    if (!r.is_object() || !r.contains("response")) {
      throw InputError("every script rule needs a 'response'");
    }
    ScriptRule rule;
    if (r.contains("contains")) {
      const auto& c = r.at("contains");
      if (c.is_string()) {
        rule.contains.push_back(c.get<std::string>());
      } else if (c.is_array()) {
        for (const auto& s : c) {
          if (!s.is_string()) throw InputError("'contains' entries must be strings");
          rule.contains.push_back(s.get<std::string>());
        }
      } else {
        throw InputError("'contains' must be a string or an array of strings");
      }
    }
    const auto& resp = r.at("response");
    rule.response = resp.is_string() ? resp.get<std::string>() : resp.dump();
    rules.push_back(std::move(rule));
  }
  return ScriptedOracle(std::move(rules));
}

ScriptedOracle ScriptedOracle::load(const std::string& path) {
  return from_json(io::read_json_file(path));
}

std::string ScriptedOracle::generate(const std::vector<ChatMessage>& messages,
                                     const GenerationParams&) const {
  const std::string text = conversation_text(messages);
  for (const auto& rule : rules_) {
    bool match = true;
    for (const auto& needle : rule.contains) {
      if (text.find(needle) == std::string::npos) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    if (auto filled = fill(rule.response, messages)) return *filled;
  }
  throw OracleUnavailable("scripted oracle has no rule for this prompt");
}

double NoisyOracle::rate_for(const std::string& prompt) const {
  double rate = noise_.base_rate;
  if (prompt_has_reference(prompt)) rate *= 1.0 - noise_.reference_discount;
  if (prompt_has_examples(prompt)) rate *= 1.0 - noise_.example_discount;
  return rate;
}

std::string NoisyOracle::generate(const std::vector<ChatMessage>& messages,
                                  const GenerationParams& params) const {
  std::string response = inner_->generate(messages, params);
  const std::string prompt = conversation_text(messages);
  const double u = static_cast<double>(stable_hash(prompt, seed_) >> 11) * 0x1.0p-53;
  if (u >= rate_for(prompt)) return response;
  if (auto perturbed = perturb_plan(response)) return *perturbed;
  return response;
}

}  // namespace toolreason
