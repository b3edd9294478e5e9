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

#include "toolreason/lazy.h"

#include <cctype>

#include "toolreason/parser.h"

namespace toolreason {

std::vector<std::string> LazyConfig::default_reflection_lexicon() {
  return BehaviorLexicon::defaults().of(Behavior::Reflection);
}

Json to_json(const LazyReport& r) {
  Json hist = Json::object();
  for (Behavior b : kAllBehaviors) {
    auto it = r.behavior_histogram.find(b);
    hist[std::string(to_string(b))] = it == r.behavior_histogram.end() ? 0 : it->second;
  }
  return Json{{"token_count", r.token_count},
              {"reflection_count", r.reflection_count},
              {"is_lazy", r.is_lazy},
              {"behavior_histogram", hist}};
}

std::size_t whitespace_token_count(std::string_view text) {
  std::size_t n = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

std::size_t count_reflections(std::string_view reasoning, const std::vector<std::string>& lexicon) {
  return find_keyword_matches(reasoning, lexicon).size();
}

LazyReport detect_lazy(const Trajectory& t, const LazyConfig& cfg) {
  LazyReport report;
  for (const auto& th : t.thoughts) ++report.behavior_histogram[th.category];
  if (!t.reasoning) return report;

  const std::string& text = *t.reasoning;
  report.token_count = cfg.tokenizer ? cfg.tokenizer(text) : whitespace_token_count(text);
  report.reflection_count = count_reflections(text, cfg.reflection_lexicon);
  report.is_lazy = report.token_count > static_cast<std::size_t>(cfg.min_tokens) &&
                   report.reflection_count > static_cast<std::size_t>(cfg.min_reflections);
  return report;
}

std::map<Behavior, double> behavior_distribution(std::span<const Trajectory> trajectories) {
  std::map<Behavior, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& t : trajectories) {
    for (const auto& th : t.thoughts) {
      ++counts[th.category];
      ++total;
    }
  }
  std::map<Behavior, double> out;
  for (const auto& [b, n] : counts) out[b] = static_cast<double>(n) / static_cast<double>(total);
  return out;
}

}  // namespace toolreason
