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

#include "toolreason/kernels.h"

namespace toolreason::kernels {

RewardBreakdown score_one(const ScoreItem& item, const RewardWeights& w, const ParseConfig& cfg) {
  return total_reward(std::string_view(item.raw), item.ground_truth, w, cfg);
}

LazyReport lazy_one(const std::string& raw, const LazyConfig& cfg, const BehaviorLexicon& lexicon,
                    const ParseConfig& parse) {
  Trajectory t = parse_output(raw, parse).trajectory;
  classify_thoughts(t, lexicon);
  return detect_lazy(t, cfg);
}

std::vector<RewardBreakdown> score_batch_serial(std::span<const ScoreItem> items,
                                                const RewardWeights& w, const ParseConfig& cfg) {
  std::vector<RewardBreakdown> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(score_one(item, w, cfg));
  return out;
}

std::vector<GroupAdvantages> advantage_batch_serial(std::span<const RolloutGroup> groups,
                                                    const DAConfig& cfg) {
  std::vector<GroupAdvantages> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(reshape_advantages(g, cfg));
  return out;
}

std::vector<LazyReport> lazy_batch_serial(std::span<const std::string> raws, const LazyConfig& cfg,
                                          const BehaviorLexicon& lexicon,
                                          const ParseConfig& parse) {
  std::vector<LazyReport> out;
  out.reserve(raws.size());
  for (const auto& raw : raws) out.push_back(lazy_one(raw, cfg, lexicon, parse));
  return out;
}

}  // namespace toolreason::kernels
