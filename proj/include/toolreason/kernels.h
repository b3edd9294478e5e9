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

/**
 * Batch kernels over independent records.
 *
 * Each kernel has a serial reference and an OpenMP version that must return
 * identical results in input order. When items throw, the OpenMP version
 * rethrows the exception of the lowest failing index, so both versions fail
 * the same way.
 */

#pragma once

#include <span>
#include <string>
#include <vector>

#include "toolreason/advantage.h"
#include "toolreason/lazy.h"
#include "toolreason/parser.h"
#include "toolreason/reward.h"

namespace toolreason::kernels {

struct ScoreItem {
  std::string raw;
  std::vector<ToolCall> ground_truth;
};

std::vector<RewardBreakdown> score_batch_serial(std::span<const ScoreItem> items,
                                                const RewardWeights& w = {},
                                                const ParseConfig& cfg = {});
std::vector<RewardBreakdown> score_batch(std::span<const ScoreItem> items, int jobs,
                                         const RewardWeights& w = {}, const ParseConfig& cfg = {});

std::vector<GroupAdvantages> advantage_batch_serial(std::span<const RolloutGroup> groups,
                                                    const DAConfig& cfg);
std::vector<GroupAdvantages> advantage_batch(std::span<const RolloutGroup> groups, int jobs,
                                             const DAConfig& cfg);

/// Parses each raw output and runs lazy detection on it.
std::vector<LazyReport> lazy_batch_serial(std::span<const std::string> raws, const LazyConfig& cfg,
                                          const BehaviorLexicon& lexicon = BehaviorLexicon::defaults(),
                                          const ParseConfig& parse = {});
std::vector<LazyReport> lazy_batch(std::span<const std::string> raws, int jobs,
                                   const LazyConfig& cfg,
                                   const BehaviorLexicon& lexicon = BehaviorLexicon::defaults(),
                                   const ParseConfig& parse = {});

/// Single-item bodies shared by both versions.
RewardBreakdown score_one(const ScoreItem& item, const RewardWeights& w, const ParseConfig& cfg);
LazyReport lazy_one(const std::string& raw, const LazyConfig& cfg, const BehaviorLexicon& lexicon,
                    const ParseConfig& parse);

}  // namespace toolreason::kernels
