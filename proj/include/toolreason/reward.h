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
 * Composite tool-call reward: format + structure + key + value.
 *
 *   format     1 iff the turn is "<think>\n" .* "\n</think>\n\n" answer
 *   structure  1 iff the multisets of tool names agree
 *   key        fraction of ground-truth parameter keys present in the aligned
 *              predicted call
 *   value      same, scoring each key's value (lists element-wise)
 *
 * With unit weights the total lies in [0, 4].
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "toolreason/parser.h"
#include "toolreason/types.h"

namespace toolreason {

struct RewardBreakdown {
  double format = 0.0;
  double structure = 0.0;
  double key = 0.0;
  double value = 0.0;
  double total = 0.0;
};

Json to_json(const RewardBreakdown& r);

struct RewardWeights {
  double format = 1.0;
  double structure = 1.0;
  double key = 1.0;
  double value = 1.0;
};

struct AlignedPair {
  std::size_t gt = 0;
  std::optional<std::size_t> pred;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

/// One entry per ground-truth call, in ground-truth order.
struct CallAlignment {
  std::vector<AlignedPair> pairs;
};

double format_reward(std::string_view raw, const ParseConfig& cfg = {});
inline double format_reward(const Trajectory& t, const ParseConfig& cfg = {}) {
  return format_reward(t.raw, cfg);
}

/// Greedy alignment over all (ground-truth, predicted) pairs, best match
/// score first (key hits plus value scores), then same-name pairs, then
/// ground-truth order, then predicted order. Each call is used at most once.
CallAlignment align_calls(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred);

double struct_reward(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred);
double key_reward(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred,
                  const CallAlignment& alignment);
double value_reward(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred,
                    const CallAlignment& alignment);

/// Score in [0, 1] for one ground-truth value against a predicted one. Lists
/// compare index by index over the ground-truth length; a scalar prediction
/// against a list is treated as a one-element list.
double value_match(const Value& gt, const Value& pred);

/// Key hits plus value scores of `pred` against `gt`; the quantity the
/// alignment maximises.
double call_match_score(const ToolCall& gt, const ToolCall& pred);

/// Total number of ground-truth parameter keys.
std::size_t key_count(const std::vector<ToolCall>& gt);

/// Scores the key/value/structure components for already-extracted calls.
RewardBreakdown score_calls(double format, const std::vector<ToolCall>& gt,
                            const std::vector<ToolCall>& pred, const RewardWeights& w = {});

RewardBreakdown total_reward(const Trajectory& t, const std::vector<ToolCall>& gt,
                             const RewardWeights& w = {}, const ParseConfig& cfg = {});
/// Parses `raw` first.
RewardBreakdown total_reward(std::string_view raw, const std::vector<ToolCall>& gt,
                             const RewardWeights& w = {}, const ParseConfig& cfg = {});

}  // namespace toolreason
