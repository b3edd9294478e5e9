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

#include <gtest/gtest.h>

#include <algorithm>

#include "generators.h"
#include "oracles.h"
#include "toolreason/reward.h"

namespace toolreason {
namespace {

using testing::Rng;

ToolCall call(std::string name, Object args = {}) { return {std::move(name), std::move(args)}; }

std::string good(const std::vector<ToolCall>& calls) {
  return "<think>\nreasoning\n</think>\n\n" + render_call_list(calls);
}

TEST(FormatReward, Pattern) {
  EXPECT_EQ(format_reward("<think>\nx\n</think>\n\nans"), 1.0);
  EXPECT_EQ(format_reward("<think>x</think>\n\nans"), 0.0);
  EXPECT_EQ(format_reward("ans only"), 0.0);
  EXPECT_EQ(format_reward("<think>\nx\n</think>\n\n   "), 0.0);
  EXPECT_EQ(format_reward("<think>\n\n</think>\n\nhello"), 1.0);
}

TEST(FormatReward, AgreesWithRegexOracle) {
  Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    const auto rc = testing::random_reward_case(rng);
    EXPECT_EQ(format_reward(rc.raw), testing::oracle_format(rc.raw)) << rc.raw;
  }
}

TEST(AlignCalls, Examples) {
  const auto a = align_calls({call("f"), call("g")}, {call("g"), call("f")});
  EXPECT_EQ(a.pairs, (std::vector<AlignedPair>{{0, 1}, {1, 0}}));
  EXPECT_EQ(align_calls({call("f")}, {}).pairs, (std::vector<AlignedPair>{{0, std::nullopt}}));
  EXPECT_EQ(align_calls({call("f"), call("f")}, {call("f")}).pairs,
            (std::vector<AlignedPair>{{0, 0}, {1, std::nullopt}}));
}

TEST(AlignCalls, PrefersBetterMatchOverFirstUse) {
  const std::vector<ToolCall> gt = {call("f", {{"a", Value(1)}}), call("f", {{"a", Value(2)}})};
  const std::vector<ToolCall> pred = {call("f", {{"a", Value(2)}}), call("f", {{"a", Value(1)}})};
  EXPECT_EQ(align_calls(gt, pred).pairs, (std::vector<AlignedPair>{{0, 1}, {1, 0}}));
}

TEST(AlignCalls, EachPredictionUsedOnce) {
  Rng rng(32);
  for (int i = 0; i < 500; ++i) {
    const auto rc = testing::random_reward_case(rng);
    const auto a = align_calls(rc.gt, rc.pred);
    ASSERT_EQ(a.pairs.size(), rc.gt.size());
    std::vector<int> uses(rc.pred.size(), 0);
    for (std::size_t g = 0; g < a.pairs.size(); ++g) {
      EXPECT_EQ(a.pairs[g].gt, g);
      if (a.pairs[g].pred) ++uses[*a.pairs[g].pred];
    }
    for (int u : uses) EXPECT_LE(u, 1);
  }
}

TEST(StructReward, Multisets) {
  EXPECT_EQ(struct_reward({call("set_budget_limit")}, {call("set_budget_limit")}), 1.0);
  EXPECT_EQ(struct_reward({call("f"), call("g")}, {call("f")}), 0.0);
  EXPECT_EQ(struct_reward({call("f"), call("g")}, {call("g"), call("f")}), 1.0);
  EXPECT_EQ(struct_reward({call("f"), call("f")}, {call("f"), call("g")}), 0.0);
}

TEST(KeyReward, Examples) {
  const std::vector<ToolCall> gt2 = {call("f", {{"a", Value(1)}, {"b", Value(2)}})};
  const std::vector<ToolCall> pred2 = {call("f", {{"a", Value(9)}, {"b", Value(9)}})};
  EXPECT_DOUBLE_EQ(key_reward(gt2, pred2, align_calls(gt2, pred2)), 1.0);
  const std::vector<ToolCall> gt3 = {call("f", {{"a", Value(1)}, {"b", Value(2)}, {"c", Value(3)}})};
  const std::vector<ToolCall> pred3 = {call("f", {{"a", Value(1)}, {"b", Value(2)}})};
  EXPECT_DOUBLE_EQ(key_reward(gt3, pred3, align_calls(gt3, pred3)), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(key_reward({}, {}, {}), 1.0);
  EXPECT_DOUBLE_EQ(key_reward({}, {call("f")}, {}), 0.0);
}

TEST(ValueReward, Examples) {
  const Value both(List{Value("5753502325"), Value("9851293632")});
  EXPECT_DOUBLE_EQ(value_match(both, Value(List{Value("5753502325")})), 0.5);
  EXPECT_DOUBLE_EQ(value_match(both, Value("5753502325")), 0.5);
  const std::vector<ToolCall> gt = {call("f", {{"a", Value(1)}})};
  EXPECT_DOUBLE_EQ(value_reward(gt, gt, align_calls(gt, gt)), 1.0);
  const std::vector<ToolCall> gt2 = {call("f", {{"a", Value(1)}, {"b", Value("x")}})};
  const std::vector<ToolCall> pred2 = {call("f", {{"a", Value(1)}, {"b", Value("y")}})};
  EXPECT_DOUBLE_EQ(value_reward(gt2, pred2, align_calls(gt2, pred2)), 0.5);
}

TEST(ValueMatch, EmptyListNeedsEmptyList) {
  EXPECT_EQ(value_match(Value(List{}), Value(List{})), 1.0);
  EXPECT_EQ(value_match(Value(List{}), Value("x")), 0.0);
}

TEST(TotalReward, Examples) {
  const std::vector<ToolCall> gt = {call("f", {{"a", Value(1)}})};
  EXPECT_DOUBLE_EQ(total_reward(good(gt), gt).total, 4.0);
  EXPECT_DOUBLE_EQ(total_reward(render_call_list(gt), gt).total, 3.0);
  EXPECT_DOUBLE_EQ(total_reward("<think>\nx\n</think>\n\nno calls", gt).total, 1.0);
  EXPECT_DOUBLE_EQ(total_reward("", gt).total, 0.0);
}

TEST(TotalReward, WeightsScaleComponents) {
  const std::vector<ToolCall> gt = {call("f", {{"a", Value(1)}})};
  RewardWeights w{0.5, 1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(total_reward(good(gt), gt, w).total, 6.5);
}

TEST(TotalReward, ComponentsInRange) {
  Rng rng(33);
  for (int i = 0; i < 1000; ++i) {
    const auto rc = testing::random_reward_case(rng);
    const auto r = total_reward(rc.raw, rc.gt);
    for (double c : {r.format, r.structure}) EXPECT_TRUE(c == 0.0 || c == 1.0);
    for (double c : {r.key, r.value}) {
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 1.0);
    }
    EXPECT_LE(r.value, r.key + 1e-12);
    EXPECT_DOUBLE_EQ(r.total, r.format + r.structure + r.key + r.value);
  }
}

TEST(TotalReward, FullScoreImpliesPairwiseEquality) {
  Rng rng(34);
  int full = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto rc = testing::random_reward_case(rng);
    if (total_reward(rc.raw, rc.gt).total != 4.0) continue;
    ++full;
    const auto a = align_calls(rc.gt, rc.pred);
    EXPECT_EQ(struct_reward(rc.gt, rc.pred), 1.0);
    for (const auto& p : a.pairs) {
      ASSERT_TRUE(p.pred);
      const ToolCall& g = rc.gt[p.gt];
      const ToolCall& q = rc.pred[*p.pred];
      EXPECT_EQ(g.name, q.name);
      bool same_shape = q.args.size() == g.args.size();
      for (const auto& [key, value] : g.args) {
        const Value* got = q.arg(key);
        ASSERT_NE(got, nullptr) << key;
        EXPECT_EQ(value_match(value, *got), 1.0) << key;
        if (value.is_list() != got->is_list() ||
            (value.is_list() && value.as_list().size() != got->as_list().size())) {
          same_shape = false;
        }
      }
      if (same_shape) EXPECT_TRUE(tool_call_equal(g, q));
    }
  }
  EXPECT_GT(full, 50);
}

TEST(TotalReward, ExtrasBeyondGroundTruthAreNotScored) {
  const std::vector<ToolCall> gt = {call("f", {{"a", Value(List{Value(1)})}})};
  const std::vector<std::vector<ToolCall>> preds = {
      {call("f", {{"a", Value(List{Value(1)})}, {"z", Value(0)}})},
      {call("f", {{"a", Value(List{Value(1), Value(2)})}})},
      {call("f", {{"a", Value(1)}})},
  };
  for (const auto& pred : preds) {
    EXPECT_DOUBLE_EQ(total_reward(good(pred), gt).total, 4.0);
    EXPECT_FALSE(tool_call_equal(gt[0], pred[0]));
  }
}

TEST(TotalReward, AddingCorrectKeyNeverHurts) {
  Rng rng(35);
  for (int i = 0; i < 500; ++i) {
    ToolCall gt = testing::random_call(rng);
    if (gt.args.empty()) continue;
    ToolCall partial = gt;
    const Member removed = partial.args.back();
    partial.args.pop_back();
    ToolCall fuller = partial;
    fuller.args.push_back(removed);
    const auto before = score_calls(1.0, {gt}, {partial});
    const auto after = score_calls(1.0, {gt}, {fuller});
    EXPECT_GE(after.key, before.key);
    EXPECT_GE(after.value, before.value);
  }
}

TEST(TotalReward, PermutingPredictionsKeepsStructAndOracleTotal) {
  Rng rng(36);
  for (int i = 0; i < 300; ++i) {
    auto rc = testing::random_reward_case(rng);
    auto shuffled = rc.pred;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(struct_reward(rc.gt, rc.pred), struct_reward(rc.gt, shuffled));
    const double a = testing::exhaustive_reward(rc.raw, rc.gt, rc.pred).total;
    const double b = testing::exhaustive_reward(rc.raw, rc.gt, shuffled).total;
    EXPECT_NEAR(a, b, 1e-12);
  }
}

TEST(TotalReward, NeverAboveExhaustiveOracle) {
  Rng rng(37);
  int equal = 0;
  const int n = 3000;
  for (int i = 0; i < n; ++i) {
    const auto rc = testing::random_reward_case(rng);
    const double greedy = total_reward(rc.raw, rc.gt).total;
    const double best = testing::exhaustive_reward(rc.raw, rc.gt, rc.pred).total;
    EXPECT_LE(greedy, best + 1e-9);
    equal += std::abs(greedy - best) <= 1e-9 ? 1 : 0;
  }
  EXPECT_GE(equal, n * 99 / 100);
}

TEST(TotalReward, OracleAgreesWithLibraryOnComponents) {
  Rng rng(38);
  for (int i = 0; i < 500; ++i) {
    const auto rc = testing::random_reward_case(rng);
    const auto r = total_reward(rc.raw, rc.gt);
    const auto o = testing::exhaustive_reward(rc.raw, rc.gt, rc.pred);
    EXPECT_EQ(r.format, o.format);
    EXPECT_EQ(r.structure, o.structure);
  }
}

}  // namespace
}  // namespace toolreason
