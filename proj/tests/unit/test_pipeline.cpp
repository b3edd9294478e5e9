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

#include <filesystem>
#include <memory>

#include "fixtures.h"
#include "toolreason/errors.h"
#include "toolreason/parser.h"
#include "toolreason/pipeline.h"
#include "toolreason/reward.h"

namespace toolreason {
namespace {

using testing::builtin_seed;

ToolCall call(std::string name, Object args = {}) { return {std::move(name), std::move(args)}; }

class FixedOracle : public OracleClient {
 public:
  explicit FixedOracle(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string generate(const std::vector<ChatMessage>&, const GenerationParams&) const override {
    if (next_ >= replies_.size()) throw OracleUnavailable("script exhausted");
    return replies_[next_++];
  }
  std::size_t calls() const { return next_; }

 private:
  std::vector<std::string> replies_;
  mutable std::size_t next_ = 0;
};

SubtaskPlan plan_of(Scenario s, std::vector<std::string> descriptions) {
  SubtaskPlan p;
  p.scenario = s;
  for (std::size_t i = 0; i < descriptions.size(); ++i) {
    p.subtasks.push_back({static_cast<int>(i + 1), descriptions[i]});
  }
  return p;
}

TEST(Templates, RenderAndEscapes) {
  EXPECT_EQ(render_template("a {x} b {y}", {{"x", "1"}, {"y", "2"}}), "a 1 b 2");
  EXPECT_EQ(render_template("{{literal}} {x}", {{"x", "v"}}), "{literal} v");
  EXPECT_THROW(render_template("{missing}", {}), TemplateError);
  EXPECT_EQ(template_placeholders("{a} {b} {a}"), (std::vector<std::string>{"a", "b"}));
}

TEST(Templates, ShippedFilesMatchDefaults) {
  const auto loaded = TemplateSet::load(std::string(TOOLREASON_DATA_DIR) + "/templates");
  const auto defaults = TemplateSet::defaults();
  for (const auto& name : TemplateSet::field_names()) {
    EXPECT_EQ(loaded.field(name), defaults.field(name)) << name;
  }
}

TEST(Templates, MissingDirectoryIsIoError) {
  EXPECT_THROW(TemplateSet::load("/nonexistent/toolreason/templates"), IoError);
}

TEST(Registry, ExecutesCannedResponsesByCanonicalArgs) {
  const auto reg = ToolRegistry::builtin();
  const ToolCall c = call("compute_exchange_rate", {{"value", Value(50000.0)},
                                                    {"target_currency", Value("USD")},
                                                    {"base_currency", Value("RMB")}});
  const Value out = reg.execute(c);
  ASSERT_TRUE(out.is_object());
  EXPECT_TRUE(values_equal(*find_member(out.as_object(), "exchanged_value"), Value(7142.86)));
}

TEST(Registry, Errors) {
  const auto reg = ToolRegistry::builtin();
  EXPECT_THROW(reg.execute(call("no_such_tool")), ToolNotFound);
  EXPECT_THROW(reg.execute(call("compute_exchange_rate", {{"value", Value(1)}})), ToolArgError);
  RegisteredTool bad;
  bad.spec.name = "t";
  bad.spec.params = {{"id", "string", true}};
  bad.responses.push_back({{}, Value(1)});
  ToolRegistry r;
  EXPECT_THROW(r.add(bad), ToolArgError);
}

TEST(Registry, JsonRoundTrip) {
  const auto reg = ToolRegistry::builtin();
  const auto back = ToolRegistry::from_json(reg.to_json());
  EXPECT_EQ(back.names(), reg.names());
  EXPECT_EQ(back.to_json(), reg.to_json());
}

TEST(ScriptedOracle, FirstMatchingRuleAndLastTool) {
  ScriptedOracle o({{{"alpha"}, "A"}, {{"beta"}, "B {{last_tool.x}}"}, {{"beta"}, "B none"}});
  EXPECT_EQ(o.generate({{"user", "alpha beta"}}, {}), "A");
  EXPECT_EQ(o.generate({{"user", "beta"}}, {}), "B none");
  EXPECT_EQ(o.generate({{"user", "beta"}, {"tool", R"({"x": 3})"}}, {}), "B 3");
  EXPECT_THROW(o.generate({{"user", "gamma"}}, {}), OracleUnavailable);
}

TEST(NoisyOracle, RateFollowsGuidance) {
  auto inner = std::make_shared<ScriptedOracle>(builtin_script());
  NoisyOracle o(inner, {0.6, 0.5, 0.5}, 7);
  const std::string ref = std::string(kReferenceHeading) + "\n[f(a=1)]";
  const std::string none = std::string(kReferenceHeading) + "\n" + std::string(kNoReference);
  EXPECT_DOUBLE_EQ(o.rate_for(none), 0.6);
  EXPECT_DOUBLE_EQ(o.rate_for(ref), 0.3);
  EXPECT_DOUBLE_EQ(o.rate_for(ref + "\n" + std::string(kExampleMarker) + "1>"), 0.15);
}

TEST(NoisyOracle, DeterministicPerSeed) {
  const auto samples = testing::lookup_samples(40);
  auto inner = std::make_shared<testing::LookupOracle>(samples);
  const NoisyOracle a(inner, {0.6, 0.5, 0.5}, 3);
  const NoisyOracle b(inner, {0.6, 0.5, 0.5}, 3);
  PipelineOptions opts;
  for (const auto& s : samples) {
    const auto msgs = decomposition_prompt(s.context, s.reference, opts);
    EXPECT_EQ(a.generate(msgs, {}), b.generate(msgs, {}));
  }
}

TEST(ParsePlan, Forms) {
  const auto p = parse_plan(R"({"scenario": "parallel", "subtasks": [
      {"step": 1, "description": "a"}, {"step": 2, "description": "b"}]})",
                            false);
  EXPECT_EQ(p, plan_of(Scenario::Parallel, {"a", "b"}));
  EXPECT_EQ(parse_plan(R"(Plan: [{"step": 1, "description": "x"}])", false),
            plan_of(Scenario::Sequential, {"x"}));
  EXPECT_EQ(parse_plan(R"({"scenario": "irrelevant", "subtasks": []})", true).scenario,
            Scenario::Irrelevant);
  EXPECT_EQ(parse_plan("[]", true).scenario, Scenario::Irrelevant);
}

TEST(ParsePlan, Malformed) {
  EXPECT_THROW(parse_plan("no json here", false), DecompositionParseError);
  EXPECT_THROW(parse_plan(R"([{"step": 2, "description": "x"}])", false),
               DecompositionParseError);
  EXPECT_THROW(parse_plan(R"([{"step": 1}])", false), DecompositionParseError);
  EXPECT_THROW(parse_plan(R"({"scenario": "sideways", "subtasks": []})", false),
               DecompositionParseError);
}

TEST(Decompose, CaseStudyGivesTwoSequentialSubtasks) {
  const auto seed = builtin_seed("exchange-budget");
  const auto plan = decompose(seed.context, seed.reference, builtin_script());
  EXPECT_EQ(plan.scenario, Scenario::Sequential);
  EXPECT_EQ(plan.subtasks.size(), 2u);
  EXPECT_TRUE(check_plan(plan, seed.reference));
}

TEST(Decompose, GreetingIsIrrelevant) {
  const auto seed = builtin_seed("greeting");
  const auto plan = decompose(seed.context, seed.reference, builtin_script());
  EXPECT_EQ(plan.scenario, Scenario::Irrelevant);
  EXPECT_TRUE(plan.subtasks.empty());
}

TEST(Decompose, RetriesOnceThenFails) {
  const auto seed = builtin_seed("exchange-budget");
  FixedOracle twice({"garbage", "still garbage", R"([{"step": 1, "description": "x"}])"});
  EXPECT_THROW(decompose(seed.context, seed.reference, twice), DecompositionParseError);
  EXPECT_EQ(twice.calls(), 2u);
  FixedOracle recover({"garbage", R"([{"step": 1, "description": "x"}])"});
  EXPECT_EQ(decompose(seed.context, seed.reference, recover).subtasks.size(), 1u);
}

TEST(DecompositionPrompt, ShowsGuidanceOnlyWhenAsked) {
  const auto seed = builtin_seed("exchange-budget");
  PipelineOptions opts;
  opts.few_shots = builtin_few_shots();
  auto text = conversation_text(decomposition_prompt(seed.context, seed.reference, opts));
  EXPECT_TRUE(prompt_has_reference(text));
  EXPECT_TRUE(prompt_has_examples(text));
  EXPECT_NE(text.find(seed.context.query), std::string::npos);
  opts.prompt_with_reference = false;
  opts.few_shots.clear();
  text = conversation_text(decomposition_prompt(seed.context, seed.reference, opts));
  EXPECT_FALSE(prompt_has_reference(text));
  EXPECT_FALSE(prompt_has_examples(text));
}

TEST(CheckPlan, CountEquality) {
  const std::vector<ToolCall> two = {call("f"), call("g")};
  EXPECT_TRUE(check_plan(plan_of(Scenario::Sequential, {"a", "b"}), two));
  EXPECT_FALSE(check_plan(plan_of(Scenario::Sequential, {"a", "b", "c", "d", "e", "f"}),
                          {call("f"), call("g"), call("h")}));
  EXPECT_TRUE(check_plan(plan_of(Scenario::Irrelevant, {}), {}));
}

TEST(ExecuteSequential, UsesPreviousObservation) {
  const auto seed = builtin_seed("exchange-budget");
  const auto plan = decompose(seed.context, seed.reference, builtin_script());
  const auto results =
      execute_sequential(seed.context, plan, builtin_script(), ToolRegistry::builtin());
  ASSERT_EQ(results.size(), 2u);
  for (const auto& r : results) EXPECT_TRUE(r.observation.has_value());
  ASSERT_TRUE(results[1].call);
  EXPECT_TRUE(values_equal(*results[1].call->arg("budget_limit"), Value(7142.86)));
}

TEST(ExecuteSequential, OrderMatters) {
  const auto seed = builtin_seed("exchange-budget");
  auto plan = decompose(seed.context, seed.reference, builtin_script());
  const auto forward =
      execute_sequential(seed.context, plan, builtin_script(), ToolRegistry::builtin());
  std::swap(plan.subtasks[0].description, plan.subtasks[1].description);
  const auto swapped =
      execute_sequential(seed.context, plan, builtin_script(), ToolRegistry::builtin());
  const ToolCall& budget_forward = *forward[1].call;
  const ToolCall& budget_swapped = *swapped[0].call;
  EXPECT_EQ(budget_forward.name, "set_budget_limit");
  EXPECT_EQ(budget_swapped.name, "set_budget_limit");
  EXPECT_FALSE(tool_call_equal(budget_forward, budget_swapped));
}

TEST(ExecuteSequential, SingleSubtask) {
  const auto seed = builtin_seed("exchange-budget");
  const auto plan =
      plan_of(Scenario::Sequential, {"Convert 50,000 RMB to USD with compute_exchange_rate."});
  const auto results =
      execute_sequential(seed.context, plan, builtin_script(), ToolRegistry::builtin());
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].call->name, "compute_exchange_rate");
}

TEST(ExecuteSequential, MissingToolKeepsCompletedSteps) {
  const auto seed = builtin_seed("exchange-budget");
  const auto plan = decompose(seed.context, seed.reference, builtin_script());
  ToolRegistry partial;
  partial.add(*ToolRegistry::builtin().find("compute_exchange_rate"));
  try {
    execute_sequential(seed.context, plan, builtin_script(), partial);
    FAIL() << "expected ToolNotFound";
  } catch (const ToolNotFound& e) {
    EXPECT_EQ(e.step(), 2);
    ASSERT_EQ(e.completed().size(), 1u);
    EXPECT_EQ(e.completed()[0].call->name, "compute_exchange_rate");
  }
}

TEST(ExecuteSequential, UnparseableStep) {
  const auto seed = builtin_seed("exchange-budget");
  FixedOracle o({"<think>\nhmm\n</think>\n\nno call"});
  try {
    execute_sequential(seed.context, plan_of(Scenario::Sequential, {"x"}), o,
                       ToolRegistry::builtin());
    FAIL() << "expected SubtaskParseError";
  } catch (const SubtaskParseError& e) {
    EXPECT_EQ(e.step(), 1);
  }
}

TEST(ExecuteParallel, IndependentAndOrdered) {
  const auto seed = builtin_seed("weather-two-cities");
  const auto plan = decompose(seed.context, seed.reference, builtin_script());
  ASSERT_EQ(plan.scenario, Scenario::Parallel);
  const auto results = execute_parallel(seed.context, plan, builtin_script());
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(*results[0].call->arg("city"), Value("Paris"));
  EXPECT_EQ(*results[1].call->arg("city"), Value("London"));
  for (const auto& r : results) {
    EXPECT_FALSE(r.observation);
    EXPECT_FALSE(r.reasoning.empty());
  }
  EXPECT_TRUE(execute_parallel(seed.context, plan_of(Scenario::Parallel, {}), builtin_script())
                  .empty());
}

TEST(Irrelevant, ExplanationAndComposition) {
  const auto seed = builtin_seed("greeting");
  const auto explanation = explain_irrelevant(seed.context, builtin_script());
  EXPECT_NE(explanation.find("no tool"), std::string::npos);
  const auto composed = compose_irrelevant(explanation, seed.answer_text);
  EXPECT_EQ(format_reward(composed.text), 1.0);
  const auto parsed = parse_output(composed.text).trajectory;
  EXPECT_TRUE(parsed.calls.empty());
  EXPECT_EQ(parsed.answer, seed.answer_text.value_or(""));
  EXPECT_TRUE(verify(composed, {}));
  FixedOracle down({});
  EXPECT_THROW(explain_irrelevant(seed.context, down), OracleUnavailable);
}

TEST(Compose, SequentialCaseLayout) {
  const auto seed = builtin_seed("exchange-budget");
  const auto plan = decompose(seed.context, seed.reference, builtin_script());
  const auto results =
      execute_sequential(seed.context, plan, builtin_script(), ToolRegistry::builtin());
  const auto composed = compose(plan, results);
  EXPECT_EQ(composed.turns.size(), 2u);
  EXPECT_EQ(composed.text, composed.turns.back().text);
  EXPECT_NE(composed.turns[0].text.find("break it down into the following subtasks"),
            std::string::npos);
  EXPECT_TRUE(composed.turns[0].observation.has_value());
  EXPECT_NE(composed.text.find("Now I should analyze the execution process of subtask 2"),
            std::string::npos);
  EXPECT_NE(composed.text.find(
                R"([set_budget_limit(access_token="abc123xyz", budget_limit=7142.86)])"),
            std::string::npos);
  for (const auto& t : composed.turns) EXPECT_EQ(format_reward(t.text), 1.0);
  EXPECT_TRUE(verify(composed, seed.reference));
}

TEST(Compose, ParallelHasReflectionAndAllCalls) {
  const auto seed = builtin_seed("weather-two-cities");
  const auto plan = decompose(seed.context, seed.reference, builtin_script());
  const auto composed = compose(plan, execute_parallel(seed.context, plan, builtin_script()));
  EXPECT_EQ(composed.turns.size(), 1u);
  EXPECT_EQ(format_reward(composed.text), 1.0);
  EXPECT_EQ(parse_output(composed.text).trajectory.calls.size(), 2u);
  const auto defaults = TemplateSet::defaults();
  EXPECT_NE(composed.text.find(defaults.parallel_reflection), std::string::npos);
  EXPECT_TRUE(verify(composed, seed.reference));
}

TEST(Compose, EmptySequentialIsTemplateError) {
  EXPECT_THROW(compose(plan_of(Scenario::Sequential, {}), {}), TemplateError);
}

TEST(Verify, Examples) {
  const std::vector<ToolCall> ref = {
      call("return_delivered_order_items",
           {{"item_ids", Value(List{Value("5753502325"), Value("9851293632")})}})};
  const std::string think = "<think>\nok\n</think>\n\n";
  EXPECT_TRUE(verify_texts({think + render_call_list(ref)}, ref));
  const std::vector<ToolCall> partial = {
      call("return_delivered_order_items", {{"item_ids", Value(List{Value("5753502325")})}})};
  EXPECT_FALSE(verify_texts({think + render_call_list(partial)}, ref));
  auto extra = ref;
  extra.push_back(call("get_order_details", {{"order_id", Value("#W7181492")}}));
  EXPECT_FALSE(verify_texts({think + render_call_list(extra)}, ref));
  EXPECT_FALSE(verify_texts({think + render_call_list({ref[0], ref[0]})}, ref));
}

TEST(Verify, SequentialTurnsInOrder) {
  const std::vector<ToolCall> ref = {call("f", {{"a", Value(1)}}), call("g", {{"b", Value(2)}})};
  const std::string think = "<think>\nok\n</think>\n\n";
  EXPECT_TRUE(verify_texts({think + render_call_list({ref[0]}), think + render_call_list({ref[1]})},
                           ref));
  EXPECT_FALSE(verify_texts(
      {think + render_call_list({ref[1]}), think + render_call_list({ref[0]})}, ref));
}

TEST(Synthesize, LookupBatchAllVerifiedAndReproducible) {
  const auto samples = testing::lookup_samples(10);
  const testing::LookupOracle oracle(samples);
  const auto reg = testing::lookup_registry();
  const auto a = synthesize(samples, oracle, reg, {}, 1);
  const auto b = synthesize(samples, oracle, reg, {}, 2);
  EXPECT_EQ(a.report.verified, 10u);
  EXPECT_DOUBLE_EQ(a.report.success_rate(), 1.0);
  ASSERT_EQ(a.outcomes.size(), b.outcomes.size());
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    EXPECT_EQ(a.outcomes[i].id, samples[i].id);
    EXPECT_EQ(to_chat_record(samples[i], *a.outcomes[i].trajectory).dump(),
              to_chat_record(samples[i], *b.outcomes[i].trajectory).dump());
  }
}

TEST(Synthesize, CountMismatchIsDropped) {
  const auto batch = testing::exchange_batch(9);
  const auto result = synthesize(batch, builtin_script(), ToolRegistry::builtin());
  EXPECT_EQ(result.report.total, 10u);
  EXPECT_EQ(result.report.verified, 9u);
  EXPECT_EQ(result.report.failures.at(kCountMismatch), 1u);
  EXPECT_FALSE(result.outcomes.back().trajectory);
  EXPECT_EQ(result.outcomes.back().failure, std::string(kCountMismatch));
}

TEST(Synthesize, FailuresMapToTaxonomy) {
  const auto seed = builtin_seed("exchange-budget");
  const auto reg = ToolRegistry::builtin();
  FixedOracle garbage({"x", "y"});
  EXPECT_EQ(synthesize_one(seed, garbage, reg, {}).failure,
            std::string(kDecompositionParseError));
  FixedOracle down({});
  EXPECT_EQ(synthesize_one(seed, down, reg, {}).failure, std::string(kOracleUnavailable));
  ToolRegistry empty;
  EXPECT_EQ(synthesize_one(seed, builtin_script(), empty, {}).failure,
            std::string(kToolNotFound));
  FixedOracle no_call({R"([{"step": 1, "description": "a"}, {"step": 2, "description": "b"}])",
                       "<think>\nx\n</think>\n\nnothing"});
  EXPECT_EQ(synthesize_one(seed, no_call, reg, {}).failure, std::string(kSubtaskParseError));
}

TEST(Synthesize, GuidanceImprovesNoisySuccess) {
  const auto samples = testing::lookup_samples(200);
  auto inner = std::make_shared<testing::LookupOracle>(samples);
  const NoisyOracle oracle(inner, {0.6, 0.5, 0.5}, 11);
  const auto reg = testing::lookup_registry();
  PipelineOptions full;
  full.few_shots = builtin_few_shots();
  PipelineOptions ref_only;
  PipelineOptions none;
  none.prompt_with_reference = false;
  const double r_full = synthesize(samples, oracle, reg, full).report.success_rate();
  const double r_ref = synthesize(samples, oracle, reg, ref_only).report.success_rate();
  const double r_none = synthesize(samples, oracle, reg, none).report.success_rate();
  EXPECT_GT(r_full, r_ref);
  EXPECT_GT(r_ref, r_none);
}

TEST(ChatRecord, RoundTripVerifies) {
  const auto samples = testing::lookup_samples(5);
  const testing::LookupOracle oracle(samples);
  const auto result = synthesize(samples, oracle, testing::lookup_registry());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Json rec = to_chat_record(samples[i], *result.outcomes[i].trajectory);
    EXPECT_TRUE(verify_chat_record(Json::parse(rec.dump())));
    for (const auto& m : rec.at("messages")) {
      const std::string role = m.at("role");
      EXPECT_TRUE(role == "system" || role == "user" || role == "assistant" || role == "tool");
    }
  }
}

TEST(SeedSample, JsonRoundTrip) {
  for (const auto& s : builtin_seeds()) {
    const auto back = seed_sample_from_json(to_json(s));
    EXPECT_EQ(to_json(back), to_json(s));
  }
  EXPECT_THROW(seed_sample_from_json(Json::parse(R"({"id": "x"})")), InputError);
}

}  // namespace
}  // namespace toolreason
