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
 * Trajectory synthesis: decompose a query into subtasks with an oracle,
 * solve each subtask (executing tools for sequential plans), compose the
 * pieces into one reasoning trajectory and keep it only when its calls
 * reproduce the reference calls.
 *
 *     plan    = decompose(ctx, reference, oracle)
 *     reject unless check_plan(plan, reference)
 *     results = execute_sequential(...) | execute_parallel(...)
 *             | explain_irrelevant(...)
 *     out     = compose(...)
 *     keep out iff verify(out, reference)
 */

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toolreason/errors.h"
#include "toolreason/oracle.h"
#include "toolreason/registry.h"
#include "toolreason/subtask.h"
#include "toolreason/templates.h"
#include "toolreason/types.h"

namespace toolreason {

enum class Scenario { Sequential, Parallel, Irrelevant };

std::string_view to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view s);

struct SubtaskPlan {
  Scenario scenario = Scenario::Sequential;
  std::vector<Subtask> subtasks;

  friend bool operator==(const SubtaskPlan&, const SubtaskPlan&) = default;
};

Json to_json(const SubtaskPlan& plan);

/// One assistant turn of a composed trajectory and the tool output that
/// followed it, if any.
struct ComposedTurn {
  std::string text;
  std::optional<Value> observation;
};

struct ComposedTrajectory {
  std::vector<ComposedTurn> turns;  // the last turn is the training target
  std::string text;                 // == turns.back().text
  SubtaskPlan source_plan;
  bool verified = false;
};

struct PipelineOptions {
  TemplateSet templates = TemplateSet::defaults();
  GenerationParams params;
  /// Show the reference calls to the oracle during decomposition. Verification
  /// always uses them.
  bool prompt_with_reference = true;
  std::vector<std::string> few_shots;
};

/// The messages the oracle sees for decomposition.
std::vector<ChatMessage> decomposition_prompt(const Context& ctx,
                                              const std::vector<ToolCall>& reference,
                                              const PipelineOptions& opts);

/// Reads {"scenario", "subtasks"} or a bare subtask array (scenario then
/// defaults to Sequential). Throws DecompositionParseError.
SubtaskPlan parse_plan(std::string_view text, bool reference_empty);

/// One retry with a corrective message, then DecompositionParseError.
SubtaskPlan decompose(const Context& ctx, const std::vector<ToolCall>& reference,
                      const OracleClient& oracle, const PipelineOptions& opts = {});

/// Subtask count equals reference call count.
bool check_plan(const SubtaskPlan& plan, const std::vector<ToolCall>& reference);

/// Initial running input: system (policy and tool list), history, query.
std::vector<ChatMessage> initial_messages(const Context& ctx);

std::vector<SubtaskResult> execute_sequential(const Context& ctx, const SubtaskPlan& plan,
                                              const OracleClient& oracle,
                                              const ToolRegistry& registry,
                                              const PipelineOptions& opts = {});

/// Same context for every subtask, no tool execution. Oracle calls run
/// concurrently when OpenMP has threads to spare.
std::vector<SubtaskResult> execute_parallel(const Context& ctx, const SubtaskPlan& plan,
                                            const OracleClient& oracle,
                                            const PipelineOptions& opts = {});

std::string explain_irrelevant(const Context& ctx, const OracleClient& oracle,
                               const PipelineOptions& opts = {});

ComposedTrajectory compose(const SubtaskPlan& plan, const std::vector<SubtaskResult>& results,
                           const TemplateSet& templates = TemplateSet::defaults());
/// Irrelevant scenario: explanation in the think block, answer_text after it.
ComposedTrajectory compose_irrelevant(const std::string& explanation,
                                      const std::optional<std::string>& answer_text,
                                      const TemplateSet& templates = TemplateSet::defaults());

/// Calls of every assistant text, in order, must reproduce the reference:
/// structure, key and value rewards all 1.
bool verify_texts(const std::vector<std::string>& assistant_texts,
                  const std::vector<ToolCall>& reference);
bool verify(const ComposedTrajectory& composed, const std::vector<ToolCall>& reference);

struct SeedSample {
  std::string id;
  Context context;
  std::vector<ToolCall> reference;
  std::optional<std::string> answer_text;
};

SeedSample seed_sample_from_json(const Json& j);
Json to_json(const SeedSample& s);

/// Failure taxonomy keys.
inline constexpr const char* kCountMismatch = "count_mismatch";
inline constexpr const char* kDecompositionParseError = "decomposition_parse_error";
inline constexpr const char* kSubtaskParseError = "subtask_parse_error";
inline constexpr const char* kToolNotFound = "tool_not_found";
inline constexpr const char* kToolArgError = "tool_arg_error";
inline constexpr const char* kOracleUnavailable = "oracle_unavailable";
inline constexpr const char* kTemplateError = "template_error";
inline constexpr const char* kVerificationFailed = "verification_failed";
inline constexpr const char* kInputError = "input_error";

struct SampleOutcome {
  std::string id;
  std::optional<SubtaskPlan> plan;
  std::optional<ComposedTrajectory> trajectory;  // set only when verified
  std::optional<std::string> failure;            // taxonomy key
  std::string message;
};

struct SynthesisReport {
  std::size_t total = 0;
  std::size_t verified = 0;
  std::map<std::string, std::size_t> failures;

  double success_rate() const;
  Json to_json() const;
};

struct SynthesisResult {
  std::vector<SampleOutcome> outcomes;  // input order
  SynthesisReport report;
};

/// Runs one sample end to end; never throws for pipeline failures.
SampleOutcome synthesize_one(const SeedSample& sample, const OracleClient& oracle,
                             const ToolRegistry& registry, const PipelineOptions& opts);

/// Samples run concurrently on up to `jobs` threads; output order is input
/// order.
SynthesisResult synthesize(const std::vector<SeedSample>& samples, const OracleClient& oracle,
                           const ToolRegistry& registry, const PipelineOptions& opts = {},
                           int jobs = 1);

/// Chat-format training record: system, history, user, then the composed
/// assistant turns with tool messages between them. Carries the reference so
/// the record can be verified again.
Json to_chat_record(const SeedSample& sample, const ComposedTrajectory& composed);

/// Re-verifies a record produced by to_chat_record.
bool verify_chat_record(const Json& record);

/// The shipped example seeds, scripted oracle and few-shot examples.
std::vector<SeedSample> builtin_seeds();
ScriptedOracle builtin_script();
std::vector<std::string> builtin_few_shots();

}  // namespace toolreason
