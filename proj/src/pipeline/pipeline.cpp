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

#include "toolreason/pipeline.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>

#include "json_block.h"
#include "toolreason/parser.h"
#include "toolreason/reward.h"

namespace toolreason {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string wrap_turn(std::string_view body, std::string_view answer) {
  return "<think>\n" + trim(body) + "\n</think>\n\n" + std::string(answer);
}

std::string render_tools(const std::vector<ToolSpec>& tools) {
  if (tools.empty()) return "None";
  std::vector<std::string> lines;
  for (const auto& t : tools) lines.push_back(to_json(t).dump());
  return join(lines, "\n");
}

std::string render_history(const std::vector<ChatMessage>& history) {
  if (history.empty()) return "None";
  std::vector<std::string> lines;
  for (const auto& m : history) lines.push_back(m.role + ": " + m.content);
  return join(lines, "\n");
}

std::string plan_items(const SubtaskPlan& plan, std::size_t count, const TemplateSet& templates) {
  std::vector<std::string> items;
  for (std::size_t i = 0; i < count && i < plan.subtasks.size(); ++i) {
    const auto& s = plan.subtasks[i];
    items.push_back(render_template(templates.plan_item,
                                    {{"step", std::to_string(s.step)}, {"description", s.description}}));
  }
  return join(items, "\n");
}

std::vector<ChatMessage> subtask_prompt(const std::vector<ChatMessage>& state, const Subtask& s,
                                        const PipelineOptions& opts) {
  std::vector<ChatMessage> msgs = state;
  msgs.push_back({"user", render_template(opts.templates.subtask,
                                          {{"step", std::to_string(s.step)},
                                           {"description", s.description}})});
  return msgs;
}

// Oracle output for one subtask -> reasoning and first tool call.
SubtaskResult read_subtask(const Subtask& s, std::string raw,
                           const std::vector<SubtaskResult>& completed) {
  SubtaskResult r;
  r.subtask = s;
  r.raw = std::move(raw);
  if (trim(r.raw).empty()) {
    throw SubtaskParseError("subtask " + std::to_string(s.step) + ": empty oracle output", s.step,
                            completed);
  }
  Trajectory t = parse_output(r.raw).trajectory;
  if (t.calls.empty()) {
    throw SubtaskParseError("subtask " + std::to_string(s.step) + ": no tool call in oracle output",
                            s.step, completed);
  }
  r.reasoning = t.reasoning.value_or("");
  r.call = t.calls.front();
  return r;
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::Sequential:
      return "sequential";
    case Scenario::Parallel:
      return "parallel";
    case Scenario::Irrelevant:
      return "irrelevant";
  }
  return "sequential";
}

std::optional<Scenario> scenario_from_string(std::string_view s) {
  const std::string l = lower(trim(s));
  if (l == "sequential") return Scenario::Sequential;
  if (l == "parallel") return Scenario::Parallel;
  if (l == "irrelevant" || l == "irrelevance") return Scenario::Irrelevant;
  return std::nullopt;
}

Json to_json(const SubtaskPlan& plan) {
  Json subtasks = Json::array();
  for (const auto& s : plan.subtasks) {
    subtasks.push_back({{"step", s.step}, {"description", s.description}});
  }
  return Json{{"scenario", to_string(plan.scenario)}, {"subtasks", subtasks}};
}

std::vector<ChatMessage> decomposition_prompt(const Context& ctx,
                                              const std::vector<ToolCall>& reference,
                                              const PipelineOptions& opts) {
  std::vector<std::string> examples;
  for (std::size_t i = 0; i < opts.few_shots.size(); ++i) {
    examples.push_back(render_template(opts.templates.example,
                                       {{"index", std::to_string(i + 1)}, {"text", opts.few_shots[i]}}));
  }
  const bool show_reference = opts.prompt_with_reference && !reference.empty();
  TemplateVars vars = {
      {"policy", ctx.policy.empty() ? "None" : ctx.policy},
      {"tools", render_tools(ctx.tools)},
      {"history", render_history(ctx.history)},
      {"query", ctx.query},
      {"reference", show_reference ? render_call_list(reference) : std::string(kNoReference)},
      {"examples", examples.empty() ? "" : "\n" + join(examples, "\n")},
  };
  return {{"user", render_template(opts.templates.decompose, vars)}};
}

SubtaskPlan parse_plan(std::string_view text, bool reference_empty) {
  const auto j = detail::extract_json_block(text);
  if (!j) throw DecompositionParseError("decomposition output contains no JSON");

  std::optional<Scenario> declared;
  const Json* list = nullptr;
  static const Json kEmpty = Json::array();
  if (j->is_object()) {
    if (j->contains("scenario")) {
      const auto& sc = j->at("scenario");
      if (!sc.is_string()) throw DecompositionParseError("'scenario' must be a string");
      declared = scenario_from_string(sc.get<std::string>());
      if (!declared) {
        throw DecompositionParseError("unknown scenario '" + sc.get<std::string>() + "'");
      }
    }
    if (j->contains("subtasks")) {
      list = &j->at("subtasks");
    } else if (declared == Scenario::Irrelevant) {
      list = &kEmpty;
    } else {
      throw DecompositionParseError("decomposition object has no 'subtasks'");
    }
  } else if (j->is_array()) {
    list = &*j;
  } else {
    throw DecompositionParseError("decomposition output is neither an object nor an array");
  }
  if (!list->is_array()) throw DecompositionParseError("'subtasks' must be an array");

  SubtaskPlan plan;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const Json& item = list->at(i);
    if (!item.is_object() || !item.contains("step") || !item.contains("description")) {
      throw DecompositionParseError("subtask " + std::to_string(i + 1) +
                                    " needs 'step' and 'description'");
    }
    const Json& step = item.at("step");
    const Json& desc = item.at("description");
    if (!step.is_number() || !desc.is_string()) {
      throw DecompositionParseError("subtask " + std::to_string(i + 1) + " has malformed fields");
    }
    const double n = step.get<double>();
    if (n != static_cast<double>(i + 1)) {
      throw DecompositionParseError("subtask steps must run 1..n in order; found " + step.dump() +
                                    " at position " + std::to_string(i + 1));
    }
    const std::string d = trim(desc.get<std::string>());
    if (d.empty()) {
      throw DecompositionParseError("subtask " + std::to_string(i + 1) + " has no description");
    }
    plan.subtasks.push_back({static_cast<int>(i + 1), d});
  }

  if (declared == Scenario::Irrelevant && !plan.subtasks.empty()) {
    throw DecompositionParseError("an irrelevant scenario cannot list subtasks");
  }
  if (plan.subtasks.empty() && reference_empty) {
    plan.scenario = Scenario::Irrelevant;
  } else {
    plan.scenario = declared.value_or(Scenario::Sequential);
  }
  return plan;
}

SubtaskPlan decompose(const Context& ctx, const std::vector<ToolCall>& reference,
                      const OracleClient& oracle, const PipelineOptions& opts) {
  auto messages = decomposition_prompt(ctx, reference, opts);
  const std::string first = oracle.generate(messages, opts.params);
  try {
    return parse_plan(first, reference.empty());
  } catch (const DecompositionParseError& e) {
    messages.push_back({"assistant", first});
    messages.push_back({"user", render_template(opts.templates.decompose_retry, {})});
    const std::string second = oracle.generate(messages, opts.params);
    try {
      return parse_plan(second, reference.empty());
    } catch (const DecompositionParseError& retry) {
      throw DecompositionParseError(std::string("decomposition unreadable after retry: ") +
                                    retry.what());
    }
  }
}

bool check_plan(const SubtaskPlan& plan, const std::vector<ToolCall>& reference) {
  return plan.subtasks.size() == reference.size();
}

std::vector<ChatMessage> initial_messages(const Context& ctx) {
  std::vector<ChatMessage> msgs;
  std::string system = ctx.policy;
  if (!ctx.tools.empty()) {
    if (!system.empty()) system += "\n\n";
    system += "Available tools:\n" + render_tools(ctx.tools);
  }
  msgs.push_back({"system", system});
  msgs.insert(msgs.end(), ctx.history.begin(), ctx.history.end());
  if (!ctx.query.empty()) msgs.push_back({"user", ctx.query});
  return msgs;
}

std::vector<SubtaskResult> execute_sequential(const Context& ctx, const SubtaskPlan& plan,
                                              const OracleClient& oracle,
                                              const ToolRegistry& registry,
                                              const PipelineOptions& opts) {
  if (plan.scenario != Scenario::Sequential) {
    throw InputError("execute_sequential needs a sequential plan");
  }
  std::vector<SubtaskResult> results;
  std::vector<ChatMessage> state = initial_messages(ctx);
  for (const auto& s : plan.subtasks) {
    SubtaskResult r = read_subtask(s, oracle.generate(subtask_prompt(state, s, opts), opts.params),
                                   results);
    try {
      r.observation = registry.execute(*r.call);
    } catch (const ToolNotFound& e) {
      throw ToolNotFound(e.what(), s.step, results);
    } catch (const ToolArgError& e) {
      throw ToolArgError(e.what(), s.step, results);
    }
    state.push_back({"assistant", render_call_list({*r.call})});
    state.push_back({"tool", to_json(*r.observation).dump()});
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<SubtaskResult> execute_parallel(const Context& ctx, const SubtaskPlan& plan,
                                            const OracleClient& oracle,
                                            const PipelineOptions& opts) {
  if (plan.scenario != Scenario::Parallel) {
    throw InputError("execute_parallel needs a parallel plan");
  }
  const std::vector<ChatMessage> state = initial_messages(ctx);
  const long long n = static_cast<long long>(plan.subtasks.size());
  std::vector<std::string> raws(plan.subtasks.size());
  std::vector<std::exception_ptr> errors(plan.subtasks.size());

#pragma omp parallel for schedule(dynamic, 1) if (n > 1)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      raws[k] = oracle.generate(subtask_prompt(state, plan.subtasks[k], opts), opts.params);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }

  std::vector<SubtaskResult> results;
  for (std::size_t k = 0; k < plan.subtasks.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    results.push_back(read_subtask(plan.subtasks[k], std::move(raws[k]), results));
  }
  return results;
}

std::string explain_irrelevant(const Context& ctx, const OracleClient& oracle,
                               const PipelineOptions& opts) {
  std::vector<ChatMessage> msgs = initial_messages(ctx);
  msgs.push_back({"user", render_template(opts.templates.irrelevant_prompt, {{"query", ctx.query}})});
  const std::string raw = oracle.generate(msgs, opts.params);
  if (trim(raw).empty()) return "";
  const Trajectory t = parse_output(raw).trajectory;
  if (t.reasoning && !t.reasoning->empty()) return *t.reasoning;
  return trim(t.answer);
}

ComposedTrajectory compose(const SubtaskPlan& plan, const std::vector<SubtaskResult>& results,
                           const TemplateSet& templates) {
  if (plan.scenario == Scenario::Irrelevant) {
    throw TemplateError("irrelevant plans are composed with compose_irrelevant");
  }
  if (results.empty()) throw TemplateError("no subtask results to compose");
  if (results.size() != plan.subtasks.size()) {
    throw TemplateError("plan has " + std::to_string(plan.subtasks.size()) + " subtasks but " +
                        std::to_string(results.size()) + " results were given");
  }
  for (const auto& r : results) {
    if (!r.call) throw TemplateError("subtask " + std::to_string(r.subtask.step) + " has no call");
  }

  ComposedTrajectory out;
  out.source_plan = plan;
  const std::string plan_block = plan_items(plan, plan.subtasks.size(), templates);

  if (plan.scenario == Scenario::Sequential) {
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto& r = results[k];
      TemplateVars vars = {{"step", std::to_string(r.subtask.step)},
                           {"description", r.subtask.description},
                           {"reasoning", r.reasoning}};
      std::string body;
      if (k == 0) {
        vars["plan"] = plan_block;
        body = render_template(templates.sequential_first, vars);
      } else {
        vars["solved"] = plan_items(plan, k, templates);
        body = render_template(templates.sequential_next, vars);
      }
      out.turns.push_back({wrap_turn(body, render_call_list({*r.call})), r.observation});
    }
  } else {
    std::vector<std::string> analyses;
    std::vector<ToolCall> calls;
    for (const auto& r : results) {
      analyses.push_back(render_template(templates.parallel_analysis,
                                         {{"step", std::to_string(r.subtask.step)},
                                          {"description", r.subtask.description},
                                          {"reasoning", r.reasoning}}));
      calls.push_back(*r.call);
    }
    const std::string body = render_template(
        templates.parallel, {{"plan", plan_block},
                             {"analyses", join(analyses, "\n\n")},
                             {"reflection", templates.parallel_reflection}});
    out.turns.push_back({wrap_turn(body, render_call_list(calls)), std::nullopt});
  }
  out.text = out.turns.back().text;
  return out;
}

ComposedTrajectory compose_irrelevant(const std::string& explanation,
                                      const std::optional<std::string>& answer_text,
                                      const TemplateSet& templates) {
  if (trim(explanation).empty()) throw TemplateError("irrelevant scenario needs an explanation");
  if (!answer_text || trim(*answer_text).empty()) {
    throw TemplateError("irrelevant scenario needs the reference answer text");
  }
  const std::string body = render_template(
      templates.irrelevant,
      {{"explanation", trim(explanation)}, {"reflection", templates.irrelevant_reflection}});
  ComposedTrajectory out;
  out.source_plan = {Scenario::Irrelevant, {}};
  out.turns.push_back({wrap_turn(body, trim(*answer_text)), std::nullopt});
  out.text = out.turns.back().text;
  return out;
}

bool verify_texts(const std::vector<std::string>& assistant_texts,
                  const std::vector<ToolCall>& reference) {
  std::vector<ToolCall> calls;
  for (const auto& text : assistant_texts) {
    if (text.empty()) continue;
    auto parsed = parse_output(text).trajectory.calls;
    calls.insert(calls.end(), parsed.begin(), parsed.end());
  }
  const RewardBreakdown r = score_calls(0.0, reference, calls);
  if (r.structure != 1.0 || r.key != 1.0 || r.value != 1.0) return false;
  // The union must follow the reference order.
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (calls[i].name != reference[i].name) return false;
  }
  return true;
}

bool verify(const ComposedTrajectory& composed, const std::vector<ToolCall>& reference) {
  std::vector<std::string> texts;
  for (const auto& t : composed.turns) texts.push_back(t.text);
  if (texts.empty()) texts.push_back(composed.text);
  return verify_texts(texts, reference);
}

}  // namespace toolreason
