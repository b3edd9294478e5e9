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

#include <exception>

#include <omp.h>

#include "builtin_data.h"
#include "toolreason/io.h"
#include "toolreason/pipeline.h"

namespace toolreason {
namespace {

std::string string_field(const Json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) throw InputError(std::string("seed sample is missing '") + key + "'");
    return "";
  }
  const Json& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() && std::string_view(key) == "id") return v.dump();
  throw InputError(std::string("seed field '") + key + "' must be a string");
}

std::vector<ToolCall> calls_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string("'") + what + "' must be an array of calls");
  std::vector<ToolCall> calls;
  for (const auto& c : j) calls.push_back(tool_call_from_json(c));
  return calls;
}

void fail(SampleOutcome& out, const char* key, const std::exception& e) {
  out.failure = key;
  out.message = e.what();
}

Json message_json(const std::string& role, const std::string& content) {
  return Json{{"role", role}, {"content", content}};
}

}  // namespace

SeedSample seed_sample_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("seed sample must be a JSON object");
  SeedSample s;
  s.id = string_field(j, "id", true);
  s.context.policy = string_field(j, "policy", false);
  s.context.query = string_field(j, "query", true);
  if (j.contains("tools")) {
    if (!j.at("tools").is_array()) throw InputError("'tools' must be an array");
    for (const auto& t : j.at("tools")) {
      ToolSpec spec = tool_spec_from_json(t);
      if (s.context.find_tool(spec.name) != nullptr) {
        throw InputError("duplicate tool '" + spec.name + "' in sample '" + s.id + "'");
      }
      s.context.tools.push_back(std::move(spec));
    }
  }
  if (j.contains("history")) {
    if (!j.at("history").is_array()) throw InputError("'history' must be an array");
    for (const auto& m : j.at("history")) {
      if (!m.is_object() || !m.contains("role") || !m.contains("content") ||
          !m.at("role").is_string() || !m.at("content").is_string()) {
        throw InputError("history entries need string 'role' and 'content'");
      }
      s.context.history.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    }
  }
  if (j.contains("reference")) s.reference = calls_from_json(j.at("reference"), "reference");
  if (j.contains("answer_text") && !j.at("answer_text").is_null()) {
    s.answer_text = string_field(j, "answer_text", true);
  }
  return s;
}

Json to_json(const SeedSample& s) {
  Json tools = Json::array();
  for (const auto& t : s.context.tools) tools.push_back(to_json(t));
  Json history = Json::array();
  for (const auto& m : s.context.history) history.push_back(message_json(m.role, m.content));
  Json reference = Json::array();
  for (const auto& c : s.reference) reference.push_back(to_json(c));
  Json j{{"id", s.id},         {"policy", s.context.policy}, {"tools", tools},
         {"history", history}, {"query", s.context.query},   {"reference", reference}};
  if (s.answer_text) j["answer_text"] = *s.answer_text;
  return j;
}

double SynthesisReport::success_rate() const {
  return total == 0 ? 0.0 : static_cast<double>(verified) / static_cast<double>(total);
}

Json SynthesisReport::to_json() const {
  Json f = Json::object();
  for (const auto& [k, v] : failures) f[k] = v;
  return Json{{"total", total}, {"verified", verified}, {"success_rate", success_rate()},
              {"failures", f}};
}

SampleOutcome synthesize_one(const SeedSample& sample, const OracleClient& oracle,
                             const ToolRegistry& registry, const PipelineOptions& opts) {
  SampleOutcome out;
  out.id = sample.id;
  try {
    const SubtaskPlan plan = decompose(sample.context, sample.reference, oracle, opts);
    out.plan = plan;
    if (!check_plan(plan, sample.reference)) {
      out.failure = kCountMismatch;
      out.message = "plan has " + std::to_string(plan.subtasks.size()) +
                    " subtasks, reference has " + std::to_string(sample.reference.size()) +
                    " calls";
      return out;
    }

    ComposedTrajectory composed;
    switch (plan.scenario) {
      case Scenario::Sequential:
        composed = compose(plan,
                           execute_sequential(sample.context, plan, oracle, registry, opts),
                           opts.templates);
        break;
      case Scenario::Parallel:
        composed = compose(plan, execute_parallel(sample.context, plan, oracle, opts),
                           opts.templates);
        break;
      case Scenario::Irrelevant:
        composed = compose_irrelevant(explain_irrelevant(sample.context, oracle, opts),
                                      sample.answer_text, opts.templates);
        break;
    }

    if (!verify(composed, sample.reference)) {
      out.failure = kVerificationFailed;
      out.message = "composed calls do not reproduce the reference";
      return out;
    }
    composed.verified = true;
    out.trajectory = std::move(composed);
  } catch (const DecompositionParseError& e) {
    fail(out, kDecompositionParseError, e);
  } catch (const SubtaskParseError& e) {
    fail(out, kSubtaskParseError, e);
  } catch (const ToolNotFound& e) {
    fail(out, kToolNotFound, e);
  } catch (const ToolArgError& e) {
    fail(out, kToolArgError, e);
  } catch (const OracleUnavailable& e) {
    fail(out, kOracleUnavailable, e);
  } catch (const TemplateError& e) {
    fail(out, kTemplateError, e);
  } catch (const InputError& e) {
    fail(out, kInputError, e);
  }
  return out;
}

SynthesisResult synthesize(const std::vector<SeedSample>& samples, const OracleClient& oracle,
                           const ToolRegistry& registry, const PipelineOptions& opts, int jobs) {
  SynthesisResult result;
  result.outcomes.resize(samples.size());
  std::vector<std::exception_ptr> errors(samples.size());
  const long long n = static_cast<long long>(samples.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      result.outcomes[k] = synthesize_one(samples[k], oracle, registry, opts);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  result.report.total = samples.size();
  for (const auto& o : result.outcomes) {
    if (o.trajectory) {
      ++result.report.verified;
    } else if (o.failure) {
      ++result.report.failures[*o.failure];
    }
  }
  return result;
}

Json to_chat_record(const SeedSample& sample, const ComposedTrajectory& composed) {
  Json messages = Json::array();
  for (const auto& m : initial_messages(sample.context)) messages.push_back(message_json(m.role, m.content));
  for (std::size_t k = 0; k < composed.turns.size(); ++k) {
    const auto& turn = composed.turns[k];
    messages.push_back(message_json("assistant", turn.text));
    if (k + 1 < composed.turns.size() && turn.observation) {
      messages.push_back(message_json("tool", to_json(*turn.observation).dump()));
    }
  }
  Json reference = Json::array();
  for (const auto& c : sample.reference) reference.push_back(to_json(c));
  return Json{{"id", sample.id},
              {"scenario", to_string(composed.source_plan.scenario)},
              {"messages", messages},
              {"reference", reference}};
}

bool verify_chat_record(const Json& record) {
  if (!record.is_object() || !record.contains("messages") || !record.at("messages").is_array()) {
    throw InputError("dataset record needs a 'messages' array");
  }
  const std::vector<ToolCall> reference =
      record.contains("reference") ? calls_from_json(record.at("reference"), "reference")
                                   : std::vector<ToolCall>{};
  // Only the turns after the final user message were composed.
  const Json& messages = record.at("messages");
  std::size_t first = 0;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (messages[i].is_object() && messages[i].value("role", "") == "user") first = i + 1;
  }
  std::vector<std::string> texts;
  for (std::size_t i = first; i < messages.size(); ++i) {
    const Json& m = messages[i];
    if (m.is_object() && m.value("role", "") == "assistant" && m.contains("content") &&
        m.at("content").is_string()) {
      texts.push_back(m.at("content").get<std::string>());
    }
  }
  if (texts.empty()) return false;
  return verify_texts(texts, reference);
}

std::vector<SeedSample> builtin_seeds() {
  std::vector<SeedSample> out;
  for (const auto& j : io::parse_jsonl(std::string(builtin::seeds_jsonl()), "<builtin seeds>")) {
    out.push_back(seed_sample_from_json(j));
  }
  return out;
}

ScriptedOracle builtin_script() {
  return ScriptedOracle::from_json(Json::parse(builtin::script_json()));
}

std::vector<std::string> builtin_few_shots() {
  return Json::parse(builtin::few_shots_json()).get<std::vector<std::string>>();
}

}  // namespace toolreason
