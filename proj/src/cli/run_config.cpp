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

#include "toolreason/cli.h"

#include "toolreason/errors.h"

namespace toolreason::cli {
namespace {

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.is_object() || !j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InputError(std::string("config field '") + key + "' has the wrong type");
  }
}

const Json& section(const Json& j, const char* key) {
  static const Json kEmpty = Json::object();
  if (!j.contains(key)) return kEmpty;
  if (!j.at(key).is_object()) throw InputError(std::string("config section '") + key + "' must be an object");
  return j.at(key);
}

Json syntaxes_json(const ParseConfig& p) {
  Json out = Json::array();
  if (p.enabled(CallSyntax::BracketPython)) out.push_back("bracket");
  if (p.enabled(CallSyntax::JsonObject)) out.push_back("json");
  return out;
}

}  // namespace

Json to_json(const RunConfig& c) {
  return Json{
      {"advantage", toolreason::to_json(c.da)},
      {"lazy",
       {{"min_tokens", c.min_tokens}, {"min_reflections", c.min_reflections}, {"lexicon", c.lexicon}}},
      {"parse",
       {{"think_open", c.parse.think_open},
        {"think_close", c.parse.think_close},
        {"call_syntaxes", syntaxes_json(c.parse)}}},
      {"reward",
       {{"weights",
         {{"format", c.weights.format},
          {"struct", c.weights.structure},
          {"key", c.weights.key},
          {"value", c.weights.value}}}}},
      {"oracle",
       {{"kind", c.oracle}, {"script", c.script}, {"noise", c.noise}, {"http", toolreason::to_json(c.http)}}},
      {"pipeline",
       {{"registry", c.registry},
        {"templates", c.templates},
        {"few_shots", c.few_shots},
        {"prompt_with_reference", c.prompt_with_reference}}},
      {"io",
       {{"input", c.input}, {"gt", c.gt}, {"pred", c.pred}, {"out", c.out}, {"report", c.report}}},
      {"gradcheck", {{"fd_instances", c.fd_instances}, {"theorem_instances", c.theorem_instances}}},
      {"seed", c.seed},
      {"jobs", c.jobs},
      {"emit", c.emit},
  };
}

RunConfig run_config_from_json(const Json& raw, RunConfig c) {
  if (!raw.is_object()) throw InputError("config must be a JSON object");
  const Json& j = raw.value("type", "") == "header" ? section(raw, "config") : raw;

  if (j.contains("advantage")) c.da = da_config_from_json(section(j, "advantage"), c.da);

  const Json& lazy = section(j, "lazy");
  read(lazy, "min_tokens", c.min_tokens);
  read(lazy, "min_reflections", c.min_reflections);
  read(lazy, "lexicon", c.lexicon);

  const Json& parse = section(j, "parse");
  read(parse, "think_open", c.parse.think_open);
  read(parse, "think_close", c.parse.think_close);
  if (parse.contains("call_syntaxes")) {
    std::vector<std::string> names;
    read(parse, "call_syntaxes", names);
    c.parse.call_syntaxes = 0;
    for (const auto& n : names) {
      if (n == "bracket") {
        c.parse.call_syntaxes |= static_cast<unsigned>(CallSyntax::BracketPython);
      } else if (n == "json") {
        c.parse.call_syntaxes |= static_cast<unsigned>(CallSyntax::JsonObject);
      } else {
        throw InputError("unknown call syntax '" + n + "' (expected bracket or json)");
      }
    }
  }

  const Json& weights = section(section(j, "reward"), "weights");
  read(weights, "format", c.weights.format);
  read(weights, "struct", c.weights.structure);
  read(weights, "key", c.weights.key);
  read(weights, "value", c.weights.value);

  const Json& oracle = section(j, "oracle");
  read(oracle, "kind", c.oracle);
  read(oracle, "script", c.script);
  read(oracle, "noise", c.noise);
  if (oracle.contains("http")) c.http = http_oracle_config_from_json(section(oracle, "http"), c.http);

  const Json& pipeline = section(j, "pipeline");
  read(pipeline, "registry", c.registry);
  read(pipeline, "templates", c.templates);
  read(pipeline, "few_shots", c.few_shots);
  read(pipeline, "prompt_with_reference", c.prompt_with_reference);

  const Json& io = section(j, "io");
  read(io, "input", c.input);
  read(io, "gt", c.gt);
  read(io, "pred", c.pred);
  read(io, "out", c.out);
  read(io, "report", c.report);

  const Json& gc = section(j, "gradcheck");
  read(gc, "fd_instances", c.fd_instances);
  read(gc, "theorem_instances", c.theorem_instances);

  read(j, "seed", c.seed);
  read(j, "jobs", c.jobs);
  read(j, "emit", c.emit);
  return c;
}

void validate(const RunConfig& c) {
  if (c.min_tokens < 0 || c.min_reflections < 0) {
    throw InputError("min_tokens and min_reflections must be non-negative");
  }
  if (c.parse.call_syntaxes == 0) throw InputError("at least one call syntax must be enabled");
  if (c.parse.think_open.empty() || c.parse.think_close.empty()) {
    throw InputError("think tags must be non-empty");
  }
  if (c.oracle != "scripted" && c.oracle != "http") {
    throw InputError("oracle must be 'scripted' or 'http'");
  }
  if (c.noise < 0.0 || c.noise > 1.0) throw InputError("noise must lie in [0, 1]");
  if (c.jobs < 1) throw InputError("jobs must be at least 1");
  if (c.emit != "jsonl" && c.emit != "csv" && c.emit != "plots") {
    throw InputError("emit must be jsonl, csv or plots");
  }
  if (c.fd_instances < 1 || c.theorem_instances < 1) {
    throw InputError("gradcheck instance counts must be positive");
  }
  // Re-run the advantage checks.
  da_config_from_json(toolreason::to_json(c.da));
}

}  // namespace toolreason::cli
