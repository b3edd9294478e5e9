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

#include "toolreason/types.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "toolreason/errors.h"

namespace toolreason {

std::optional<std::string> ToolCall::validate() const {
  if (name.empty()) return "empty tool name";
  if (std::any_of(name.begin(), name.end(),
                  [](unsigned char c) { return std::isspace(c) != 0; })) {
    return "tool name contains whitespace";
  }
  std::set<std::string_view> seen;
  for (const auto& m : args) {
    if (!seen.insert(m.key).second) return "duplicate argument key '" + m.key + "'";
  }
  return std::nullopt;
}

bool tool_call_equal(const ToolCall& a, const ToolCall& b) {
  return a.name == b.name && values_equal(Value(a.args), Value(b.args));
}

std::string render_call(const ToolCall& call) {
  std::string out = call.name + "(";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i) out += ", ";
    out += call.args[i].key + "=" + to_python_literal(call.args[i].value);
  }
  return out + ")";
}

std::string render_call_list(const std::vector<ToolCall>& calls) {
  std::string out = "[";
  for (std::size_t i = 0; i < calls.size(); ++i) {
    if (i) out += ", ";
    out += render_call(calls[i]);
  }
  return out + "]";
}

Json to_json(const ToolCall& call) {
  return Json{{"name", call.name}, {"args", to_json(Value(call.args))}};
}

ToolCall tool_call_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) {
    throw InputError("tool call must be an object with a string 'name'");
  }
  ToolCall call{j["name"].get<std::string>(), {}};
  const Json* args = nullptr;
  for (const char* key : {"arguments", "args", "parameters"}) {
    if (j.contains(key)) {
      args = &j[key];
      break;
    }
  }
  if (args == nullptr || args->is_null()) return call;
  Json parsed = *args;
  if (args->is_string()) {
    parsed = Json::parse(args->get<std::string>(), nullptr, false);
    if (parsed.is_discarded()) {
      throw InputError("arguments string for '" + call.name + "' is not valid JSON");
    }
  }
  if (!parsed.is_object()) {
    throw InputError("arguments for '" + call.name + "' must be an object");
  }
  call.args = value_from_json(parsed).as_object();
  return call;
}

std::string_view to_string(Behavior b) {
  switch (b) {
    case Behavior::TaskDecomposition:
      return "TaskDecomposition";
    case Behavior::Reflection:
      return "Reflection";
    case Behavior::Verification:
      return "Verification";
    case Behavior::Deduction:
      return "Deduction";
  }
  return "Deduction";
}

std::optional<Behavior> behavior_from_string(std::string_view s) {
  for (Behavior b : kAllBehaviors) {
    if (to_string(b) == s) return b;
  }
  return std::nullopt;
}

Json to_json(const ToolSpec& spec) {
  Json params = Json::array();
  for (const auto& p : spec.params) {
    params.push_back({{"key", p.key}, {"type", p.type}, {"required", p.required}});
  }
  return Json{{"name", spec.name}, {"description", spec.description}, {"params", params}};
}

ToolSpec tool_spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("name")) {
    throw InputError("tool spec must be an object with 'name'");
  }
  ToolSpec spec;
  spec.name = j["name"].get<std::string>();
  spec.description = j.value("description", "");
  if (j.contains("params")) {
    for (const auto& p : j["params"]) {
      spec.params.push_back(ParamSpec{p.at("key").get<std::string>(),
                                      p.value("type", "string"),
                                      p.value("required", false)});
    }
  } else if (j.contains("parameters") && j["parameters"].is_object()) {
    const auto& schema = j["parameters"];
    std::set<std::string> required;
    if (schema.contains("required")) {
      for (const auto& r : schema["required"]) required.insert(r.get<std::string>());
    }
    if (schema.contains("properties")) {
      for (const auto& [key, prop] : schema["properties"].items()) {
        spec.params.push_back(
            ParamSpec{key, prop.value("type", "string"), required.count(key) > 0});
      }
    }
  }
  std::set<std::string_view> seen;
  for (const auto& p : spec.params) {
    if (!seen.insert(p.key).second) {
      throw InputError("duplicate parameter '" + p.key + "' in tool '" + spec.name + "'");
    }
  }
  return spec;
}

const ToolSpec* Context::find_tool(std::string_view name) const {
  for (const auto& t : tools) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

}  // namespace toolreason
