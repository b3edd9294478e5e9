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

#include "toolreason/registry.h"

#include "builtin_data.h"
#include "toolreason/io.h"

namespace toolreason {
namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

std::vector<std::string> missing_required(const ToolSpec& spec, const Object& args) {
  std::vector<std::string> missing;
  for (const auto& p : spec.params) {
    if (p.required && find_member(args, p.key) == nullptr) missing.push_back(p.key);
  }
  return missing;
}

void ToolRegistry::add(RegisteredTool tool) {
  Entry entry;
  for (std::size_t i = 0; i < tool.responses.size(); ++i) {
    const auto& args = tool.responses[i].args;
    const auto missing = missing_required(tool.spec, args);
    if (!missing.empty()) {
      throw ToolArgError("canned response " + std::to_string(i) + " of '" + tool.spec.name +
                         "' misses required " + join(missing));
    }
    entry.by_key.emplace(canonical_key(Value(args)), i);
  }
  const std::string name = tool.spec.name;
  entry.tool = std::move(tool);
  tools_[name] = std::move(entry);
}

const RegisteredTool* ToolRegistry::find(const std::string& name) const {
  auto it = tools_.find(name);
  return it == tools_.end() ? nullptr : &it->second.tool;
}

std::vector<std::string> ToolRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : tools_) out.push_back(name);
  return out;
}

Value ToolRegistry::execute(const ToolCall& call) const {
  auto it = tools_.find(call.name);
  if (it == tools_.end()) throw ToolNotFound("tool '" + call.name + "' is not registered");
  const Entry& entry = it->second;

  const auto missing = missing_required(entry.tool.spec, call.args);
  if (!missing.empty()) {
    throw ToolArgError("call to '" + call.name + "' misses required " + join(missing));
  }

  auto hit = entry.by_key.find(canonical_key(Value(call.args)));
  if (hit != entry.by_key.end()) return entry.tool.responses[hit->second].response;
  // Numbers within tolerance do not share a key; fall back to a scan.
  for (const auto& r : entry.tool.responses) {
    if (values_equal(Value(r.args), Value(call.args))) return r.response;
  }
  if (entry.tool.default_response) return *entry.tool.default_response;
  throw ToolArgError("no response for " + render_call(call));
}

ToolRegistry ToolRegistry::from_json(const Json& j) {
  if (!j.is_object()) throw InputError("registry must be a JSON object keyed by tool name");
  ToolRegistry reg;
  for (const auto& [name, body] : j.items()) {
    if (!body.is_object()) throw InputError("registry entry '" + name + "' must be an object");
    RegisteredTool tool;
    if (body.contains("spec")) {
      tool.spec = tool_spec_from_json(body.at("spec"));
    } else {
      tool.spec.name = name;
    }
    if (tool.spec.name != name) {
      throw InputError("registry key '" + name + "' does not match spec name '" + tool.spec.name +
                       "'");
    }
    if (body.contains("responses")) {
      for (const auto& r : body.at("responses")) {
        if (!r.is_object() || !r.contains("args") || !r.contains("response")) {
          throw InputError("responses of '" + name + "' need 'args' and 'response'");
        }
        const Value args = value_from_json(r.at("args"));
        if (!args.is_object()) throw InputError("'args' of a '" + name + "' response must be an object");
        tool.responses.push_back({args.as_object(), value_from_json(r.at("response"))});
      }
    }
    if (body.contains("default")) tool.default_response = value_from_json(body.at("default"));
    reg.add(std::move(tool));
  }
  return reg;
}

ToolRegistry ToolRegistry::load(const std::string& path) {
  return from_json(io::read_json_file(path));
}

ToolRegistry ToolRegistry::builtin() {
  return from_json(Json::parse(builtin::registry_json()));
}

Json ToolRegistry::to_json() const {
  Json out = Json::object();
  for (const auto& [name, entry] : tools_) {
    Json body;
    body["spec"] = toolreason::to_json(entry.tool.spec);
    Json responses = Json::array();
    for (const auto& r : entry.tool.responses) {
      responses.push_back({{"args", toolreason::to_json(Value(r.args))},
                           {"response", toolreason::to_json(r.response)}});
    }
    body["responses"] = responses;
    if (entry.tool.default_response) body["default"] = toolreason::to_json(*entry.tool.default_response);
    out[name] = body;
  }
  return out;
}

}  // namespace toolreason
