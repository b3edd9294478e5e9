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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toolreason/subtask.h"
#include "toolreason/types.h"

namespace toolreason {

struct CannedResponse {
  Object args;
  Value response;
};

struct RegisteredTool {
  ToolSpec spec;
  std::vector<CannedResponse> responses;
  std::optional<Value> default_response;
};

/**
 * Simulated tool environment. A call is answered by the canned response
 * whose arguments equal the call's (after canonicalization), else by the
 * tool's default response.
 *
 * File layout:
 *
 *     {"compute_exchange_rate": {
 *        "spec": {"name": .., "description": .., "params": [..]},
 *        "responses": [{"args": {..}, "response": ..}],
 *        "default": ..}}
 */
class ToolRegistry {
 public:
  /// Throws ToolArgError when a canned response misses a required param.
  void add(RegisteredTool tool);

  /// Throws ToolNotFound for unknown tools and ToolArgError for a missing
  /// required argument or when no response applies.
  Value execute(const ToolCall& call) const;

  const RegisteredTool* find(const std::string& name) const;
  std::vector<std::string> names() const;

  static ToolRegistry from_json(const Json& j);
  static ToolRegistry load(const std::string& path);
  /// The exchange-rate example shipped with the library.
  static ToolRegistry builtin();
  Json to_json() const;

 private:
  struct Entry {
    RegisteredTool tool;
    std::map<std::string, std::size_t> by_key;  // canonical args -> response index
  };
  std::map<std::string, Entry> tools_;
};

/// Missing required params of `call` under `spec`, in spec order.
std::vector<std::string> missing_required(const ToolSpec& spec, const Object& args);

}  // namespace toolreason
