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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolreason/value.h"

namespace toolreason {

/// One function invocation: a tool name and its keyword arguments in the
/// order they were written.
struct ToolCall {
  std::string name;
  Object args;

  const Value* arg(std::string_view key) const { return find_member(args, key); }

  /// Empty when the call is well-formed; otherwise a reason (empty name,
  /// whitespace in name, duplicate argument key).
  std::optional<std::string> validate() const;

  /// Exact structural equality; see tool_call_equal() for the matching rule.
  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

/// Names equal and canonicalized argument maps equal, ignoring key order.
bool tool_call_equal(const ToolCall& a, const ToolCall& b);

/// "name(k=v, ...)" with Python-literal values.
std::string render_call(const ToolCall& call);
/// "[a(..), b(..)]"
std::string render_call_list(const std::vector<ToolCall>& calls);

Json to_json(const ToolCall& call);
/// Accepts {"name": ..., "arguments"|"args"|"parameters": object or
/// JSON-encoded string}. Throws InputError on anything else.
ToolCall tool_call_from_json(const Json& j);

enum class Behavior { TaskDecomposition, Reflection, Verification, Deduction };

inline constexpr Behavior kAllBehaviors[] = {
    Behavior::TaskDecomposition, Behavior::Reflection, Behavior::Verification,
    Behavior::Deduction};

std::string_view to_string(Behavior b);
std::optional<Behavior> behavior_from_string(std::string_view s);

/// A paragraph-level block of a reasoning trace. Offsets index into the
/// owning trajectory's reasoning string, half-open.
struct Thought {
  std::string text;
  Behavior category = Behavior::Deduction;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Thought&, const Thought&) = default;
};

enum class EntropySource { FullVocabulary, Surprisal };

struct TokenRecord {
  long long token_id = 0;
  double logprob_chosen = 0.0;  // natural log
  std::optional<double> entropy;  // nats, full-vocabulary
  std::optional<double> ratio_old;

  friend bool operator==(const TokenRecord&, const TokenRecord&) = default;
};

struct Trajectory {
  std::string raw;
  std::optional<std::string> reasoning;
  std::string answer;
  std::vector<Thought> thoughts;
  std::vector<ToolCall> calls;
  std::optional<std::vector<TokenRecord>> tokens;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct RolloutGroup {
  std::string prompt_id;
  std::vector<Trajectory> trajectories;
  std::vector<double> rewards;
};

struct ParamSpec {
  std::string key;
  std::string type = "string";
  bool required = false;
};

struct ToolSpec {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
};

Json to_json(const ToolSpec& spec);
/// Accepts {"name","description","params":[{key,type,required}]} as well as
/// the JSON-schema layout {"parameters":{"properties":{..},"required":[..]}}.
ToolSpec tool_spec_from_json(const Json& j);

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct Context {
  std::string policy;
  std::vector<ToolSpec> tools;
  std::vector<ChatMessage> history;
  std::string query;

  const ToolSpec* find_tool(std::string_view name) const;
};

}  // namespace toolreason
