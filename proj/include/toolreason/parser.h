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
 * Reasoning-trace parsing.
 *
 * A model turn looks like
 *
 *     <think>\n ...reasoning... \n</think>\n\n answer
 *
 * where the answer may carry tool calls either as a Python-style bracket list
 * `[f(a=1, b="x"), g()]` or as JSON objects `{"name": .., "arguments": ..}`.
 * Malformed calls never abort extraction: each one becomes a Diagnostic and
 * the well-formed calls around it are still returned.
 */

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "toolreason/types.h"

namespace toolreason {

enum class CallSyntax : unsigned { BracketPython = 1u << 0, JsonObject = 1u << 1 };

struct ParseConfig {
  unsigned call_syntaxes = static_cast<unsigned>(CallSyntax::BracketPython) |
                           static_cast<unsigned>(CallSyntax::JsonObject);
  std::string think_open = "<think>";
  std::string think_close = "</think>";

  bool enabled(CallSyntax s) const { return (call_syntaxes & static_cast<unsigned>(s)) != 0; }
};

enum class DiagnosticKind { UnbalancedThinkTags, MalformedCall };

struct Diagnostic {
  DiagnosticKind kind;
  std::size_t position = 0;  // byte offset into the parsed string
  std::string reason;
};

struct ParsedOutput {
  Trajectory trajectory;
  std::vector<Diagnostic> diagnostics;
};

struct ExtractedCalls {
  std::vector<ToolCall> calls;
  std::vector<Diagnostic> diagnostics;
};

/// Per-category keyword lists. Matching is case-insensitive with word
/// boundaries at either end of a pattern that begins/ends with a word
/// character.
struct BehaviorLexicon {
  std::map<Behavior, std::vector<std::string>> patterns;

  static BehaviorLexicon defaults();
  /// {"Reflection": [...], "Verification": [...], ...}; unknown categories
  /// throw InputError, missing ones are left empty.
  static BehaviorLexicon from_json(const Json& j);
  static BehaviorLexicon load(const std::string& path);
  Json to_json() const;

  const std::vector<std::string>& of(Behavior b) const;
};

/// Throws std::invalid_argument on empty input; every other problem is a
/// diagnostic.
ParsedOutput parse_output(std::string_view raw, const ParseConfig& cfg = {});

ExtractedCalls extract_tool_calls(std::string_view answer, const ParseConfig& cfg = {});

/// Splits on whitespace runs that contain at least two newlines. Thought
/// categories are left at their default; see classify_thoughts().
std::vector<Thought> segment_thoughts(std::string_view reasoning);

Behavior classify_thought(std::string_view text, const BehaviorLexicon& lexicon);

/// segment_thoughts + classify_thought over the trajectory's reasoning.
void classify_thoughts(Trajectory& t, const BehaviorLexicon& lexicon);

/// Position of every lexicon match in `text`, non-overlapping per pattern.
std::vector<std::size_t> find_keyword_matches(std::string_view text,
                                              const std::vector<std::string>& patterns);

/// Canonical rendering: open + "\n" + reasoning + "\n" + close + "\n\n" +
/// answer when reasoning is present, otherwise the answer alone.
std::string serialize_trajectory(const Trajectory& t, const ParseConfig& cfg = {});

}  // namespace toolreason
