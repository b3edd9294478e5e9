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

#include "toolreason/parser.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "call_grammar.h"

namespace toolreason {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::size_t leading_space(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && is_space(s[b])) ++b;
  return b;
}

std::string_view trim(std::string_view s) {
  std::size_t b = leading_space(s);
  std::size_t e = s.size();
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

}  // namespace

ParsedOutput parse_output(std::string_view raw, const ParseConfig& cfg) {
  if (raw.empty()) throw std::invalid_argument("parse_output: empty model output");

  ParsedOutput out;
  Trajectory& t = out.trajectory;
  t.raw = std::string(raw);

  std::size_t answer_offset = 0;
  const auto open = raw.find(cfg.think_open);
  if (open == std::string_view::npos) {
    t.answer = std::string(trim(raw));
    answer_offset = leading_space(raw);
  } else {
    const auto body = open + cfg.think_open.size();
    const auto close = raw.find(cfg.think_close, body);
    if (close == std::string_view::npos) {
      out.diagnostics.push_back(
          {DiagnosticKind::UnbalancedThinkTags, open,
           "'" + cfg.think_open + "' has no matching '" + cfg.think_close + "'"});
      std::string without_tag = std::string(raw.substr(0, open)) + std::string(raw.substr(body));
      t.reasoning = std::string(trim(without_tag));
    } else {
      t.reasoning = std::string(trim(raw.substr(body, close - body)));
      const auto tail = raw.substr(close + cfg.think_close.size());
      t.answer = std::string(trim(tail));
      answer_offset = close + cfg.think_close.size() + leading_space(tail);
    }
  }

  if (!t.answer.empty()) {
    auto extracted = extract_tool_calls(t.answer, cfg);
    t.calls = std::move(extracted.calls);
    // Diagnostic offsets are reported relative to the raw string.
    for (auto& d : extracted.diagnostics) {
      d.position += answer_offset;
      out.diagnostics.push_back(std::move(d));
    }
  }
  if (t.reasoning) {
    static const BehaviorLexicon kDefaultLexicon = BehaviorLexicon::defaults();
    classify_thoughts(t, kDefaultLexicon);
  }
  return out;
}

ExtractedCalls extract_tool_calls(std::string_view answer, const ParseConfig& cfg) {
  ExtractedCalls out;
  const bool bracket = cfg.enabled(CallSyntax::BracketPython);
  const bool json = cfg.enabled(CallSyntax::JsonObject);

  std::size_t pos = 0;
  while (pos < answer.size()) {
    const char c = answer[pos];
    if (bracket && c == '[' && grammar::looks_like_call_list(answer, pos)) {
      pos = grammar::parse_call_list(answer, pos, out.calls, out.diagnostics);
      continue;
    }
    if (json && (c == '{' || c == '[')) {
      const auto next = grammar::parse_json_calls(answer, pos, out.calls, out.diagnostics);
      if (next > pos) {
        pos = next;
        continue;
      }
    }
    ++pos;
  }
  return out;
}

std::vector<Thought> segment_thoughts(std::string_view reasoning) {
  std::vector<Thought> thoughts;
  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && is_space(reasoning[b])) ++b;
    while (e > b && is_space(reasoning[e - 1])) --e;
    if (b < e) {
      thoughts.push_back(Thought{std::string(reasoning.substr(b, e - b)), Behavior::Deduction, b, e});
    }
  };

  std::size_t segment_start = 0;
  std::size_t i = 0;
  while (i < reasoning.size()) {
    if (!is_space(reasoning[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    int newlines = 0;
    while (j < reasoning.size() && is_space(reasoning[j])) {
      if (reasoning[j] == '\n') ++newlines;
      ++j;
    }
    if (newlines >= 2) {
      emit(segment_start, i);
      segment_start = j;
    }
    i = j;
  }
  emit(segment_start, reasoning.size());
  return thoughts;
}

std::vector<std::size_t> find_keyword_matches(std::string_view text,
                                              const std::vector<std::string>& patterns) {
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
  };
  auto lower = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
  };

  const std::string haystack = lower(text);
  std::vector<std::size_t> hits;
  for (const auto& raw_pattern : patterns) {
    const std::string pattern = lower(raw_pattern);
    if (pattern.empty()) continue;
    const bool check_front = is_word(pattern.front());
    const bool check_back = is_word(pattern.back());
    std::size_t from = 0;
    while (true) {
      const auto at = haystack.find(pattern, from);
      if (at == std::string::npos) break;
      const auto end = at + pattern.size();
      const bool front_ok = !check_front || at == 0 || !is_word(haystack[at - 1]);
      const bool back_ok = !check_back || end == haystack.size() || !is_word(haystack[end]);
      if (front_ok && back_ok) {
        hits.push_back(at);
        from = end;
      } else {
        from = at + 1;
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

Behavior classify_thought(std::string_view text, const BehaviorLexicon& lexicon) {
  // Tie-break order when two categories match at the same offset.
  constexpr std::array<Behavior, 4> kPriority = {Behavior::Reflection, Behavior::Verification,
                                                 Behavior::TaskDecomposition,
                                                 Behavior::Deduction};
  Behavior best = Behavior::Deduction;
  std::size_t best_pos = std::string_view::npos;
  for (Behavior b : kPriority) {
    const auto hits = find_keyword_matches(text, lexicon.of(b));
    if (!hits.empty() && hits.front() < best_pos) {
      best_pos = hits.front();
      best = b;
    }
  }
  return best;
}

void classify_thoughts(Trajectory& t, const BehaviorLexicon& lexicon) {
  t.thoughts.clear();
  if (!t.reasoning) return;
  t.thoughts = segment_thoughts(*t.reasoning);
  for (auto& th : t.thoughts) th.category = classify_thought(th.text, lexicon);
}

std::string serialize_trajectory(const Trajectory& t, const ParseConfig& cfg) {
  if (!t.reasoning) return t.answer;
  return cfg.think_open + "\n" + *t.reasoning + "\n" + cfg.think_close + "\n\n" + t.answer;
}

}  // namespace toolreason
