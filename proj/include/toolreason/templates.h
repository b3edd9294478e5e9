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
 * Prompt and composition templates.
 *
 * Placeholders are written {name}; "{{" and "}}" produce literal braces.
 * Rendering a template that names an unbound placeholder throws
 * TemplateError. Each field is stored as <field>.txt in a template
 * directory; see data/templates for the shipped set.
 */

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace toolreason {

using TemplateVars = std::map<std::string, std::string>;

std::string render_template(std::string_view tpl, const TemplateVars& vars);

/// Placeholder names used by a template, in order of first use.
std::vector<std::string> template_placeholders(std::string_view tpl);

struct TemplateSet {
  // Prompts.
  std::string decompose;          // {policy} {tools} {history} {query} {reference} {examples}
  std::string decompose_retry;    // sent after an unparseable decomposition
  std::string example;            // {index} {text}
  std::string subtask;            // {step} {description}
  std::string irrelevant_prompt;  // {query}

  // Composition bodies (inside the think block).
  std::string plan_item;          // {step} {description}
  std::string sequential_first;   // {plan} {step} {description} {reasoning}
  std::string sequential_next;    // {solved} {step} {description} {reasoning}
  std::string parallel;           // {plan} {analyses} {reflection}
  std::string parallel_analysis;  // {step} {description} {reasoning}
  std::string parallel_reflection;
  std::string irrelevant;         // {explanation} {reflection}
  std::string irrelevant_reflection;

  static TemplateSet defaults();
  /// Reads <field>.txt from `dir`; fields without a file keep the default.
  static TemplateSet load(const std::string& dir);

  static const std::vector<std::string>& field_names();
  std::string& field(std::string_view name);
  const std::string& field(std::string_view name) const;
};

/// Markers the default decomposition prompt uses to show guidance.
inline constexpr std::string_view kReferenceHeading = "5. Reference tool calls:";
inline constexpr std::string_view kNoReference = "None";
inline constexpr std::string_view kExampleMarker = "<example_";

bool prompt_has_reference(std::string_view prompt);
bool prompt_has_examples(std::string_view prompt);

}  // namespace toolreason
