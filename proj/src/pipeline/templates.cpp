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

#include "toolreason/templates.h"

#include <algorithm>
#include <cctype>
#include <filesystem>

#include "builtin_data.h"
#include "toolreason/errors.h"
#include "toolreason/io.h"

namespace toolreason {
namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

// Length of "{name}" at pos, or 0 when pos does not start a placeholder.
std::size_t placeholder_length(std::string_view tpl, std::size_t pos) {
  if (tpl[pos] != '{' || pos + 1 >= tpl.size() || !ident_start(tpl[pos + 1])) return 0;
  std::size_t e = pos + 1;
  while (e < tpl.size() && ident_char(tpl[e])) ++e;
  if (e >= tpl.size() || tpl[e] != '}') return 0;
  return e - pos + 1;
}

template <typename OnText, typename OnPlaceholder>
void scan(std::string_view tpl, OnText&& text, OnPlaceholder&& placeholder) {
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl.compare(i, 2, "{{") == 0 || tpl.compare(i, 2, "}}") == 0) {
      text(tpl.substr(i, 1));
      i += 2;
      continue;
    }
    if (const auto n = placeholder_length(tpl, i)) {
      placeholder(tpl.substr(i + 1, n - 2));
      i += n;
      continue;
    }
    text(tpl.substr(i, 1));
    ++i;
  }
}

struct FieldRef {
  const char* name;
  std::string TemplateSet::*member;
};

constexpr FieldRef kFields[] = {
    {"decompose", &TemplateSet::decompose},
    {"decompose_retry", &TemplateSet::decompose_retry},
    {"example", &TemplateSet::example},
    {"subtask", &TemplateSet::subtask},
    {"irrelevant_prompt", &TemplateSet::irrelevant_prompt},
    {"plan_item", &TemplateSet::plan_item},
    {"sequential_first", &TemplateSet::sequential_first},
    {"sequential_next", &TemplateSet::sequential_next},
    {"parallel", &TemplateSet::parallel},
    {"parallel_analysis", &TemplateSet::parallel_analysis},
    {"parallel_reflection", &TemplateSet::parallel_reflection},
    {"irrelevant", &TemplateSet::irrelevant},
    {"irrelevant_reflection", &TemplateSet::irrelevant_reflection},
};

// Template files end with a newline that is not part of the template.
std::string strip_final_newline(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace

std::string render_template(std::string_view tpl, const TemplateVars& vars) {
  std::string out;
  out.reserve(tpl.size());
  scan(
      tpl, [&](std::string_view t) { out.append(t); },
      [&](std::string_view name) {
        auto it = vars.find(std::string(name));
        if (it == vars.end()) {
          throw TemplateError("template placeholder {" + std::string(name) + "} is not bound");
        }
        out.append(it->second);
      });
  return out;
}

std::vector<std::string> template_placeholders(std::string_view tpl) {
  std::vector<std::string> names;
  scan(
      tpl, [](std::string_view) {},
      [&](std::string_view name) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
          names.emplace_back(name);
        }
      });
  return names;
}

const std::vector<std::string>& TemplateSet::field_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : kFields) v.emplace_back(f.name);
    return v;
  }();
  return names;
}

std::string& TemplateSet::field(std::string_view name) {
  for (const auto& f : kFields) {
    if (name == f.name) return this->*f.member;
  }
  throw TemplateError("unknown template '" + std::string(name) + "'");
}

const std::string& TemplateSet::field(std::string_view name) const {
  return const_cast<TemplateSet*>(this)->field(name);
}

TemplateSet TemplateSet::defaults() {
  TemplateSet set;
  for (const auto& f : kFields) {
    const auto text = builtin::template_text(f.name);
    if (!text) throw TemplateError(std::string("no built-in template '") + f.name + "'");
    set.*f.member = strip_final_newline(std::string(*text));
  }
  return set;
}

TemplateSet TemplateSet::load(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("template directory '" + dir + "' does not exist");
  TemplateSet set = defaults();
  for (const auto& f : kFields) {
    const fs::path p = fs::path(dir) / (std::string(f.name) + ".txt");
    if (fs::exists(p)) set.*f.member = strip_final_newline(io::read_text_file(p.string()));
  }
  return set;
}

bool prompt_has_reference(std::string_view prompt) {
  const auto at = prompt.find(kReferenceHeading);
  if (at == std::string_view::npos) return false;
  auto rest = prompt.substr(at + kReferenceHeading.size());
  const auto b = rest.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return false;
  rest = rest.substr(b);
  return rest.compare(0, kNoReference.size(), kNoReference) != 0;
}

bool prompt_has_examples(std::string_view prompt) {
  return prompt.find(kExampleMarker) != std::string_view::npos;
}

}  // namespace toolreason
