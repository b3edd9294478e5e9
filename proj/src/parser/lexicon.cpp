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

#include "toolreason/errors.h"
#include "toolreason/io.h"
#include "toolreason/parser.h"

namespace toolreason {

BehaviorLexicon BehaviorLexicon::defaults() {
  BehaviorLexicon lex;
  lex.patterns[Behavior::Reflection] = {"wait",     "but ",  "however", "alternatively",
                                        "actually", "hmm",   "maybe",   "perhaps"};
  lex.patterns[Behavior::Verification] = {"make sure", "check", "verify", "confirm",
                                          "double-check"};
  lex.patterns[Behavior::TaskDecomposition] = {"break it down", "subtask", "step 1", "first,",
                                               "the steps are"};
  // Deduction is the residual category.
  lex.patterns[Behavior::Deduction] = {};
  return lex;
}

BehaviorLexicon BehaviorLexicon::from_json(const Json& j) {
  if (!j.is_object()) throw InputError("behavior lexicon must be a JSON object");
  BehaviorLexicon lex;
  for (Behavior b : kAllBehaviors) lex.patterns[b] = {};
  for (const auto& [name, list] : j.items()) {
    const auto b = behavior_from_string(name);
    if (!b) throw InputError("unknown behavior category '" + name + "'");
    if (!list.is_array()) throw InputError("lexicon entry '" + name + "' must be an array");
    for (const auto& p : list) lex.patterns[*b].push_back(p.get<std::string>());
  }
  return lex;
}

BehaviorLexicon BehaviorLexicon::load(const std::string& path) {
  return from_json(io::read_json_file(path));
}

Json BehaviorLexicon::to_json() const {
  Json out = Json::object();
  for (Behavior b : kAllBehaviors) out[std::string(to_string(b))] = of(b);
  return out;
}

const std::vector<std::string>& BehaviorLexicon::of(Behavior b) const {
  static const std::vector<std::string> kEmpty;
  const auto it = patterns.find(b);
  return it == patterns.end() ? kEmpty : it->second;
}

}  // namespace toolreason
