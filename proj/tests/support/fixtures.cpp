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

#include "fixtures.h"

#include <cstdio>

namespace toolreason::testing {
namespace {

std::string request_tag(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "[req-%05d]", i);
  return buf;
}

}  // namespace

std::string LookupOracle::generate(const std::vector<ChatMessage>& messages,
                                   const GenerationParams&) const {
  const std::string text = conversation_text(messages);
  const SeedSample* sample = nullptr;
  for (const auto& s : samples_) {
    if (text.find(s.context.query) != std::string::npos) {
      sample = &s;
      break;
    }
  }
  if (sample == nullptr) throw OracleUnavailable("lookup oracle: unknown sample");

  if (messages.size() == 1) {
    Json subtasks = Json::array();
    for (std::size_t k = 0; k < sample->reference.size(); ++k) {
      subtasks.push_back({{"step", k + 1}, {"description", "Look up order " + std::to_string(k + 1) + "."}});
    }
    return Json{{"scenario", "sequential"}, {"subtasks", subtasks}}.dump();
  }
  std::size_t done = 0;
  for (const auto& m : messages) done += m.role == "tool" ? 1 : 0;
  if (done >= sample->reference.size()) throw OracleUnavailable("lookup oracle: no step left");
  return "<think>\nThe next order to look up is number " + std::to_string(done + 1) +
         ".\n</think>\n\n" + render_call_list({sample->reference[done]});
}

std::vector<SeedSample> lookup_samples(int n) {
  std::vector<SeedSample> out;
  for (int i = 0; i < n; ++i) {
    SeedSample s;
    s.id = "lookup-" + std::to_string(i);
    s.context.policy = "You are an order assistant.";
    s.context.tools = {lookup_registry().find("lookup_order")->spec};
    const int calls = 1 + i % 3;
    std::string ids;
    for (int k = 0; k < calls; ++k) {
      const std::string id = "o" + std::to_string(i) + "_" + std::to_string(k);
      s.reference.push_back({"lookup_order", {{"order_id", Value(id)}}});
      ids += (k > 0 ? ", " : "") + id;
    }
    s.context.query = request_tag(i) + " Please look up orders " + ids + ".";
    out.push_back(std::move(s));
  }
  return out;
}

ToolRegistry lookup_registry() {
  ToolRegistry r;
  RegisteredTool t;
  t.spec.name = "lookup_order";
  t.spec.description = "Fetch an order by id.";
  t.spec.params = {{"order_id", "string", true}};
  t.default_response = Value(Object{{"status", Value("delivered")}});
  r.add(std::move(t));
  return r;
}

SeedSample builtin_seed(const std::string& id) {
  for (auto& s : builtin_seeds()) {
    if (s.id == id) return s;
  }
  throw InputError("no built-in seed '" + id + "'");
}

std::vector<SeedSample> exchange_batch(int copies) {
  std::vector<SeedSample> out;
  const SeedSample base = builtin_seed("exchange-budget");
  for (int i = 0; i < copies; ++i) {
    SeedSample s = base;
    s.id = base.id + "-" + std::to_string(i);
    out.push_back(std::move(s));
  }
  out.push_back(builtin_seed("trip-over-decomposed"));
  return out;
}

}  // namespace toolreason::testing
