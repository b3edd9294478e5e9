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

#include "generators.h"

#include <algorithm>

#include "toolreason/value.h"

namespace toolreason::testing {
namespace {

const std::vector<std::string> kNames = {"get_weather", "search_flights", "set_budget_limit",
                                         "lookup_order"};
const std::vector<std::string> kKeys = {"city", "date", "item_ids", "limit", "query", "flag"};
const std::vector<std::string> kWords = {"the",   "order", "user",  "needs", "a",     "refund",
                                         "check", "city",  "first", "then",  "amount", "call",
                                         "tool",  "so",    "next",  "value", "date",  "budget"};

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(xs.size()) - 1))];
}

Value mutate_value(Rng& rng, const Value& v) {
  if (v.is_list() && !v.as_list().empty() && coin(rng)) {
    if (coin(rng)) return v.as_list().front();
    List l = v.as_list();
    l.pop_back();
    return l;
  }
  return random_value(rng);
}

ToolCall mutate_call(Rng& rng, ToolCall c) {
  switch (uniform_int(rng, 0, 4)) {
    case 0:
      if (!c.args.empty()) {
        auto& m = c.args[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(c.args.size()) - 1))];
        m.value = mutate_value(rng, m.value);
      }
      break;
    case 1:
      if (!c.args.empty()) c.args.erase(c.args.begin() + uniform_int(rng, 0, static_cast<int>(c.args.size()) - 1));
      break;
    case 2:
      c.name = pick(rng, kNames);
      break;
    case 3: {
      const std::string& k = pick(rng, kKeys);
      if (find_member(c.args, k) == nullptr) c.args.push_back({k, random_value(rng)});
      break;
    }
    default:
      break;
  }
  return c;
}

}  // namespace

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Value random_scalar(Rng& rng) {
  switch (uniform_int(rng, 0, 5)) {
    case 0:
      return Value(uniform_int(rng, -50, 50));
    case 1:
      return Value(uniform_int(rng, -400, 400) / 8.0);
    case 2:
      return Value(coin(rng));
    case 3:
      return Value(nullptr);
    default: {
      static const std::string kChars = "abcdefgxyz0123456789 ,[]()=:'\"#-_";
      std::string s;
      const int n = uniform_int(rng, 1, 8);
      for (int i = 0; i < n; ++i) s += kChars[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(kChars.size()) - 1))];
      // Leading/trailing blanks are folded by canonicalization; keep the
      // generated form canonical so equality is exact.
      const auto b = s.find_first_not_of(' ');
      const auto e = s.find_last_not_of(' ');
      return Value(b == std::string::npos ? std::string("x") : s.substr(b, e - b + 1));
    }
  }
}

Value random_value(Rng& rng) {
  const int kind = uniform_int(rng, 0, 9);
  if (kind < 6) return random_scalar(rng);
  if (kind < 9) {
    List l;
    const int n = uniform_int(rng, 0, 3);
    for (int i = 0; i < n; ++i) l.push_back(random_scalar(rng));
    return l;
  }
  Object o;
  const int n = uniform_int(rng, 1, 2);
  for (int i = 0; i < n; ++i) {
    const std::string k = "k" + std::to_string(i);
    o.push_back({k, random_scalar(rng)});
  }
  return o;
}

ToolCall random_call(Rng& rng) {
  ToolCall c;
  c.name = pick(rng, kNames);
  std::vector<std::string> keys = kKeys;
  std::shuffle(keys.begin(), keys.end(), rng);
  const int n = uniform_int(rng, 0, 3);
  for (int i = 0; i < n; ++i) c.args.push_back({keys[static_cast<std::size_t>(i)], random_value(rng)});
  return c;
}

std::vector<ToolCall> random_calls(Rng& rng, int max_calls) {
  std::vector<ToolCall> calls;
  const int n = uniform_int(rng, 0, max_calls);
  for (int i = 0; i < n; ++i) calls.push_back(random_call(rng));
  return calls;
}

std::string random_reasoning(Rng& rng, int min_paragraphs, int max_paragraphs) {
  std::string out;
  const int paragraphs = uniform_int(rng, min_paragraphs, max_paragraphs);
  for (int p = 0; p < paragraphs; ++p) {
    if (p > 0) out += "\n\n";
    const int words = uniform_int(rng, 1, 20);
    for (int w = 0; w < words; ++w) {
      if (w > 0) out += coin(rng, 0.1) ? "\n" : " ";
      out += pick(rng, kWords);
    }
  }
  return out;
}

std::string render_output(const std::optional<std::string>& reasoning,
                          const std::vector<ToolCall>& calls, Syntax syntax) {
  std::string answer;
  if (calls.empty()) {
    answer = "No tool call is needed here.";
  } else if (syntax == Syntax::Bracket) {
    answer = render_call_list(calls);
  } else {
    Json arr = Json::array();
    for (const auto& c : calls) arr.push_back({{"name", c.name}, {"arguments", to_json(Value(c.args))}});
    answer = arr.dump();
  }
  if (!reasoning) return answer;
  return "<think>\n" + *reasoning + "\n</think>\n\n" + answer;
}

RewardCase random_reward_case(Rng& rng, int max_calls) {
  RewardCase rc;
  rc.gt = random_calls(rng, max_calls);
  rc.pred = rc.gt;
  const int edits = uniform_int(rng, 0, 3);
  for (int e = 0; e < edits; ++e) {
    const int op = uniform_int(rng, 0, 4);
    if (op == 0 && !rc.pred.empty()) {
      rc.pred.erase(rc.pred.begin() + uniform_int(rng, 0, static_cast<int>(rc.pred.size()) - 1));
    } else if (op == 1 && static_cast<int>(rc.pred.size()) < max_calls) {
      rc.pred.push_back(rc.pred.empty() || coin(rng) ? random_call(rng)
                                                     : mutate_call(rng, rc.pred.front()));
    } else if (op == 2) {
      std::shuffle(rc.pred.begin(), rc.pred.end(), rng);
    } else if (!rc.pred.empty()) {
      auto& c = rc.pred[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(rc.pred.size()) - 1))];
      c = mutate_call(rng, c);
    }
  }
  const std::optional<std::string> reasoning =
      coin(rng, 0.85) ? std::optional<std::string>(random_reasoning(rng)) : std::nullopt;
  rc.raw = render_output(reasoning, rc.pred, coin(rng) ? Syntax::Bracket : Syntax::Json);
  return rc;
}

std::vector<double> random_rewards(Rng& rng, int min_g, int max_g) {
  std::vector<double> r(static_cast<std::size_t>(uniform_int(rng, min_g, max_g)));
  for (auto& x : r) x = uniform_real(rng, -5.0, 5.0);
  return r;
}

}  // namespace toolreason::testing
