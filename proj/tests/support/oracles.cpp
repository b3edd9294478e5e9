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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <regex>

namespace toolreason::testing {
namespace {

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const Value* member(const Object& o, const std::string& key) {
  for (const auto& m : o) {
    if (m.key == key) return &m.value;
  }
  return nullptr;
}

struct Search {
  const std::vector<ToolCall>& gt;
  const std::vector<ToolCall>& pred;
  const RewardWeights& w;
  double denom;
  std::vector<bool> used;
  double best = -1.0;
  double best_key = 0.0;
  double best_value = 0.0;

  void go(std::size_t g, double keys, double values) {
    if (g == gt.size()) {
      const double score = (w.key * keys + w.value * values) / denom;
      if (score > best) {
        best = score;
        best_key = keys / denom;
        best_value = values / denom;
      }
      return;
    }
    go(g + 1, keys, values);
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (used[p]) continue;
      double k = 0.0;
      double v = 0.0;
      for (const auto& m : gt[g].args) {
        if (const Value* got = member(pred[p].args, m.key)) {
          k += 1.0;
          v += oracle_value_score(m.value, *got);
        }
      }
      used[p] = true;
      go(g + 1, keys + k, values + v);
      used[p] = false;
    }
  }
};

}  // namespace

bool oracle_values_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    const double x = a.as_number();
    const double y = b.as_number();
    return std::abs(x - y) <= 1e-9 * std::max({std::abs(x), std::abs(y), 1e-300}) || x == y;
  }
  if (a.is_string() && b.is_string()) return trimmed(a.as_string()) == trimmed(b.as_string());
  if (a.is_bool() && b.is_bool()) return a.as_bool() == b.as_bool();
  if (a.is_null() && b.is_null()) return true;
  if (a.is_list() && b.is_list()) {
    const auto& x = a.as_list();
    const auto& y = b.as_list();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!oracle_values_equal(x[i], y[i])) return false;
    }
    return true;
  }
  if (a.is_object() && b.is_object()) {
    const auto& x = a.as_object();
    const auto& y = b.as_object();
    if (x.size() != y.size()) return false;
    for (const auto& m : x) {
      const Value* other = member(y, m.key);
      if (other == nullptr || !oracle_values_equal(m.value, *other)) return false;
    }
    return true;
  }
  return false;
}

double oracle_value_score(const Value& gt, const Value& pred) {
  if (!gt.is_list()) return oracle_values_equal(gt, pred) ? 1.0 : 0.0;
  const auto& want = gt.as_list();
  if (want.empty()) return (pred.is_list() && pred.as_list().empty()) ? 1.0 : 0.0;
  List got = pred.is_list() ? pred.as_list() : List{pred};
  double hits = 0.0;
  for (std::size_t i = 0; i < want.size() && i < got.size(); ++i) {
    if (oracle_values_equal(want[i], got[i])) hits += 1.0;
  }
  return hits / static_cast<double>(want.size());
}

double oracle_format(const std::string& raw) {
  static const std::regex re(R"(^<think>\n[\s\S]*?\n</think>\n\n[\s\S]*\S[\s\S]*$)");
  return std::regex_match(raw, re) ? 1.0 : 0.0;
}

double oracle_struct(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred) {
  std::vector<std::string> a;
  std::vector<std::string> b;
  for (const auto& c : gt) a.push_back(c.name);
  for (const auto& c : pred) b.push_back(c.name);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b ? 1.0 : 0.0;
}

RewardBreakdown exhaustive_reward(const std::string& raw, const std::vector<ToolCall>& gt,
                                  const std::vector<ToolCall>& pred, const RewardWeights& w) {
  RewardBreakdown r;
  r.format = oracle_format(raw);
  r.structure = oracle_struct(gt, pred);
  std::size_t keys = 0;
  for (const auto& c : gt) keys += c.args.size();
  if (keys == 0) {
    r.key = r.value = gt.size() == pred.size() ? 1.0 : 0.0;
  } else {
    Search s{gt, pred, w, static_cast<double>(keys), std::vector<bool>(pred.size(), false)};
    s.go(0, 0.0, 0.0);
    r.key = s.best_key;
    r.value = s.best_value;
  }
  r.total = w.format * r.format + w.structure * r.structure + w.key * r.key + w.value * r.value;
  return r;
}

Eigen::MatrixXd fd_gradient(const std::function<double(const Eigen::MatrixXd&)>& f,
                            const Eigen::MatrixXd& x, double h) {
  Eigen::MatrixXd g(x.rows(), x.cols());
  Eigen::MatrixXd probe = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      probe(i, j) = x(i, j) + h;
      const double up = f(probe);
      probe(i, j) = x(i, j) - h;
      const double down = f(probe);
      probe(i, j) = x(i, j);
      g(i, j) = (up - down) / (2.0 * h);
    }
  }
  return g;
}

double rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-8});
  return (a - b).norm() / scale;
}

double oracle_mean(const std::vector<double>& xs) {
  long double s = 0;
  for (double x : xs) s += x;
  return static_cast<double>(s / xs.size());
}

double oracle_population_std(const std::vector<double>& xs) {
  const long double m = oracle_mean(xs);
  long double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return static_cast<double>(std::sqrt(s / xs.size()));
}

}  // namespace toolreason::testing
