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

#include "toolreason/value.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

namespace toolreason {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kWs = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kWs);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kWs);
  return s.substr(first, last - first + 1);
}

bool objects_equal(const Object& a, const Object& b) {
  if (a.size() != b.size()) return false;
  for (const auto& m : a) {
    const Value* other = find_member(b, m.key);
    if (other == nullptr || !values_equal(m.value, *other)) return false;
  }
  return true;
}

Json canonical_json(const Value& v) {
  // Sorted keys; std::map gives a stable order independent of insertion.
  if (v.is_object()) {
    std::map<std::string, Json> sorted;
    for (const auto& m : v.as_object()) sorted[m.key] = canonical_json(m.value);
    Json out = Json::object();
    for (auto& [k, j] : sorted) out[k] = std::move(j);
    return out;
  }
  if (v.is_list()) {
    Json out = Json::array();
    for (const auto& e : v.as_list()) out.push_back(canonical_json(e));
    return out;
  }
  return to_json(v);
}

}  // namespace

bool numbers_equal(double a, double b) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= kNumericTolerance * scale;
}

const Value* find_member(const Object& obj, std::string_view key) {
  for (const auto& m : obj) {
    if (m.key == key) return &m.value;
  }
  return nullptr;
}

Value canonicalize_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return Value(std::string(trim(x)));
        } else if constexpr (std::is_same_v<T, double>) {
          return Value(x == 0.0 ? 0.0 : x);
        } else if constexpr (std::is_same_v<T, List>) {
          List out;
          out.reserve(x.size());
          for (const auto& e : x) out.push_back(canonicalize_value(e));
          return Value(std::move(out));
        } else if constexpr (std::is_same_v<T, Object>) {
          Object out;
          out.reserve(x.size());
          for (const auto& m : x) {
            out.push_back(Member{std::string(trim(m.key)), canonicalize_value(m.value)});
          }
          return Value(std::move(out));
        } else {
          return Value(x);
        }
      },
      v.storage());
}

bool values_equal(const Value& a, const Value& b) {
  const Value ca = canonicalize_value(a);
  const Value cb = canonicalize_value(b);
  if (ca.storage().index() != cb.storage().index()) return false;
  if (ca.is_number()) return numbers_equal(ca.as_number(), cb.as_number());
  if (ca.is_list()) {
    const auto& la = ca.as_list();
    const auto& lb = cb.as_list();
    if (la.size() != lb.size()) return false;
    for (std::size_t i = 0; i < la.size(); ++i) {
      if (!values_equal(la[i], lb[i])) return false;
    }
    return true;
  }
  if (ca.is_object()) return objects_equal(ca.as_object(), cb.as_object());
  return ca == cb;
}

std::string format_number(double d) {
  if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15) {
    return std::to_string(static_cast<long long>(d));
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

std::string to_python_literal(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::nullptr_t>) {
          return "None";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "True" : "False";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return Json(x).dump();
        } else if constexpr (std::is_same_v<T, List>) {
          std::string out = "[";
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out += ", ";
            out += to_python_literal(x[i]);
          }
          return out + "]";
        } else {
          std::string out = "{";
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out += ", ";
            out += Json(x[i].key).dump() + ": " + to_python_literal(x[i].value);
          }
          return out + "}";
        }
      },
      v.storage());
}

Json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::nullptr_t>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15) {
            return static_cast<long long>(x);
          }
          return x;
        } else if constexpr (std::is_same_v<T, List>) {
          Json out = Json::array();
          for (const auto& e : x) out.push_back(to_json(e));
          return out;
        } else if constexpr (std::is_same_v<T, Object>) {
          Json out = Json::object();
          for (const auto& m : x) out[m.key] = to_json(m.value);
          return out;
        } else {
          return x;
        }
      },
      v.storage());
}

Value value_from_json(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null:
      return Value(nullptr);
    case Json::value_t::boolean:
      return Value(j.get<bool>());
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
    case Json::value_t::number_float:
      return Value(j.get<double>());
    case Json::value_t::string:
      return Value(j.get<std::string>());
    case Json::value_t::array: {
      List out;
      for (const auto& e : j) out.push_back(value_from_json(e));
      return Value(std::move(out));
    }
    case Json::value_t::object: {
      Object out;
      for (const auto& [k, e] : j.items()) out.push_back(Member{k, value_from_json(e)});
      return Value(std::move(out));
    }
    default:
      return Value(nullptr);
  }
}

std::string canonical_key(const Value& v) {
  return canonical_json(canonicalize_value(v)).dump();
}

}  // namespace toolreason
