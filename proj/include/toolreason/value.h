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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace toolreason {

using Json = nlohmann::ordered_json;

struct Member;
class Value;

using List = std::vector<Value>;
// Insertion-ordered; key uniqueness is the producer's responsibility.
using Object = std::vector<Member>;

/**
 * A JSON-like tool argument value.
 *
 * Numbers are stored as double. Equality between values goes through
 * values_equal(), which canonicalizes and applies a relative tolerance to
 * numbers; operator== is structural and exact.
 */
class Value {
 public:
  using Storage =
      std::variant<std::nullptr_t, bool, double, std::string, List, Object>;

  Value() : storage_(nullptr) {}
  Value(std::nullptr_t) : storage_(nullptr) {}
  Value(bool b) : storage_(b) {}
  Value(int n) : storage_(static_cast<double>(n)) {}
  Value(long n) : storage_(static_cast<double>(n)) {}
  Value(long long n) : storage_(static_cast<double>(n)) {}
  Value(double d) : storage_(d) {}
  Value(const char* s) : storage_(std::string(s)) {}
  Value(std::string s) : storage_(std::move(s)) {}
  Value(List l) : storage_(std::move(l)) {}
  Value(Object o) : storage_(std::move(o)) {}

  bool is_null() const { return std::holds_alternative<std::nullptr_t>(storage_); }
  bool is_bool() const { return std::holds_alternative<bool>(storage_); }
  bool is_number() const { return std::holds_alternative<double>(storage_); }
  bool is_string() const { return std::holds_alternative<std::string>(storage_); }
  bool is_list() const { return std::holds_alternative<List>(storage_); }
  bool is_object() const { return std::holds_alternative<Object>(storage_); }

  bool as_bool() const { return std::get<bool>(storage_); }
  double as_number() const { return std::get<double>(storage_); }
  const std::string& as_string() const { return std::get<std::string>(storage_); }
  const List& as_list() const { return std::get<List>(storage_); }
  const Object& as_object() const { return std::get<Object>(storage_); }

  const Storage& storage() const { return storage_; }

  /// Exact structural equality (no canonicalization, no tolerance).
  friend bool operator==(const Value& a, const Value& b);

 private:
  Storage storage_;
};

struct Member {
  std::string key;
  Value value;

  friend bool operator==(const Member& a, const Member& b) {
    return a.key == b.key && a.value == b.value;
  }
};

inline bool operator==(const Value& a, const Value& b) {
  return a.storage_ == b.storage_;
}

/// Relative tolerance used by numbers_equal().
inline constexpr double kNumericTolerance = 1e-9;

bool numbers_equal(double a, double b);

/// Normal form: trimmed strings, -0 folded to 0, containers recursively
/// canonicalized. Idempotent.
Value canonicalize_value(const Value& v);

/// Equality after canonicalization. Lists compare in order, objects compare
/// by key set and then per key, numbers within kNumericTolerance (relative).
bool values_equal(const Value& a, const Value& b);

/// Looks up a key in an object; nullptr when absent.
const Value* find_member(const Object& obj, std::string_view key);

/// Shortest round-trippable decimal rendering; integral values print with no
/// fractional part.
std::string format_number(double d);

/// Python-literal rendering used inside bracket call syntax:
/// "str", 12, 7142.86, True/False/None, [..], {"k": v}.
std::string to_python_literal(const Value& v);

Json to_json(const Value& v);
Value value_from_json(const Json& j);

/// Canonical JSON dump of a canonicalized value with object keys sorted;
/// equal values under values_equal() with integral numbers produce the same
/// string. Used as a hash key by the tool registry.
std::string canonical_key(const Value& v);

}  // namespace toolreason
