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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "generators.h"
#include "toolreason/errors.h"
#include "toolreason/io.h"
#include "toolreason/types.h"
#include "toolreason/value.h"

namespace toolreason {
namespace {

using testing::Rng;

ToolCall exchange_call(double value) {
  return {"compute_exchange_rate",
          {{"base_currency", Value("RMB")}, {"target_currency", Value("USD")}, {"value", Value(value)}}};
}

TEST(Canonicalize, TrimsStrings) {
  EXPECT_EQ(canonicalize_value(Value(" RMB ")), Value("RMB"));
}

TEST(Canonicalize, IntegralAndFloatNumbersAgree) {
  EXPECT_TRUE(values_equal(Value(50000), Value(50000.0)));
  EXPECT_EQ(canonical_key(Value(50000)), canonical_key(Value(50000.0)));
}

TEST(Canonicalize, ListOrderMatters) {
  EXPECT_FALSE(values_equal(Value(List{1, 2}), Value(List{2, 1})));
}

TEST(Canonicalize, NegativeZeroFolds) {
  EXPECT_EQ(canonical_key(Value(-0.0)), canonical_key(Value(0.0)));
}

TEST(Canonicalize, IdempotentOnRandomTrees) {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const Value v = testing::random_value(rng);
    const Value once = canonicalize_value(v);
    EXPECT_EQ(canonicalize_value(once), once);
  }
}

TEST(Canonicalize, ObjectsCompareByKeySet) {
  const Value a(Object{{"x", Value(1)}, {"y", Value("a")}});
  const Value b(Object{{"y", Value("a ")}, {"x", Value(1.0)}});
  EXPECT_TRUE(values_equal(a, b));
  const Value c(Object{{"x", Value(1)}});
  EXPECT_FALSE(values_equal(a, c));
}

TEST(NumbersEqual, RelativeTolerance) {
  EXPECT_TRUE(numbers_equal(7142.86, 7142.86 * (1 + 1e-12)));
  EXPECT_FALSE(numbers_equal(7142.86, 7142.87));
}

TEST(ToolCallEqual, CaseStudyCall) {
  EXPECT_TRUE(tool_call_equal(exchange_call(50000), exchange_call(50000)));
  EXPECT_FALSE(tool_call_equal(exchange_call(50000), exchange_call(5000)));
}

TEST(ToolCallEqual, KeyOrderIgnored) {
  ToolCall reordered = exchange_call(50000);
  std::reverse(reordered.args.begin(), reordered.args.end());
  EXPECT_TRUE(tool_call_equal(exchange_call(50000), reordered));
  EXPECT_FALSE(exchange_call(50000) == reordered);
}

TEST(ToolCallEqual, IsAnEquivalenceRelation) {
  Rng rng(2);
  std::vector<ToolCall> calls;
  for (int i = 0; i < 60; ++i) {
    ToolCall c = testing::random_call(rng);
    calls.push_back(c);
    std::reverse(c.args.begin(), c.args.end());
    calls.push_back(c);
  }
  for (const auto& a : calls) {
    EXPECT_TRUE(tool_call_equal(a, a));
    for (const auto& b : calls) {
      EXPECT_EQ(tool_call_equal(a, b), tool_call_equal(b, a));
      if (!tool_call_equal(a, b)) continue;
      for (const auto& c : calls) {
        if (tool_call_equal(b, c)) EXPECT_TRUE(tool_call_equal(a, c));
      }
    }
  }
}

TEST(ToolCall, ValidateRejectsDuplicateKeys) {
  ToolCall c{"f", {{"a", Value(1)}, {"a", Value(2)}}};
  EXPECT_TRUE(c.validate().has_value());
  EXPECT_FALSE(ToolCall({"f", {{"a", Value(1)}}}).validate().has_value());
  EXPECT_TRUE(ToolCall({"", {}}).validate().has_value());
}

TEST(ToolCall, RenderUsesPythonLiterals) {
  const ToolCall c{"set_budget_limit",
                   {{"access_token", Value("abc123xyz")}, {"budget_limit", Value(7142.86)}}};
  EXPECT_EQ(render_call_list({c}), R"([set_budget_limit(access_token="abc123xyz", budget_limit=7142.86)])");
  EXPECT_EQ(to_python_literal(Value(List{Value(true), Value(nullptr), Value(3)})), "[True, None, 3]");
}

TEST(ToolCall, FromJsonAcceptsEncodedArguments) {
  const Json j = Json::parse(R"({"name":"return_delivered_order_items","arguments":"{\"order_id\": \"#W7181492\"}"})");
  const ToolCall c = tool_call_from_json(j);
  ASSERT_EQ(c.args.size(), 1u);
  EXPECT_EQ(c.args[0].key, "order_id");
  EXPECT_EQ(c.args[0].value, Value("#W7181492"));
  EXPECT_NO_THROW(tool_call_from_json(Json::parse(R"({"name":"f","args":{"a":1}})")));
  EXPECT_THROW(tool_call_from_json(Json::parse(R"({"arguments":{}})")), InputError);
  EXPECT_THROW(tool_call_from_json(Json::parse(R"({"name":"f","arguments":"not json"})")), InputError);
}

TEST(ToolCall, JsonRoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const ToolCall c = testing::random_call(rng);
    EXPECT_TRUE(tool_call_equal(tool_call_from_json(to_json(c)), c));
  }
}

TEST(ToolSpec, AcceptsJsonSchemaLayout) {
  const Json j = Json::parse(R"({"name":"get_weather","description":"d",
    "parameters":{"properties":{"city":{"type":"string"},"unit":{"type":"string"}},"required":["city"]}})");
  const ToolSpec s = tool_spec_from_json(j);
  ASSERT_EQ(s.params.size(), 2u);
  EXPECT_TRUE(s.params[0].required);
  EXPECT_FALSE(s.params[1].required);
}

TEST(ToolSpec, RejectsDuplicateParams) {
  const Json j = Json::parse(R"({"name":"f","params":[{"key":"a"},{"key":"a"}]})");
  EXPECT_THROW(tool_spec_from_json(j), InputError);
}

TEST(Io, JsonlSkipsHeaderAndBlankLines) {
  const auto rows = io::parse_jsonl("{\"type\":\"header\",\"config\":{}}\n\n{\"a\":1}\n{\"a\":2}\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1]["a"], 2);
}

TEST(Io, JsonlReportsLineNumber) {
  try {
    io::parse_jsonl("{\"a\":1}\n{oops\n", "x.jsonl");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("x.jsonl:2"), std::string::npos);
  }
}

TEST(Io, MissingFileIsIoError) {
  EXPECT_THROW(io::read_text_file("/nonexistent/file.jsonl"), IoError);
  EXPECT_THROW(io::write_text_file("/nonexistent/dir/out.jsonl", "x"), IoError);
}

TEST(Io, WriteThenRead) {
  const auto path = std::filesystem::temp_directory_path() / "toolreason_io_test.txt";
  io::write_text_file(path.string(), "hello\n");
  EXPECT_EQ(io::read_text_file(path.string()), "hello\n");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace toolreason
