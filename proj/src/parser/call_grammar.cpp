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

#include "call_grammar.h"

#include <cctype>
#include <charconv>
#include <set>
#include <string>

#include "toolreason/errors.h"

namespace toolreason::grammar {
namespace {

constexpr int kMaxDepth = 64;

struct ParseFailure {
  std::size_t pos;
  std::string reason;
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::size_t skip_ws(std::string_view s, std::size_t p) {
  while (p < s.size() && is_space(s[p])) ++p;
  return p;
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Index one past the closing quote of the literal opening at `p`, or npos.
std::size_t skip_string(std::string_view s, std::size_t p) {
  const char q = s[p];
  for (std::size_t i = p + 1; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
    } else if (s[i] == q) {
      return i + 1;
    }
  }
  return std::string_view::npos;
}

// Next ',' or ']' at nesting depth zero relative to `p`.
std::size_t skip_to_boundary(std::string_view s, std::size_t p) {
  int depth = 0;
  while (p < s.size()) {
    const char c = s[p];
    if (c == '"' || c == '\'') {
      const auto next = skip_string(s, p);
      if (next == std::string_view::npos) return s.size();
      p = next;
      continue;
    }
    if (c == '(' || c == '[' || c == '{') {
      ++depth;
    } else if (c == ')' || c == ']' || c == '}') {
      if (depth == 0) {
        if (c == ']') return p;
      } else {
        --depth;
      }
    } else if (c == ',' && depth == 0) {
      return p;
    }
    ++p;
  }
  return s.size();
}

class CallReader {
 public:
  CallReader(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  ToolCall call() {
    ToolCall out;
    out.name = identifier(/*allow_dots=*/true);
    ws();
    expect('(');
    ws();
    if (consume(')')) return out;
    std::set<std::string> keys;
    while (true) {
      const auto key_pos = pos_;
      std::string key = identifier(/*allow_dots=*/false);
      if (!keys.insert(key).second) fail_at(key_pos, "duplicate argument key '" + key + "'");
      ws();
      if (peek() != '=') fail("positional argument or missing '=' after '" + key + "'");
      ++pos_;
      ws();
      Value v = value(0);
      out.args.push_back(Member{std::move(key), std::move(v)});
      ws();
      if (consume(',')) {
        ws();
        if (consume(')')) return out;
        continue;
      }
      if (consume(')')) return out;
      fail("expected ',' or ')' in argument list");
    }
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void ws() { pos_ = skip_ws(text_, pos_); }
  bool consume(char c) {
    if (peek() == c && pos_ < text_.size()) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(std::string reason) const { throw ParseFailure{pos_, std::move(reason)}; }
  [[noreturn]] void fail_at(std::size_t p, std::string reason) const {
    throw ParseFailure{p, std::move(reason)};
  }

  std::string identifier(bool allow_dots) {
    if (!is_ident_start(peek())) fail("expected identifier");
    const auto start = pos_;
    while (pos_ < text_.size() &&
           (is_ident_char(text_[pos_]) || (allow_dots && text_[pos_] == '.'))) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Value value(int depth) {
    if (depth > kMaxDepth) fail("value nesting too deep");
    const char c = peek();
    if (c == '"' || c == '\'') return Value(string_literal());
    if (c == '[') return Value(sequence('[', ']', depth));
    if (c == '(') return Value(sequence('(', ')', depth));
    if (c == '{') return Value(mapping(depth));
    if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
      return Value(number());
    }
    if (is_ident_start(c)) {
      const auto start = pos_;
      const std::string word = identifier(/*allow_dots=*/true);
      if (word == "True" || word == "true") return Value(true);
      if (word == "False" || word == "false") return Value(false);
      if (word == "None" || word == "null") return Value(nullptr);
      fail_at(start, "unquoted identifier '" + word + "' used as a value");
    }
    if (pos_ >= text_.size()) fail("unexpected end of input in value");
    fail(std::string("unexpected character '") + c + "' in value");
  }

  std::string string_literal() {
    const char q = text_[pos_];
    const auto start = pos_;
    ++pos_;
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == q) return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= text_.size()) break;
      const char e = text_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case '\\': out += '\\'; break;
        case '\'': out += '\''; break;
        case '"': out += '"'; break;
        case '/': out += '/'; break;
        case 'u': {
          if (pos_ + 4 > text_.size()) fail("truncated \\u escape");
          unsigned cp = 0;
          auto res = std::from_chars(text_.data() + pos_, text_.data() + pos_ + 4, cp, 16);
          if (res.ptr != text_.data() + pos_ + 4) fail("bad \\u escape");
          pos_ += 4;
          if (cp >= 0xD800 && cp < 0xDC00 && pos_ + 6 <= text_.size() && text_[pos_] == '\\' &&
              text_[pos_ + 1] == 'u') {
            unsigned lo = 0;
            auto r2 = std::from_chars(text_.data() + pos_ + 2, text_.data() + pos_ + 6, lo, 16);
            if (r2.ptr == text_.data() + pos_ + 6 && lo >= 0xDC00 && lo < 0xE000) {
              cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
              pos_ += 6;
            }
          }
          append_utf8(out, cp);
          break;
        }
        default:
          out += '\\';
          out += e;
      }
    }
    fail_at(start, "unterminated string literal");
  }

  double number() {
    const auto start = pos_;
    if (peek() == '+') ++pos_;
    const auto digits = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const bool sign_after_exp =
          (c == '-' || c == '+') && pos_ > digits && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E');
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
          sign_after_exp || (c == '-' && pos_ == digits)) {
        ++pos_;
      } else {
        break;
      }
    }
    double d = 0.0;
    const char* first = text_.data() + digits;
    const char* last = text_.data() + pos_;
    auto res = std::from_chars(first, last, d);
    if (res.ec != std::errc() || res.ptr != last || first == last) {
      fail_at(start, "malformed number '" + std::string(text_.substr(start, pos_ - start)) + "'");
    }
    return d;
  }

  List sequence(char open, char close, int depth) {
    expect(open);
    List out;
    ws();
    if (consume(close)) return out;
    while (true) {
      out.push_back(value(depth + 1));
      ws();
      if (consume(',')) {
        ws();
        if (consume(close)) return out;
        continue;
      }
      if (consume(close)) return out;
      fail(std::string("expected ',' or '") + close + "' in list");
    }
  }

  Object mapping(int depth) {
    expect('{');
    Object out;
    ws();
    if (consume('}')) return out;
    while (true) {
      std::string key;
      if (peek() == '"' || peek() == '\'') {
        key = string_literal();
      } else {
        fail("dictionary keys must be string literals");
      }
      ws();
      expect(':');
      ws();
      out.push_back(Member{std::move(key), value(depth + 1)});
      ws();
      if (consume(',')) {
        ws();
        if (consume('}')) return out;
        continue;
      }
      if (consume('}')) return out;
      fail("expected ',' or '}' in dictionary");
    }
  }

  std::string_view text_;
  std::size_t pos_;
};

// Balanced JSON span (objects/arrays, double-quoted strings) starting at p.
std::size_t json_span_end(std::string_view s, std::size_t p) {
  int depth = 0;
  for (std::size_t i = p; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') {
      const auto next = skip_string(s, i);
      if (next == std::string_view::npos) return std::string_view::npos;
      i = next - 1;
    } else if (c == '{' || c == '[') {
      ++depth;
    } else if (c == '}' || c == ']') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

bool is_call_object(const Json& j) {
  const bool has_args = j.contains("arguments") || j.contains("args") || j.contains("parameters");
  return j.contains("name") && j["name"].is_string() && has_args;
}

void harvest(const Json& j, std::size_t pos, std::vector<ToolCall>& calls,
             std::vector<Diagnostic>& diagnostics, int& found) {
  if (j.is_array()) {
    const int before = found;
    for (const auto& e : j) harvest(e, pos, calls, diagnostics, found);
    // Inside a list of calls, a named entry that is not a call is a broken call.
    if (found > before) {
      for (const auto& e : j) {
        if (e.is_object() && e.contains("name") && !is_call_object(e)) {
          diagnostics.push_back({DiagnosticKind::MalformedCall, pos,
                                 "entry '" + e.dump() + "' is not a valid tool call"});
        }
      }
    }
    return;
  }
  if (!j.is_object()) return;
  if (is_call_object(j)) {
    ++found;
    try {
      ToolCall call = tool_call_from_json(j);
      if (auto err = call.validate()) {
        diagnostics.push_back({DiagnosticKind::MalformedCall, pos, *err});
      } else {
        calls.push_back(std::move(call));
      }
    } catch (const InputError& e) {
      diagnostics.push_back({DiagnosticKind::MalformedCall, pos, e.what()});
    }
    return;
  }
  if (j.contains("function")) harvest(j["function"], pos, calls, diagnostics, found);
  if (j.contains("tool_calls")) harvest(j["tool_calls"], pos, calls, diagnostics, found);
}

}  // namespace

bool looks_like_call_list(std::string_view text, std::size_t pos) {
  std::size_t p = skip_ws(text, pos + 1);
  if (p >= text.size() || !is_ident_start(text[p])) return false;
  while (p < text.size() && (is_ident_char(text[p]) || text[p] == '.')) ++p;
  p = skip_ws(text, p);
  return p < text.size() && text[p] == '(';
}

std::size_t parse_call_list(std::string_view text, std::size_t pos, std::vector<ToolCall>& calls,
                            std::vector<Diagnostic>& diagnostics) {
  std::size_t p = pos + 1;
  while (true) {
    p = skip_ws(text, p);
    if (p >= text.size()) break;
    if (text[p] == ']') return p + 1;

    const auto call_start = p;
    try {
      CallReader reader(text, p);
      ToolCall call = reader.call();
      p = reader.pos();
      if (auto err = call.validate()) {
        diagnostics.push_back({DiagnosticKind::MalformedCall, call_start, *err});
      } else {
        calls.push_back(std::move(call));
      }
    } catch (const ParseFailure& f) {
      diagnostics.push_back({DiagnosticKind::MalformedCall, f.pos, f.reason});
      p = skip_to_boundary(text, call_start);
    }

    p = skip_ws(text, p);
    if (p < text.size() && text[p] != ',' && text[p] != ']') {
      diagnostics.push_back({DiagnosticKind::MalformedCall, p, "expected ',' or ']' after call"});
      p = skip_to_boundary(text, p);
    }
    if (p >= text.size()) break;
    if (text[p] == ']') return p + 1;
    ++p;
  }
  diagnostics.push_back({DiagnosticKind::MalformedCall, pos, "unterminated call list"});
  return text.size();
}

std::size_t parse_json_calls(std::string_view text, std::size_t pos, std::vector<ToolCall>& calls,
                             std::vector<Diagnostic>& diagnostics) {
  const auto end = json_span_end(text, pos);
  if (end == std::string_view::npos) return pos;
  const auto span = text.substr(pos, end - pos);
  const Json j = Json::parse(span.begin(), span.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    if (span.find("\"name\"") != std::string_view::npos &&
        (span.find("\"arguments\"") != std::string_view::npos ||
         span.find("\"parameters\"") != std::string_view::npos)) {
      diagnostics.push_back({DiagnosticKind::MalformedCall, pos, "invalid JSON in tool call"});
      return end;
    }
    return pos;
  }
  int found = 0;
  harvest(j, pos, calls, diagnostics, found);
  return found > 0 ? end : pos;
}

}  // namespace toolreason::grammar
