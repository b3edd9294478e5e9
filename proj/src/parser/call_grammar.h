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
#include <string_view>
#include <vector>

#include "toolreason/parser.h"

namespace toolreason::grammar {

/// '[' ws identifier ws '(' at `pos`.
bool looks_like_call_list(std::string_view text, std::size_t pos);

/// Parses `[call, call, ...]` starting at `pos` (which must hold '[').
/// Appends well-formed calls and one diagnostic per malformed call. Returns
/// the offset just past the closing ']' (or text.size() if unterminated).
std::size_t parse_call_list(std::string_view text, std::size_t pos, std::vector<ToolCall>& calls,
                            std::vector<Diagnostic>& diagnostics);

/// Tries to read a balanced JSON value at `pos` and harvest
/// {"name", "arguments"} objects from it. Returns `pos` when nothing
/// call-like was found there.
std::size_t parse_json_calls(std::string_view text, std::size_t pos, std::vector<ToolCall>& calls,
                             std::vector<Diagnostic>& diagnostics);

}  // namespace toolreason::grammar
