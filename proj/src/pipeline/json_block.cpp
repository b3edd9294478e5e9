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

#include "json_block.h"

namespace toolreason::detail {

std::optional<Json> extract_json_block(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (!j.is_discarded()) return j;

  const auto first = text.find_first_of("{[");
  if (first == std::string_view::npos) return std::nullopt;
  const char closer = text[first] == '{' ? '}' : ']';
  const auto last = text.rfind(closer);
  if (last == std::string_view::npos || last < first) return std::nullopt;
  j = Json::parse(text.substr(first, last - first + 1), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

}  // namespace toolreason::detail
