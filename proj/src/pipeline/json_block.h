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

#include <optional>
#include <string_view>

#include "toolreason/value.h"

namespace toolreason::detail {

/// The whole text as JSON, or else the span from the first '{' or '[' to
/// the last matching closer (models like to wrap JSON in prose or fences).
std::optional<Json> extract_json_block(std::string_view text);

}  // namespace toolreason::detail
