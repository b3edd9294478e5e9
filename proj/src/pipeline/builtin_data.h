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

// Files under data/ compiled into the library at configure time.

#pragma once

#include <optional>
#include <string_view>

namespace toolreason::builtin {

std::optional<std::string_view> template_text(std::string_view name);
std::string_view registry_json();
std::string_view script_json();
std::string_view seeds_jsonl();
std::string_view few_shots_json();

}  // namespace toolreason::builtin
