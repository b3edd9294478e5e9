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
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toolreason/types.h"

namespace toolreason {

using Tokenizer = std::function<std::size_t(std::string_view)>;

/// A trace is lazy when it is long and reflection-heavy: more than
/// min_tokens tokens and more than min_reflections reflection keywords.
struct LazyConfig {
  int min_tokens = 300;
  int min_reflections = 3;
  std::vector<std::string> reflection_lexicon = default_reflection_lexicon();
  // Whitespace splitting when empty.
  Tokenizer tokenizer;

  static std::vector<std::string> default_reflection_lexicon();
};

struct LazyReport {
  std::size_t token_count = 0;
  std::size_t reflection_count = 0;
  bool is_lazy = false;
  std::map<Behavior, std::size_t> behavior_histogram;
};

Json to_json(const LazyReport& r);

std::size_t whitespace_token_count(std::string_view text);

std::size_t count_reflections(std::string_view reasoning, const std::vector<std::string>& lexicon);

/// A trajectory without reasoning is never lazy.
LazyReport detect_lazy(const Trajectory& t, const LazyConfig& cfg = {});

/// Category fractions over every thought of every trajectory. Empty when
/// there are no thoughts.
std::map<Behavior, double> behavior_distribution(std::span<const Trajectory> trajectories);

}  // namespace toolreason
