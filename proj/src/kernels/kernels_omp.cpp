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

#include <exception>

#include <omp.h>

#include "toolreason/kernels.h"

namespace toolreason::kernels {
namespace {

// Runs body(i) for every index into a pre-sized output, capturing
// exceptions per slot.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, int jobs, F&& body) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  const long long count = static_cast<long long>(n);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

std::vector<RewardBreakdown> score_batch(std::span<const ScoreItem> items, int jobs,
                                         const RewardWeights& w, const ParseConfig& cfg) {
  return parallel_map<RewardBreakdown>(items.size(), jobs,
                                       [&](std::size_t i) { return score_one(items[i], w, cfg); });
}

std::vector<GroupAdvantages> advantage_batch(std::span<const RolloutGroup> groups, int jobs,
                                             const DAConfig& cfg) {
  return parallel_map<GroupAdvantages>(
      groups.size(), jobs, [&](std::size_t i) { return reshape_advantages(groups[i], cfg); });
}

std::vector<LazyReport> lazy_batch(std::span<const std::string> raws, int jobs,
                                   const LazyConfig& cfg, const BehaviorLexicon& lexicon,
                                   const ParseConfig& parse) {
  return parallel_map<LazyReport>(
      raws.size(), jobs, [&](std::size_t i) { return lazy_one(raws[i], cfg, lexicon, parse); });
}

}  // namespace toolreason::kernels
