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

#include <string>
#include <vector>

#include "toolreason/pipeline.h"

namespace toolreason::testing {

/// Answers from a table of samples: decomposition prompts get one subtask
/// per reference call, subtask prompts get the next reference call. Samples
/// are found by their query text.
class LookupOracle : public OracleClient {
 public:
  explicit LookupOracle(std::vector<SeedSample> samples) : samples_(std::move(samples)) {}

  std::string generate(const std::vector<ChatMessage>& messages,
                       const GenerationParams& params) const override;

 private:
  std::vector<SeedSample> samples_;
};

/// n samples over a single lookup_order tool with 1 to 3 reference calls each.
std::vector<SeedSample> lookup_samples(int n);
ToolRegistry lookup_registry();

/// `copies` renamed copies of the built-in exchange-rate sample followed by
/// the over-decomposed trip sample.
std::vector<SeedSample> exchange_batch(int copies);

SeedSample builtin_seed(const std::string& id);

}  // namespace toolreason::testing
