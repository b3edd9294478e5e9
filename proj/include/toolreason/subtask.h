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
#include <string>
#include <vector>

#include "toolreason/errors.h"
#include "toolreason/types.h"

namespace toolreason {

struct Subtask {
  int step = 0;
  std::string description;

  friend bool operator==(const Subtask&, const Subtask&) = default;
};

struct SubtaskResult {
  Subtask subtask;
  std::string raw;  // oracle output for this subtask
  std::string reasoning;
  std::optional<ToolCall> call;
  std::optional<Value> observation;
};

// Failures inside the subtask loop. step() is 1-based, 0 when raised outside
// a loop; completed() holds the results finished before the failing step.
class StepError : public Error {
 public:
  explicit StepError(const std::string& what, int step = 0,
                     std::vector<SubtaskResult> completed = {})
      : Error(what), step_(step), completed_(std::move(completed)) {}

  int step() const { return step_; }
  const std::vector<SubtaskResult>& completed() const { return completed_; }

 private:
  int step_;
  std::vector<SubtaskResult> completed_;
};

class SubtaskParseError : public StepError {
 public:
  using StepError::StepError;
};

class ToolNotFound : public StepError {
 public:
  using StepError::StepError;
};

class ToolArgError : public StepError {
 public:
  using StepError::StepError;
};

}  // namespace toolreason
