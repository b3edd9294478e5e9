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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toolreason/toy_policy.h"

namespace toolreason::toy {

/// Central differences of f at x, one coordinate at a time.
Eigen::MatrixXd central_difference(const std::function<double(const Eigen::MatrixXd&)>& f,
                                   const Eigen::MatrixXd& x, double h);

/// ||a - b|| / max(||a||, ||b||, 1e-8)
double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct GradcheckOptions {
  std::uint64_t seed = 0;
  int fd_instances = 50;
  int theorem_instances = 100;
  double fd_step = 1e-5;
  double fd_tolerance = 1e-4;
  double identity_tolerance = 1e-8;
  double min_dagrpo_norm = 1e-6;
  double preference_tolerance = 0.05;  // relative, against 2.3 / 0.22
  DAConfig da;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Residual {
  int instance = 0;
  std::string mode;
  double relative_error = 0.0;
};

struct GradcheckReport {
  std::vector<CheckResult> checks;
  std::vector<Residual> residuals;

  bool all_passed() const;
};

GradcheckReport run_gradcheck(const GradcheckOptions& opts = {});

}  // namespace toolreason::toy
