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

#include "toolreason/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace toolreason::toy {
namespace {

constexpr double kClipMargin = 1e-3;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Draws instances until none sits on a clip kink for either mode.
ToyInstance smooth_instance(std::mt19937_64& rng, const InstanceSpec& spec, const ToyConfig& cfg) {
  while (true) {
    ToyInstance inst = random_instance(rng, spec);
    if (!near_clip_boundary(inst.policy, inst.group, cfg, Mode::GRPO, kClipMargin) &&
        !near_clip_boundary(inst.policy, inst.group, cfg, Mode::DAGRPO, kClipMargin)) {
      return inst;
    }
  }
}

bool has_vanishing(const ToyInstance& inst, const ToyConfig& cfg) {
  for (const auto& row : toy_advantages(inst.policy, inst.group, cfg, Mode::GRPO)) {
    for (const auto& rec : row) {
      if (is_vanishing(rec.a_raw, cfg.da)) return true;
    }
  }
  return false;
}

CheckResult check_non_stagnation(const GradcheckOptions& opts, std::mt19937_64& rng) {
  InstanceSpec spec;
  spec.degenerate_rewards = true;
  ToyConfig cfg;
  cfg.da = opts.da;

  int passed = 0;
  int applicable = 0;
  double min_norm = INFINITY;
  std::string first_failure;
  for (int k = 0; k < opts.theorem_instances; ++k) {
    const ToyInstance inst = random_instance(rng, spec);
    const StagnationReport rep = stagnation_check(inst.policy, inst.group, cfg);
    bool ok = rep.grpo_gradient_norm == 0.0 && rep.nonstagnation_holds;
    if (rep.preconditions_met) {
      ++applicable;
      min_norm = std::min(min_norm, rep.dagrpo_gradient_norm);
      ok = ok && rep.dagrpo_gradient_norm > opts.min_dagrpo_norm;
    }
    if (ok) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = "; instance " + std::to_string(k) + ": grpo " + fmt(rep.grpo_gradient_norm) +
                      ", dagrpo " + fmt(rep.dagrpo_gradient_norm);
    }
  }
  return {"non_stagnation", passed == opts.theorem_instances,
          std::to_string(passed) + "/" + std::to_string(opts.theorem_instances) + " passed, " +
              std::to_string(applicable) + " with preconditions met, min DA-GRPO norm " +
              fmt(min_norm) + first_failure};
}

CheckResult check_entropy_preference(const GradcheckOptions& opts, std::mt19937_64& rng) {
  const EntropyPreference pref = entropy_preference(0.1, 0.8, opts.da);
  const double expected = 2.3 / 0.22;
  const double rel = std::abs(pref.coefficient_ratio - expected) / expected;

  // Direction check on random degenerate groups with the surprisal estimator.
  InstanceSpec spec;
  spec.degenerate_rewards = true;
  spec.perturbation = 0.0;  // equal ratios everywhere
  ToyConfig cfg;
  cfg.da = opts.da;
  cfg.estimator = EntropySource::Surprisal;
  int monotone = 0;
  for (int k = 0; k < opts.theorem_instances; ++k) {
    const ToyInstance inst = random_instance(rng, spec);
    if (stagnation_check(inst.policy, inst.group, cfg).monotone_in_entropy) ++monotone;
  }

  const bool ok = rel <= opts.preference_tolerance && pref.coefficient_ratio > 1.0 &&
                  pref.logit_gradient_ratio > 1.0 && monotone == opts.theorem_instances;
  return {"entropy_preference", ok,
          "coefficient ratio " + fmt(pref.coefficient_ratio) + " vs " + fmt(expected) +
              " (rel " + fmt(rel) + "), logit-gradient ratio " + fmt(pref.logit_gradient_ratio) +
              ", monotone on " + std::to_string(monotone) + "/" +
              std::to_string(opts.theorem_instances)};
}

CheckResult check_finite_differences(const GradcheckOptions& opts, std::mt19937_64& rng,
                                     Mode mode, std::vector<Residual>& residuals) {
  const char* label = mode == Mode::GRPO ? "grpo" : "dagrpo";
  ToyConfig cfg;
  cfg.da = opts.da;
  double worst = 0.0;
  int passed = 0;
  for (int k = 0; k < opts.fd_instances; ++k) {
    InstanceSpec spec;
    spec.degenerate_rewards = (k % 2) == 1;
    spec.perturbation = 0.1;
    const ToyInstance inst = smooth_instance(rng, spec, cfg);
    const Eigen::MatrixXd analytic = toy_policy_gradient(inst.policy, inst.group, cfg, mode);
    const Eigen::MatrixXd numeric = central_difference(
        [&](const Eigen::MatrixXd& x) {
          ToyPolicy p = inst.policy;
          p.logits = x;
          return toy_objective(p, inst.group, cfg, mode);
        },
        inst.policy.logits, opts.fd_step);
    const double err = relative_error(analytic, numeric);
    residuals.push_back({k, label, err});
    worst = std::max(worst, err);
    if (err <= opts.fd_tolerance) ++passed;
  }
  return {std::string("finite_difference_") + label, passed == opts.fd_instances,
          std::to_string(passed) + "/" + std::to_string(opts.fd_instances) +
              " within tolerance, worst relative error " + fmt(worst)};
}

CheckResult check_decomposition(const GradcheckOptions& opts, std::mt19937_64& rng) {
  ToyConfig cfg;
  cfg.da = opts.da;
  double worst = 0.0;
  for (int k = 0; k < opts.fd_instances; ++k) {
    InstanceSpec spec;
    spec.degenerate_rewards = (k % 3) == 0;
    const ToyInstance inst = random_instance(rng, spec);
    const Eigen::MatrixXd diff = toy_policy_gradient(inst.policy, inst.group, cfg, Mode::DAGRPO) -
                                 toy_policy_gradient(inst.policy, inst.group, cfg, Mode::GRPO);
    const Eigen::MatrixXd term = entropy_term_gradient(inst.policy, inst.group, cfg);
    worst = std::max(worst, (diff - term).cwiseAbs().maxCoeff());
  }
  return {"gradient_decomposition", worst <= opts.identity_tolerance,
          "max abs difference " + fmt(worst)};
}

CheckResult check_equivalence(const GradcheckOptions& opts, std::mt19937_64& rng) {
  ToyConfig cfg;
  cfg.da = opts.da;
  int checked = 0;
  int identical = 0;
  while (checked < opts.fd_instances) {
    const ToyInstance inst = random_instance(rng, InstanceSpec{});
    if (has_vanishing(inst, cfg)) continue;
    ++checked;
    const bool same_obj = toy_objective(inst.policy, inst.group, cfg, Mode::GRPO) ==
                          toy_objective(inst.policy, inst.group, cfg, Mode::DAGRPO);
    const bool same_grad = toy_policy_gradient(inst.policy, inst.group, cfg, Mode::GRPO) ==
                           toy_policy_gradient(inst.policy, inst.group, cfg, Mode::DAGRPO);
    if (same_obj && same_grad) ++identical;
  }
  return {"grpo_equivalence_without_vanishing", identical == checked,
          std::to_string(identical) + "/" + std::to_string(checked) + " bit-identical"};
}

}  // namespace

Eigen::MatrixXd central_difference(const std::function<double(const Eigen::MatrixXd&)>& f,
                                   const Eigen::MatrixXd& x, double h) {
  Eigen::MatrixXd grad(x.rows(), x.cols());
  Eigen::MatrixXd probe = x;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      probe(r, c) = x(r, c) + h;
      const double up = f(probe);
      probe(r, c) = x(r, c) - h;
      const double down = f(probe);
      probe(r, c) = x(r, c);
      grad(r, c) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-8});
  return (a - b).norm() / scale;
}

bool GradcheckReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

GradcheckReport run_gradcheck(const GradcheckOptions& opts) {
  GradcheckReport report;
  std::mt19937_64 rng(opts.seed);
  report.checks.push_back(check_non_stagnation(opts, rng));
  report.checks.push_back(check_entropy_preference(opts, rng));
  report.checks.push_back(check_finite_differences(opts, rng, Mode::GRPO, report.residuals));
  report.checks.push_back(check_finite_differences(opts, rng, Mode::DAGRPO, report.residuals));
  report.checks.push_back(check_decomposition(opts, rng));
  report.checks.push_back(check_equivalence(opts, rng));
  return report;
}

}  // namespace toolreason::toy
