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

/**
 * Tabular softmax policy used to check the reshaped-advantage objective
 * end to end: pi(.|s) = softmax(logits.row(s)).
 *
 * A rollout is a sequence of (state, token) pairs with a scalar reward. The
 * objective over a group of G rollouts is
 *
 *     J = 1/G sum_i 1/|y_i| sum_t [ min(r Â, clip(r) Â) - kl_coef * k3 ]
 *
 * with r = pi(y|s) / pi_old(y|s) and advantages computed once from the
 * rewards and the old policy (they carry no gradient).
 */

#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toolreason/advantage.h"

namespace toolreason::toy {

struct ToyPolicy {
  Eigen::MatrixXd logits;            // [states x vocab], current parameters
  Eigen::MatrixXd reference_logits;  // frozen reference policy
  Eigen::MatrixXd old_logits;        // behaviour policy that sampled the group
};

struct ToyRollout {
  std::vector<int> states;
  std::vector<int> tokens;
  double reward = 0.0;
};

struct ToyGroup {
  std::vector<ToyRollout> rollouts;
};

enum class Mode { GRPO, DAGRPO };

struct ToyConfig {
  DAConfig da;
  EntropySource estimator = EntropySource::FullVocabulary;
};

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// Per-token advantages for the group: A_i broadcast, reshaped in DAGRPO mode.
std::vector<std::vector<AdvantageRecord>> toy_advantages(const ToyPolicy& policy,
                                                         const ToyGroup& group,
                                                         const ToyConfig& cfg, Mode mode);

double toy_objective(const ToyPolicy& policy, const ToyGroup& group, const ToyConfig& cfg,
                     Mode mode);

/// Analytic dJ/dlogits.
Eigen::MatrixXd toy_policy_gradient(const ToyPolicy& policy, const ToyGroup& group,
                                    const ToyConfig& cfg, Mode mode);

/// dJ/dlog pi(y_t|s_t) for every token, holding the rest fixed, divided by
/// the token's sequence weight 1/(G|y_i|). This is the scalar that multiplies
/// grad log pi in the policy-gradient sum.
std::vector<std::vector<double>> chosen_logprob_coefficients(const ToyPolicy& policy,
                                                             const ToyGroup& group,
                                                             const ToyConfig& cfg, Mode mode);

/// Gradient of the entropy-bonus tokens alone:
/// 1/G sum_{entropy-sourced (i,t)} 1/|y_i| r psi grad log pi, with the same
/// clip gating as the surrogate. Computed term by term, not through the
/// objective.
Eigen::MatrixXd entropy_term_gradient(const ToyPolicy& policy, const ToyGroup& group,
                                      const ToyConfig& cfg);

struct TokenConditions {
  int rollout = 0;
  int position = 0;
  double ratio = 0.0;
  double psi = 0.0;
  bool clipped = false;
  bool satisfied = false;  // ratio != 0, psi > 0, surrogate not clipped
};

struct StagnationReport {
  std::vector<TokenConditions> tokens;  // entropy-sourced tokens only
  bool preconditions_met = false;
  double dagrpo_gradient_norm = 0.0;
  double grpo_gradient_norm = 0.0;
  bool nonstagnation_holds = true;  // vacuously true when preconditions fail
  bool monotone_in_entropy = true;
  std::vector<std::string> violations;
};

/// Evaluates the non-stagnation preconditions per token and, when any token
/// satisfies them, that the DA-GRPO gradient is non-zero. Also checks that
/// among entropy-sourced tokens with equal ratios the chosen-token
/// coefficient and the chosen-logit gradient are non-decreasing in entropy.
StagnationReport stagnation_check(const ToyPolicy& policy, const ToyGroup& group,
                                  const ToyConfig& cfg);

/// Two-token instance with pi_old(y) = p_high_entropy and p_low_entropy at
/// ratio 1, degenerate rewards and surprisal entropy. Returns the ratio of
/// chosen-token coefficients (high over low) and of chosen-logit gradients.
struct EntropyPreference {
  double coefficient_ratio = 0.0;
  double logit_gradient_ratio = 0.0;
  double entropy_high = 0.0;
  double entropy_low = 0.0;
};
EntropyPreference entropy_preference(double p_high_entropy, double p_low_entropy,
                                     const DAConfig& da);

struct InstanceSpec {
  int states = 4;
  int vocab = 8;
  int min_group = 2;
  int max_group = 6;
  int min_len = 1;
  int max_len = 6;
  bool degenerate_rewards = false;
  double logit_scale = 1.0;      // spread of old logits
  double perturbation = 0.05;    // |logits - old_logits| scale
};

struct ToyInstance {
  ToyPolicy policy;
  ToyGroup group;
};

ToyInstance random_instance(std::mt19937_64& rng, const InstanceSpec& spec);

/// True when some ratio is within `margin` of a clip boundary, where the
/// objective is not differentiable.
bool near_clip_boundary(const ToyPolicy& policy, const ToyGroup& group, const ToyConfig& cfg,
                        Mode mode, double margin);

}  // namespace toolreason::toy
