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
 * Group-relative advantages with entropy reshaping.
 *
 * Plain group advantage:
 *
 *     A_i = (R_i - mean(R)) / std(R)          (zeros when std < zeta)
 *
 * broadcast to every token of rollout i. Diversity-aware reshaping replaces a
 * vanishing advantage with a capped, detached entropy bonus:
 *
 *     Â_t = psi(H_t) = min(alpha * H_t, delta)   if |A_t| < zeta
 *     Â_t = A_t                                   otherwise
 *
 * The surrogate is the usual clipped ratio objective minus kl_coef times the
 * low-variance KL estimator exp(d) - d - 1, d = logp_ref - logp.
 */

#pragma once

#include <span>
#include <string>
#include <vector>

#include "toolreason/types.h"

namespace toolreason {

enum class StdMode { Population, Sample };

struct DAConfig {
  double alpha = 0.1;          // entropy scale
  double delta = 0.5;          // cap on the entropy advantage
  double zeta = 1e-8;          // degeneracy threshold
  double epsilon_clip = 0.2;   // ratio clip
  double kl_coef = 0.001;      // KL penalty weight
  StdMode std_mode = StdMode::Population;
  // Use the signed test A < zeta instead of |A| < zeta. Off by default: the
  // signed form turns every negative advantage into a positive bonus.
  bool literal_eq7 = false;
};

Json to_json(const DAConfig& cfg);
/// Missing keys keep their defaults.
DAConfig da_config_from_json(const Json& j, DAConfig base = {});

enum class AdvantageSource { Reward, Entropy };

std::string_view to_string(AdvantageSource s);
std::string_view to_string(EntropySource s);

struct AdvantageRecord {
  double a_raw = 0.0;
  double a_hat = 0.0;
  AdvantageSource source = AdvantageSource::Reward;
  double entropy = 0.0;
  EntropySource estimator = EntropySource::FullVocabulary;
};

struct GroupAdvantages {
  std::string prompt_id;
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> per_rollout;                    // A_i
  std::vector<std::vector<AdvantageRecord>> tokens;   // [rollout][token]

  std::size_t token_count() const;
  /// Fraction of tokens whose advantage came from the entropy bonus.
  double entropy_fraction() const;
};

double group_mean(std::span<const double> rewards);
double group_std(std::span<const double> rewards, StdMode mode);

/// Throws GroupTooSmall for fewer than two rewards.
std::vector<double> group_advantage(std::span<const double> rewards,
                                    StdMode mode = StdMode::Population, double zeta = 1e-8);

/// Shannon entropy in nats, 0 log 0 = 0. Throws NotADistribution when the
/// entries are negative or do not sum to 1 within 1e-9.
double token_entropy(std::span<const double> dist);

/// -logprob. Throws InvalidLogprob for logprob > 0.
double surprisal_entropy(double logprob_chosen);

/// min(alpha * h, delta), floored at 0.
double psi(double h, const DAConfig& cfg);

/// Whether an advantage counts as vanished under cfg (|a| < zeta, or a < zeta
/// with literal_eq7).
bool is_vanishing(double a, const DAConfig& cfg);

/// Per-token entropy: the logged full-vocabulary value when present,
/// otherwise the chosen-token surprisal.
double resolve_entropy(const TokenRecord& tok, EntropySource* used = nullptr);

/// Throws MissingTokenData when a trajectory carries no token records,
/// GroupTooSmall for G < 2.
GroupAdvantages reshape_advantages(const RolloutGroup& group, const DAConfig& cfg);

/// min(r * a, clip(r, 1 - eps, 1 + eps) * a)
double clipped_surrogate(double ratio, double advantage, double epsilon);

/// exp(d) - d - 1 with d = logp_ref - logp_theta.
double low_var_kl(double logp_theta, double logp_ref);

/// Token mean of low_var_kl.
double kl_penalty(std::span<const double> logp_theta, std::span<const double> logp_ref);

/// Token mean of the clipped surrogate minus kl_coef * kl.
double clipped_objective(std::span<const double> ratios, std::span<const double> advantages,
                         const DAConfig& cfg, double kl = 0.0);

}  // namespace toolreason
