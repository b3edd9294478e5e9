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

#include "toolreason/advantage.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "toolreason/errors.h"

namespace toolreason {

Json to_json(const DAConfig& cfg) {
  return Json{{"alpha", cfg.alpha},
              {"delta", cfg.delta},
              {"zeta", cfg.zeta},
              {"epsilon_clip", cfg.epsilon_clip},
              {"kl_coef", cfg.kl_coef},
              {"std_mode", cfg.std_mode == StdMode::Population ? "population" : "sample"},
              {"literal_eq7", cfg.literal_eq7}};
}

DAConfig da_config_from_json(const Json& j, DAConfig base) {
  if (!j.is_object()) throw InputError("advantage config must be an object");
  base.alpha = j.value("alpha", base.alpha);
  base.delta = j.value("delta", base.delta);
  base.zeta = j.value("zeta", base.zeta);
  base.epsilon_clip = j.value("epsilon_clip", base.epsilon_clip);
  base.kl_coef = j.value("kl_coef", base.kl_coef);
  base.literal_eq7 = j.value("literal_eq7", base.literal_eq7);
  if (j.contains("std_mode")) {
    const auto mode = j["std_mode"].get<std::string>();
    if (mode == "population") {
      base.std_mode = StdMode::Population;
    } else if (mode == "sample") {
      base.std_mode = StdMode::Sample;
    } else {
      throw InputError("std_mode must be 'population' or 'sample'");
    }
  }
  if (!(base.alpha > 0) || !(base.delta > 0) || !(base.zeta > 0) || base.kl_coef < 0) {
    throw InputError("alpha, delta, zeta must be > 0 and kl_coef >= 0");
  }
  return base;
}

std::string_view to_string(AdvantageSource s) {
  return s == AdvantageSource::Reward ? "reward" : "entropy";
}

std::string_view to_string(EntropySource s) {
  return s == EntropySource::FullVocabulary ? "full_vocabulary" : "surprisal";
}

std::size_t GroupAdvantages::token_count() const {
  std::size_t n = 0;
  for (const auto& row : tokens) n += row.size();
  return n;
}

double GroupAdvantages::entropy_fraction() const {
  std::size_t total = 0;
  std::size_t entropy = 0;
  for (const auto& row : tokens) {
    for (const auto& rec : row) {
      ++total;
      if (rec.source == AdvantageSource::Entropy) ++entropy;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(entropy) / static_cast<double>(total);
}

double group_mean(std::span<const double> rewards) {
  double sum = 0.0;
  for (double r : rewards) sum += r;
  return sum / static_cast<double>(rewards.size());
}

double group_std(std::span<const double> rewards, StdMode mode) {
  const double mean = group_mean(rewards);
  double ss = 0.0;
  for (double r : rewards) ss += (r - mean) * (r - mean);
  const double n = static_cast<double>(rewards.size());
  return std::sqrt(ss / (mode == StdMode::Population ? n : n - 1.0));
}

std::vector<double> group_advantage(std::span<const double> rewards, StdMode mode, double zeta) {
  if (rewards.size() < 2) {
    throw GroupTooSmall("group advantage needs at least 2 rollouts, got " +
                        std::to_string(rewards.size()));
  }
  const double mean = group_mean(rewards);
  const double std = group_std(rewards, mode);
  std::vector<double> out(rewards.size(), 0.0);
  if (std < zeta) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - mean) / std;
  return out;
}

double token_entropy(std::span<const double> dist) {
  double sum = 0.0;
  double h = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw NotADistribution("negative or NaN probability");
    sum += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (dist.empty() || std::abs(sum - 1.0) > 1e-9) {
    throw NotADistribution("probabilities sum to " + std::to_string(sum));
  }
  return std::max(h, 0.0);
}

double surprisal_entropy(double logprob_chosen) {
  if (logprob_chosen > 0.0 || std::isnan(logprob_chosen)) {
    throw InvalidLogprob("log-probability must be <= 0, got " + std::to_string(logprob_chosen));
  }
  return -logprob_chosen;
}

double psi(double h, const DAConfig& cfg) {
  return std::clamp(cfg.alpha * h, 0.0, cfg.delta);
}

bool is_vanishing(double a, const DAConfig& cfg) {
  return cfg.literal_eq7 ? a < cfg.zeta : std::abs(a) < cfg.zeta;
}

double resolve_entropy(const TokenRecord& tok, EntropySource* used) {
  if (tok.entropy) {
    if (used) *used = EntropySource::FullVocabulary;
    return *tok.entropy;
  }
  if (used) *used = EntropySource::Surprisal;
  return surprisal_entropy(tok.logprob_chosen);
}

GroupAdvantages reshape_advantages(const RolloutGroup& group, const DAConfig& cfg) {
  if (group.rewards.size() != group.trajectories.size()) {
    throw InputError("group '" + group.prompt_id + "' has " +
                     std::to_string(group.rewards.size()) + " rewards for " +
                     std::to_string(group.trajectories.size()) + " trajectories");
  }
  GroupAdvantages out;
  out.prompt_id = group.prompt_id;
  out.per_rollout = group_advantage(group.rewards, cfg.std_mode, cfg.zeta);
  out.mean = group_mean(group.rewards);
  out.std = group_std(group.rewards, cfg.std_mode);

  out.tokens.resize(group.trajectories.size());
  for (std::size_t i = 0; i < group.trajectories.size(); ++i) {
    const auto& traj = group.trajectories[i];
    if (!traj.tokens || traj.tokens->empty()) {
      throw MissingTokenData("group '" + group.prompt_id + "' rollout " + std::to_string(i) +
                             " has no token records");
    }
    const double a = out.per_rollout[i];
    auto& row = out.tokens[i];
    row.reserve(traj.tokens->size());
    for (const auto& tok : *traj.tokens) {
      AdvantageRecord rec;
      rec.a_raw = a;
      rec.entropy = resolve_entropy(tok, &rec.estimator);
      if (is_vanishing(a, cfg)) {
        rec.a_hat = psi(rec.entropy, cfg);
        rec.source = AdvantageSource::Entropy;
      } else {
        rec.a_hat = a;
        rec.source = AdvantageSource::Reward;
      }
      row.push_back(rec);
    }
  }
  return out;
}

double clipped_surrogate(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double low_var_kl(double logp_theta, double logp_ref) {
  const double d = logp_ref - logp_theta;
  // expm1 keeps the estimate non-negative for |d| near machine epsilon.
  return std::max(std::expm1(d) - d, 0.0);
}

double kl_penalty(std::span<const double> logp_theta, std::span<const double> logp_ref) {
  if (logp_theta.size() != logp_ref.size()) {
    throw std::invalid_argument("kl_penalty: length mismatch");
  }
  if (logp_theta.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < logp_theta.size(); ++i) sum += low_var_kl(logp_theta[i], logp_ref[i]);
  return sum / static_cast<double>(logp_theta.size());
}

double clipped_objective(std::span<const double> ratios, std::span<const double> advantages,
                         const DAConfig& cfg, double kl) {
  if (ratios.size() != advantages.size()) {
    throw std::invalid_argument("clipped_objective: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(ratios[i] > 0.0)) throw std::invalid_argument("clipped_objective: ratio must be > 0");
    sum += clipped_surrogate(ratios[i], advantages[i], cfg.epsilon_clip);
  }
  const double mean = ratios.empty() ? 0.0 : sum / static_cast<double>(ratios.size());
  return mean - cfg.kl_coef * kl;
}

}  // namespace toolreason
