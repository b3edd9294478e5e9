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

#include "toolreason/toy_policy.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace toolreason::toy {
namespace {

double log_softmax_at(const Eigen::MatrixXd& logits, int s, int v) {
  const auto row = logits.row(s);
  const double m = row.maxCoeff();
  const double lse = m + std::log((row.array() - m).exp().sum());
  return logits(s, v) - lse;
}

struct TokenView {
  int rollout;
  int position;
  int state;
  int token;
  double weight;  // 1 / (G |y_i|)
  double logp;
  double logp_old;
  double logp_ref;
  double ratio;
};

template <typename F>
void for_each_token(const ToyPolicy& policy, const ToyGroup& group, F&& f) {
  const double g = static_cast<double>(group.rollouts.size());
  for (std::size_t i = 0; i < group.rollouts.size(); ++i) {
    const auto& ro = group.rollouts[i];
    const double w = 1.0 / (g * static_cast<double>(ro.tokens.size()));
    for (std::size_t t = 0; t < ro.tokens.size(); ++t) {
      TokenView tv{};
      tv.rollout = static_cast<int>(i);
      tv.position = static_cast<int>(t);
      tv.state = ro.states[t];
      tv.token = ro.tokens[t];
      tv.weight = w;
      tv.logp = log_softmax_at(policy.logits, tv.state, tv.token);
      tv.logp_old = log_softmax_at(policy.old_logits, tv.state, tv.token);
      tv.logp_ref = log_softmax_at(policy.reference_logits, tv.state, tv.token);
      tv.ratio = std::exp(tv.logp - tv.logp_old);
      f(tv);
    }
  }
}

// d/d(log pi) of the clipped surrogate for one token.
double surrogate_slope(double ratio, double adv, double eps) {
  if (adv > 0.0 && ratio > 1.0 + eps) return 0.0;
  if (adv < 0.0 && ratio < 1.0 - eps) return 0.0;
  return adv * ratio;
}

// d/d(log pi) of -kl_coef * (exp(d) - d - 1), d = logp_ref - logp.
double kl_slope(double logp, double logp_ref, double kl_coef) {
  return kl_coef * std::expm1(logp_ref - logp);
}

void accumulate(Eigen::MatrixXd& grad, const Eigen::MatrixXd& probs, int state, int token,
                double coef) {
  grad.row(state) -= coef * probs.row(state);
  grad(state, token) += coef;
}

}  // namespace

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index s = 0; s < logits.rows(); ++s) {
    const double m = logits.row(s).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(s).array() - m).exp();
    out.row(s) = e / e.sum();
  }
  return out;
}

std::vector<std::vector<AdvantageRecord>> toy_advantages(const ToyPolicy& policy,
                                                         const ToyGroup& group,
                                                         const ToyConfig& cfg, Mode mode) {
  std::vector<double> rewards;
  rewards.reserve(group.rollouts.size());
  for (const auto& ro : group.rollouts) rewards.push_back(ro.reward);
  const auto adv = group_advantage(rewards, cfg.da.std_mode, cfg.da.zeta);
  const Eigen::MatrixXd old_probs = softmax_rows(policy.old_logits);

  std::vector<std::vector<AdvantageRecord>> out(group.rollouts.size());
  for (std::size_t i = 0; i < group.rollouts.size(); ++i) {
    const auto& ro = group.rollouts[i];
    for (std::size_t t = 0; t < ro.tokens.size(); ++t) {
      AdvantageRecord rec;
      rec.a_raw = adv[i];
      rec.estimator = cfg.estimator;
      const int s = ro.states[t];
      if (cfg.estimator == EntropySource::FullVocabulary) {
        const Eigen::RowVectorXd row = old_probs.row(s);
        rec.entropy = token_entropy(std::span<const double>(row.data(), row.size()));
      } else {
        rec.entropy = surprisal_entropy(log_softmax_at(policy.old_logits, s, ro.tokens[t]));
      }
      if (mode == Mode::DAGRPO && is_vanishing(adv[i], cfg.da)) {
        rec.a_hat = psi(rec.entropy, cfg.da);
        rec.source = AdvantageSource::Entropy;
      } else {
        rec.a_hat = adv[i];
        rec.source = AdvantageSource::Reward;
      }
      out[i].push_back(rec);
    }
  }
  return out;
}

double toy_objective(const ToyPolicy& policy, const ToyGroup& group, const ToyConfig& cfg,
                     Mode mode) {
  const auto adv = toy_advantages(policy, group, cfg, mode);
  double j = 0.0;
  for_each_token(policy, group, [&](const TokenView& tv) {
    const double a_hat = adv[tv.rollout][tv.position].a_hat;
    const double surrogate = clipped_surrogate(tv.ratio, a_hat, cfg.da.epsilon_clip);
    const double kl = std::expm1(tv.logp_ref - tv.logp) - (tv.logp_ref - tv.logp);
    j += tv.weight * (surrogate - cfg.da.kl_coef * kl);
  });
  return j;
}

Eigen::MatrixXd toy_policy_gradient(const ToyPolicy& policy, const ToyGroup& group,
                                    const ToyConfig& cfg, Mode mode) {
  const auto adv = toy_advantages(policy, group, cfg, mode);
  const Eigen::MatrixXd probs = softmax_rows(policy.logits);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(policy.logits.rows(), policy.logits.cols());
  for_each_token(policy, group, [&](const TokenView& tv) {
    const double a_hat = adv[tv.rollout][tv.position].a_hat;
    const double slope = surrogate_slope(tv.ratio, a_hat, cfg.da.epsilon_clip) +
                         kl_slope(tv.logp, tv.logp_ref, cfg.da.kl_coef);
    if (slope != 0.0) accumulate(grad, probs, tv.state, tv.token, tv.weight * slope);
  });
  return grad;
}

std::vector<std::vector<double>> chosen_logprob_coefficients(const ToyPolicy& policy,
                                                             const ToyGroup& group,
                                                             const ToyConfig& cfg, Mode mode) {
  const auto adv = toy_advantages(policy, group, cfg, mode);
  std::vector<std::vector<double>> out(group.rollouts.size());
  for_each_token(policy, group, [&](const TokenView& tv) {
    const double a_hat = adv[tv.rollout][tv.position].a_hat;
    out[tv.rollout].push_back(surrogate_slope(tv.ratio, a_hat, cfg.da.epsilon_clip) +
                              kl_slope(tv.logp, tv.logp_ref, cfg.da.kl_coef));
  });
  return out;
}

Eigen::MatrixXd entropy_term_gradient(const ToyPolicy& policy, const ToyGroup& group,
                                      const ToyConfig& cfg) {
  const auto adv = toy_advantages(policy, group, cfg, Mode::DAGRPO);
  const Eigen::MatrixXd probs = softmax_rows(policy.logits);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(policy.logits.rows(), policy.logits.cols());
  for_each_token(policy, group, [&](const TokenView& tv) {
    const auto& rec = adv[tv.rollout][tv.position];
    if (rec.source != AdvantageSource::Entropy) return;
    if (tv.ratio > 1.0 + cfg.da.epsilon_clip) return;  // clipped, psi >= 0
    accumulate(grad, probs, tv.state, tv.token, tv.weight * tv.ratio * rec.a_hat);
  });
  return grad;
}

StagnationReport stagnation_check(const ToyPolicy& policy, const ToyGroup& group,
                                  const ToyConfig& cfg) {
  // The gradient claims are stated without the KL term.
  ToyConfig no_kl = cfg;
  no_kl.da.kl_coef = 0.0;

  StagnationReport report;
  const auto adv = toy_advantages(policy, group, no_kl, Mode::DAGRPO);
  const Eigen::MatrixXd probs = softmax_rows(policy.logits);
  const auto coefs = chosen_logprob_coefficients(policy, group, no_kl, Mode::DAGRPO);

  struct Entry {
    double ratio;
    double entropy;
    double coefficient;
    double logit_gradient;
  };
  std::vector<Entry> entries;

  for_each_token(policy, group, [&](const TokenView& tv) {
    const auto& rec = adv[tv.rollout][tv.position];
    if (rec.source != AdvantageSource::Entropy) return;
    TokenConditions c;
    c.rollout = tv.rollout;
    c.position = tv.position;
    c.ratio = tv.ratio;
    c.psi = rec.a_hat;
    c.clipped = tv.ratio > 1.0 + no_kl.da.epsilon_clip;
    c.satisfied = c.ratio != 0.0 && c.psi > 0.0 && !c.clipped;
    report.preconditions_met = report.preconditions_met || c.satisfied;
    report.tokens.push_back(c);

    const double coef = coefs[tv.rollout][tv.position];
    entries.push_back(
        {tv.ratio, rec.entropy, coef, std::abs(coef * (1.0 - probs(tv.state, tv.token)))});
  });

  report.dagrpo_gradient_norm = toy_policy_gradient(policy, group, no_kl, Mode::DAGRPO).norm();
  report.grpo_gradient_norm = toy_policy_gradient(policy, group, no_kl, Mode::GRPO).norm();
  if (report.preconditions_met && !(report.dagrpo_gradient_norm > 0.0)) {
    report.nonstagnation_holds = false;
    report.violations.push_back("gradient vanished although preconditions hold");
  }

  // Bucket by ratio, then require non-decreasing magnitudes along entropy.
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.ratio != b.ratio ? a.ratio < b.ratio : a.entropy < b.entropy;
  });
  const bool check_logit = cfg.estimator == EntropySource::Surprisal;
  for (std::size_t k = 1; k < entries.size(); ++k) {
    const auto& lo = entries[k - 1];
    const auto& hi = entries[k];
    if (std::abs(hi.ratio - lo.ratio) > 1e-12 * std::max(1.0, std::abs(lo.ratio))) continue;
    if (hi.entropy <= lo.entropy) continue;
    const double slack = 1e-12;
    if (std::abs(hi.coefficient) + slack < std::abs(lo.coefficient) ||
        (check_logit && hi.logit_gradient + slack < lo.logit_gradient)) {
      report.monotone_in_entropy = false;
      report.violations.push_back("gradient magnitude decreased with entropy at ratio " +
                                  std::to_string(lo.ratio));
    }
  }
  return report;
}

EntropyPreference entropy_preference(double p_high_entropy, double p_low_entropy,
                                     const DAConfig& da) {
  ToyPolicy policy;
  policy.old_logits.resize(2, 2);
  policy.old_logits << std::log(p_high_entropy), std::log(1.0 - p_high_entropy),
      std::log(p_low_entropy), std::log(1.0 - p_low_entropy);
  policy.logits = policy.old_logits;
  policy.reference_logits = policy.old_logits;

  ToyGroup group;
  group.rollouts.push_back(ToyRollout{{0, 1}, {0, 0}, 3.0});
  group.rollouts.push_back(ToyRollout{{0, 1}, {0, 0}, 3.0});

  ToyConfig cfg;
  cfg.da = da;
  cfg.da.kl_coef = 0.0;
  cfg.estimator = EntropySource::Surprisal;

  const auto coefs = chosen_logprob_coefficients(policy, group, cfg, Mode::DAGRPO);
  const auto adv = toy_advantages(policy, group, cfg, Mode::DAGRPO);
  const Eigen::MatrixXd probs = softmax_rows(policy.logits);

  EntropyPreference out;
  out.entropy_high = adv[0][0].entropy;
  out.entropy_low = adv[0][1].entropy;
  out.coefficient_ratio = coefs[0][0] / coefs[0][1];
  out.logit_gradient_ratio =
      (coefs[0][0] * (1.0 - probs(0, 0))) / (coefs[0][1] * (1.0 - probs(1, 0)));
  return out;
}

ToyInstance random_instance(std::mt19937_64& rng, const InstanceSpec& spec) {
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](double scale) {
    Eigen::MatrixXd m(spec.states, spec.vocab);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = scale * normal(rng);
    }
    return m;
  };

  ToyInstance inst;
  inst.policy.old_logits = gaussian(spec.logit_scale);
  inst.policy.reference_logits = inst.policy.old_logits + gaussian(0.1);
  inst.policy.logits = inst.policy.old_logits + gaussian(spec.perturbation);

  const Eigen::MatrixXd old_probs = softmax_rows(inst.policy.old_logits);
  std::uniform_int_distribution<int> group_size(spec.min_group, spec.max_group);
  std::uniform_int_distribution<int> length(spec.min_len, spec.max_len);
  std::uniform_int_distribution<int> state(0, spec.states - 1);
  std::uniform_int_distribution<int> reward(0, 4);

  const int g = group_size(rng);
  const double shared = static_cast<double>(reward(rng));
  for (int i = 0; i < g; ++i) {
    ToyRollout ro;
    ro.reward = spec.degenerate_rewards ? shared : static_cast<double>(reward(rng));
    const int n = length(rng);
    for (int t = 0; t < n; ++t) {
      const int s = state(rng);
      const Eigen::RowVectorXd row = old_probs.row(s);
      std::discrete_distribution<int> pick(row.data(), row.data() + row.size());
      ro.states.push_back(s);
      ro.tokens.push_back(pick(rng));
    }
    inst.group.rollouts.push_back(std::move(ro));
  }
  return inst;
}

bool near_clip_boundary(const ToyPolicy& policy, const ToyGroup& group, const ToyConfig& cfg,
                        Mode mode, double margin) {
  const auto adv = toy_advantages(policy, group, cfg, mode);
  bool near = false;
  for_each_token(policy, group, [&](const TokenView& tv) {
    if (adv[tv.rollout][tv.position].a_hat == 0.0) return;
    const double eps = cfg.da.epsilon_clip;
    if (std::abs(tv.ratio - (1.0 + eps)) < margin || std::abs(tv.ratio - (1.0 - eps)) < margin) {
      near = true;
    }
  });
  return near;
}

}  // namespace toolreason::toy
