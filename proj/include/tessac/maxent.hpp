/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The tessac Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <stdexcept>

#include "tessac/adam.hpp"
#include "tessac/mlp.hpp"
#include "tessac/replay.hpp"

namespace tessac {

/// Categorical action distribution with its log-probabilities.
template <typename Scalar = double>
struct PolicyDistribution {
  Vector<Scalar> probs;
  Vector<Scalar> log_probs;

  Eigen::Index size() const { return probs.size(); }
};

template <typename Scalar>
struct LossAndGrad {
  Scalar loss;
  Gradient<Scalar> grad;
};

/// Loss and its derivative with respect to log(alpha).
template <typename Scalar>
struct ScalarLossAndGrad {
  Scalar loss;
  Scalar grad;
};

/// Temperature stored as log(alpha) so alpha stays positive under any update.
template <typename Scalar = double>
struct TemperatureState {
  Scalar log_alpha = 0;
  AdamState<Scalar> optimizer{1};

  TemperatureState() = default;
  explicit TemperatureState(Scalar initial_log_alpha, Scalar lr = Scalar(3e-4))
      : log_alpha(initial_log_alpha), optimizer(1, lr) {}

  Scalar alpha() const { return std::exp(log_alpha); }
};

namespace detail {

template <typename Scalar>
void require_finite(const Matrix<Scalar>& m, const char* what) {
  if (!m.allFinite()) throw NumericError(std::string(what) + ": non-finite input");
}

template <typename Scalar>
void require_positive_alpha(Scalar alpha, const char* what) {
  if (!(alpha > Scalar(0)) || !std::isfinite(alpha)) {
    throw std::invalid_argument(std::string(what) + ": temperature must be positive and finite");
  }
}

}  // namespace detail

/// Column-wise log-softmax with max subtraction.
template <typename Scalar>
Matrix<Scalar> log_softmax_columns(const Matrix<Scalar>& logits) {
  detail::require_finite(logits, "log_softmax_columns");
  Matrix<Scalar> shifted = logits.rowwise() - logits.colwise().maxCoeff();
  const auto log_norm = shifted.array().exp().colwise().sum().log().matrix().eval();
  return shifted.rowwise() - log_norm;
}

template <typename Scalar>
PolicyDistribution<Scalar> policy_from_logits(const Vector<Scalar>& logits) {
  PolicyDistribution<Scalar> dist;
  dist.log_probs = log_softmax_columns<Scalar>(logits);
  dist.probs = dist.log_probs.array().exp();
  return dist;
}

template <typename Scalar>
Scalar entropy(const PolicyDistribution<Scalar>& dist) {
  return -(dist.probs.array() * dist.log_probs.array()).sum();
}

/// Mean over columns of the per-column entropy, given column log-probabilities.
template <typename Scalar>
Scalar mean_entropy(const Matrix<Scalar>& log_probs) {
  const Matrix<Scalar> probs = log_probs.array().exp();
  return -(probs.array() * log_probs.array()).sum() / static_cast<Scalar>(log_probs.cols());
}

/// E_pi[Q - alpha log pi] computed exactly over the action set.
template <typename Scalar>
Scalar soft_value(const Vector<Scalar>& q_values, const PolicyDistribution<Scalar>& dist,
                  Scalar alpha) {
  if (q_values.size() != dist.size()) throw ShapeError("soft_value: Q and policy lengths differ");
  return (dist.probs.array() * (q_values.array() - alpha * dist.log_probs.array())).sum();
}

/// r + gamma * (1 - done) * V(s') for every batch column, with V from next-state Q and log pi.
template <typename Scalar>
Vector<Scalar> soft_bellman_targets(const Batch<Scalar>& batch, const Matrix<Scalar>& next_q,
                                    const Matrix<Scalar>& next_log_probs, Scalar alpha,
                                    Scalar gamma) {
  const Matrix<Scalar> next_probs = next_log_probs.array().exp();
  const Vector<Scalar> next_v =
      (next_probs.array() * (next_q.array() - alpha * next_log_probs.array())).colwise().sum();
  return batch.rewards.array() + gamma * batch.not_done.array() * next_v.array();
}

/// Mean of 0.5 (Q(s,a) - target)^2; targets are treated as constants.
template <typename Scalar>
LossAndGrad<Scalar> critic_regression_loss_and_grad(const Mlp<Scalar>& critic,
                                                    const Batch<Scalar>& batch,
                                                    const Vector<Scalar>& targets) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw ShapeError("critic loss: empty batch");
  if (targets.size() != n) throw ShapeError("critic loss: target count differs from batch size");
  const auto tape = critic.record(batch.states);
  const Matrix<Scalar>& q = tape.output();
  Matrix<Scalar> dq = Matrix<Scalar>::Zero(q.rows(), n);
  Scalar loss = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const int a = batch.actions[static_cast<std::size_t>(j)];
    if (a < 0 || a >= q.rows()) throw ShapeError("critic loss: action index out of range");
    const Scalar td = q(a, j) - targets(j);
    loss += Scalar(0.5) * td * td;
    dq(a, j) = td / static_cast<Scalar>(n);
  }
  return {loss / static_cast<Scalar>(n), critic.backward_batch(tape, dq)};
}

/// Soft Bellman error of the critic against the target critic and the actor's next-state policy.
template <typename Scalar>
LossAndGrad<Scalar> critic_loss_and_grad(const Mlp<Scalar>& critic,
                                         const Mlp<Scalar>& target_critic,
                                         const Mlp<Scalar>& actor, const Batch<Scalar>& batch,
                                         Scalar alpha, Scalar gamma) {
  const Matrix<Scalar> next_q = target_critic.forward_batch(batch.next_states);
  const Matrix<Scalar> next_log_probs = log_softmax_columns<Scalar>(actor.forward_batch(batch.next_states));
  if (next_q.rows() != next_log_probs.rows()) {
    throw ShapeError("critic loss: critic and actor action counts differ");
  }
  return critic_regression_loss_and_grad(
      critic, batch, soft_bellman_targets(batch, next_q, next_log_probs, alpha, gamma));
}

/**
 * Actor loss mean_s sum_a pi(a|s) [alpha log pi(a|s) - Q(s,a)] with Q held fixed.
 *
 * With f = alpha log pi - Q, the logit gradient per state is pi * (f - E_pi f);
 * the derivative of the log term contributes alpha * pi - alpha * pi = 0.
 */
template <typename Scalar>
LossAndGrad<Scalar> actor_loss_and_grad_from_q(const Mlp<Scalar>& actor,
                                               const Matrix<Scalar>& states,
                                               const Matrix<Scalar>& q, Scalar alpha) {
  const Eigen::Index n = states.cols();
  if (n == 0) throw ShapeError("actor loss: empty batch");
  const auto tape = actor.record(states);
  const Matrix<Scalar> log_probs = log_softmax_columns<Scalar>(tape.output());
  if (q.rows() != log_probs.rows() || q.cols() != n) {
    throw ShapeError("actor loss: Q matrix shape differs from policy shape");
  }
  const Matrix<Scalar> probs = log_probs.array().exp();
  const Matrix<Scalar> f = alpha * log_probs - q;
  const auto expected_f = (probs.array() * f.array()).colwise().sum().eval();
  const Matrix<Scalar> dlogits =
      (probs.array() * (f.array().rowwise() - expected_f)) / static_cast<Scalar>(n);
  return {expected_f.sum() / static_cast<Scalar>(n), actor.backward_batch(tape, dlogits)};
}

template <typename Scalar>
LossAndGrad<Scalar> actor_loss_and_grad(const Mlp<Scalar>& actor, const Mlp<Scalar>& critic,
                                        const Batch<Scalar>& batch, Scalar alpha) {
  return actor_loss_and_grad_from_q(actor, batch.states, critic.forward_batch(batch.states), alpha);
}

/// alpha * (H_mean - H_target); the entropy is a constant, so d/dlog(alpha) equals the loss.
template <typename Scalar>
ScalarLossAndGrad<Scalar> temperature_loss_and_grad(Scalar mean_entropy, Scalar target_entropy,
                                                    const TemperatureState<Scalar>& temp) {
  const Scalar value = temp.alpha() * (mean_entropy - target_entropy);
  return {value, value};
}

/// One Adam step on log(alpha) given its gradient.
template <typename Scalar>
void temperature_step(TemperatureState<Scalar>& temp, Scalar grad_log_alpha) {
  Vector<Scalar> param(1);
  param(0) = temp.log_alpha;
  Gradient<Scalar> grad(1);
  grad(0) = grad_log_alpha;
  adam_step(param, grad, temp.optimizer);
  temp.log_alpha = param(0);
}

/// Soft-greedy (Boltzmann) policy softmax(Q / alpha).
template <typename Scalar>
PolicyDistribution<Scalar> sql_policy(const Vector<Scalar>& q_values, Scalar alpha) {
  detail::require_positive_alpha(alpha, "sql_policy");
  return policy_from_logits<Scalar>(q_values / alpha);
}

/// alpha * log sum_a exp(Q(a) / alpha) for every column of q.
template <typename Scalar>
Vector<Scalar> sql_soft_values(const Matrix<Scalar>& q, Scalar alpha) {
  detail::require_positive_alpha(alpha, "sql_soft_values");
  const Matrix<Scalar> scaled = q / alpha;
  const auto max = scaled.colwise().maxCoeff().eval();
  const auto lse =
      ((scaled.rowwise() - max).array().exp().colwise().sum().log() + max.array()).eval();
  return (alpha * lse).transpose();
}

/**
 * Batch mean of E_pi[-Q + alpha log Z - alpha H_target] with pi = softmax(Q / alpha).
 *
 * The value equals alpha (H[pi] - H_target). The gradient with respect to
 * log(alpha) includes the dependence of pi on alpha:
 *   alpha (H - H_target) + Var_pi(Q) / alpha.
 */
template <typename Scalar>
ScalarLossAndGrad<Scalar> sql_temperature_loss_and_grad(const Matrix<Scalar>& q_batch, Scalar alpha,
                                                        Scalar target_entropy) {
  detail::require_positive_alpha(alpha, "sql_temperature_loss_and_grad");
  const Eigen::Index n = q_batch.cols();
  if (n == 0) throw ShapeError("sql temperature loss: empty batch");
  const Matrix<Scalar> log_probs = log_softmax_columns<Scalar>(q_batch / alpha);
  const Matrix<Scalar> probs = log_probs.array().exp();
  const Vector<Scalar> log_z = sql_soft_values<Scalar>(q_batch, alpha) / alpha;
  Scalar loss = 0;
  Scalar grad = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar expected_q = probs.col(j).dot(q_batch.col(j));
    loss += -expected_q + alpha * log_z(j) - alpha * target_entropy;
    const Scalar h = -probs.col(j).dot(log_probs.col(j));
    const Scalar var = (probs.col(j).array() * (q_batch.col(j).array() - expected_q).square()).sum();
    grad += alpha * (h - target_entropy) + var / alpha;
  }
  return {loss / static_cast<Scalar>(n), grad / static_cast<Scalar>(n)};
}

/// Total variation distance 0.5 sum |p - q|.
template <typename Scalar>
Scalar total_variation(const Vector<Scalar>& p, const Vector<Scalar>& q) {
  if (p.size() != q.size()) throw ShapeError("total_variation: length mismatch");
  return Scalar(0.5) * (p - q).cwiseAbs().sum();
}

}  // namespace tessac
