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
#include <cstdint>

#include "tessac/mlp.hpp"

namespace tessac {

template <typename Scalar = double>
struct AdamState {
  Vector<Scalar> first_moment;
  Vector<Scalar> second_moment;
  std::int64_t step_count = 0;
  Scalar learning_rate = Scalar(3e-4);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar epsilon = Scalar(1e-8);

  AdamState() = default;
  explicit AdamState(Eigen::Index size, Scalar lr = Scalar(3e-4))
      : first_moment(Vector<Scalar>::Zero(size)),
        second_moment(Vector<Scalar>::Zero(size)),
        learning_rate(lr) {}
};

/// Bias-corrected Adam update applied to params in place.
template <typename Scalar>
void adam_step(Vector<Scalar>& params, const Gradient<Scalar>& grad, AdamState<Scalar>& state) {
  if (params.size() != grad.size() || state.first_moment.size() != grad.size() ||
      state.second_moment.size() != grad.size()) {
    throw ShapeError("adam_step: parameter, gradient and moment lengths differ");
  }
  if (!grad.allFinite()) throw NumericError("adam_step: non-finite gradient entry");

  state.step_count += 1;
  state.first_moment = state.beta1 * state.first_moment + (Scalar(1) - state.beta1) * grad;
  state.second_moment =
      state.beta2 * state.second_moment + (Scalar(1) - state.beta2) * grad.cwiseAbs2();
  const auto t = static_cast<Scalar>(state.step_count);
  const Scalar c1 = Scalar(1) - std::pow(state.beta1, t);
  const Scalar c2 = Scalar(1) - std::pow(state.beta2, t);
  params.array() -= state.learning_rate * (state.first_moment.array() / c1) /
                    ((state.second_moment.array() / c2).sqrt() + state.epsilon);
}

}  // namespace tessac
