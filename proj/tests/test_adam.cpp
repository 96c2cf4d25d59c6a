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
#include "tessac/adam.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace {

using tessac::AdamState;

TEST(Adam, FirstStepMovesByLearningRate) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd g(3);
  g << 2.0, -0.5, 1e-3;
  AdamState<double> state(3);
  tessac::adam_step(p, g, state);
  // bias-corrected first step is lr * sign(g), up to epsilon
  EXPECT_NEAR(p(0), -3e-4, 1e-10);
  EXPECT_NEAR(p(1), 3e-4, 1e-10);
  EXPECT_NEAR(p(2), -3e-4, 1e-8);
  EXPECT_EQ(state.step_count, 1);
}

TEST(Adam, ZeroGradientLeavesParams) {
  Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(4, -1.0, 1.0);
  const Eigen::VectorXd before = p;
  AdamState<double> state(4);
  for (int i = 0; i < 10; ++i) tessac::adam_step(p, Eigen::VectorXd::Zero(4).eval(), state);
  EXPECT_EQ(p, before);
}

TEST(Adam, NonFiniteGradientThrows) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd g(2);
  g << 1.0, std::numeric_limits<double>::quiet_NaN();
  AdamState<double> state(2);
  EXPECT_THROW(tessac::adam_step(p, g, state), tessac::NumericError);
  g(1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(tessac::adam_step(p, g, state), tessac::NumericError);
  EXPECT_TRUE(p.isZero());
}

TEST(Adam, LengthMismatchThrows) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(2);
  AdamState<double> state(2);
  EXPECT_THROW(tessac::adam_step(p, Eigen::VectorXd::Zero(3).eval(), state), tessac::ShapeError);
}

TEST(Adam, MinimizesQuadratic) {
  Eigen::VectorXd p(2);
  p << 3.0, -2.0;
  AdamState<double> state(2, 0.05);
  for (int i = 0; i < 2000; ++i) {
    const Eigen::VectorXd g = 2.0 * p;
    tessac::adam_step(p, g, state);
  }
  EXPECT_LT(p.norm(), 1e-2);
}

TEST(Adam, Deterministic) {
  auto run = [] {
    Eigen::VectorXd p = Eigen::VectorXd::Ones(5);
    AdamState<double> state(5);
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd g = p.array().sin();
      tessac::adam_step(p, g, state);
    }
    return p;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
