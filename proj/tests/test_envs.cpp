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
#include "tessac/envs.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using tessac::TabularEnv;

constexpr double kGamma = 0.99;

TEST(Envs, ResetGivesOneHotStart) {
  for (const auto& name : tessac::env_names()) {
    TabularEnv env = tessac::make_env(name);
    const Eigen::VectorXd obs = env.reset(3);
    EXPECT_EQ(obs.size(), env.spec().observation_dim) << name;
    EXPECT_DOUBLE_EQ(obs.sum(), 1.0) << name;
    EXPECT_DOUBLE_EQ(obs(env.start_state()), 1.0) << name;
    EXPECT_EQ(env.elapsed_steps(), 0);
  }
}

TEST(Envs, SpecsOfTheRoster) {
  EXPECT_EQ(tessac::make_env("gridworld5").spec().action_count, 4);
  EXPECT_EQ(tessac::make_env("twingrid5").spec().action_count, 8);
  EXPECT_EQ(tessac::make_env("chain10").spec().action_count, 2);
  EXPECT_EQ(tessac::make_env("chain10").spec().observation_dim, 10);
  EXPECT_EQ(tessac::make_env("gridworld5").spec().observation_dim, 25);
}

TEST(Envs, UnknownNameListsValidOnes) {
  try {
    tessac::make_env("atari");
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("gridworld5"), std::string::npos);
  }
}

TEST(Envs, GridworldGoalGivesRewardAndTerminates) {
  TabularEnv env = tessac::make_gridworld();
  env.reset(0);
  // down four times, then right four times; the last move enters the goal
  for (int i = 0; i < 4; ++i) {
    const auto r = env.step(1);
    EXPECT_DOUBLE_EQ(r.reward, -0.01);
    EXPECT_FALSE(r.done);
  }
  for (int i = 0; i < 3; ++i) EXPECT_FALSE(env.step(3).done);
  const auto last = env.step(3);
  EXPECT_TRUE(last.done);
  EXPECT_DOUBLE_EQ(last.reward, 1.0);
  EXPECT_DOUBLE_EQ(last.next_observation(24), 1.0);
  EXPECT_THROW(env.step(0), std::logic_error);
}

TEST(Envs, GridworldWallsClamp) {
  TabularEnv env = tessac::make_gridworld();
  env.reset(0);
  EXPECT_DOUBLE_EQ(env.step(0).next_observation(0), 1.0);
  EXPECT_DOUBLE_EQ(env.step(2).next_observation(0), 1.0);
}

TEST(Envs, TwinActionsShareTransitions) {
  const TabularEnv grid = tessac::make_gridworld();
  const TabularEnv twin = tessac::make_twin_gridworld();
  for (int s = 0; s < grid.num_states(); ++s) {
    for (int k = 0; k < 4; ++k) {
      const auto& base = grid.outcomes(s, k);
      for (int copy : {2 * k, 2 * k + 1}) {
        const auto& o = twin.outcomes(s, copy);
        ASSERT_EQ(o.size(), base.size());
        for (std::size_t i = 0; i < o.size(); ++i) {
          EXPECT_EQ(o[i].next_state, base[i].next_state);
          EXPECT_EQ(o[i].reward, base[i].reward);
          EXPECT_EQ(o[i].done, base[i].done);
          EXPECT_EQ(o[i].probability, base[i].probability);
        }
      }
    }
  }
}

TEST(Envs, ChainSteps) {
  TabularEnv env = tessac::make_chain(10);
  env.reset(0);
  EXPECT_DOUBLE_EQ(env.step(0).next_observation(0), 1.0);
  for (int s = 1; s <= 8; ++s) {
    const auto r = env.step(1);
    EXPECT_DOUBLE_EQ(r.next_observation(s), 1.0);
    EXPECT_FALSE(r.done);
    EXPECT_DOUBLE_EQ(r.reward, 0.0);
  }
  const auto last = env.step(1);
  EXPECT_TRUE(last.done);
  EXPECT_DOUBLE_EQ(last.reward, 1.0);
}

TEST(Envs, InvalidActionThrows) {
  TabularEnv env = tessac::make_chain(4);
  env.reset(0);
  EXPECT_THROW(env.step(2), std::out_of_range);
  EXPECT_THROW(env.step(-1), std::out_of_range);
}

TEST(Envs, TimeLimitTruncatesWithoutTermination) {
  TabularEnv env = tessac::make_chain(10, 0.0, 1.0, 100);
  env.reset(0);
  for (int t = 1; t < 100; ++t) {
    const auto r = env.step(0);
    ASSERT_FALSE(r.truncated) << t;
  }
  const auto r = env.step(0);
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(r.done);
  EXPECT_THROW(env.step(0), std::logic_error);
  env.reset();
  EXPECT_EQ(env.elapsed_steps(), 0);
}

TEST(Envs, ValueIterationMatchesClosedForms) {
  // chain: the goal sits n-2-s moves away and only the entering step pays
  const Eigen::VectorXd chain = tessac::optimal_values(tessac::make_chain(10), kGamma);
  for (int s = 0; s <= 8; ++s) EXPECT_NEAR(chain(s), std::pow(kGamma, 8 - s), 1e-10) << s;
  EXPECT_NEAR(tessac::optimal_return(tessac::make_chain(3), kGamma), kGamma, 1e-12);

  // gridworld: Manhattan distance d pays d-1 step costs then the goal
  const Eigen::VectorXd grid = tessac::optimal_values(tessac::make_gridworld(), kGamma);
  for (int s = 0; s < 24; ++s) {
    const int d = (4 - s / 5) + (4 - s % 5);
    const double expected = -0.01 * (1.0 - std::pow(kGamma, d - 1)) / (1.0 - kGamma) + std::pow(kGamma, d - 1);
    EXPECT_NEAR(grid(s), expected, 1e-10) << s;
  }
  EXPECT_NEAR(tessac::optimal_return(tessac::make_gridworld(), kGamma), 0.8641306, 1e-6);
  EXPECT_NEAR(tessac::optimal_return(tessac::make_twin_gridworld(), kGamma),
              tessac::optimal_return(tessac::make_gridworld(), kGamma), 1e-12);
}

TabularEnv coin_env() {
  tessac::EnvSpec spec{2, 2, 50, "coin"};
  TabularEnv::Table table(2, std::vector<std::vector<tessac::Outcome>>(2));
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2; ++a) table[s][a] = {{0.5, 0, 0.0, false}, {0.5, 1, 1.0, false}};
  }
  return TabularEnv(spec, 0, table);
}

TEST(Envs, StochasticStepsAreSeeded) {
  auto rollout = [](std::uint64_t seed) {
    TabularEnv env = coin_env();
    env.reset(seed);
    std::vector<double> rewards;
    for (int t = 0; t < 40; ++t) rewards.push_back(env.step(t % 2).reward);
    return rewards;
  };
  EXPECT_EQ(rollout(7), rollout(7));
  EXPECT_NE(rollout(7), rollout(8));
}

TEST(Envs, ValueIterationHandlesStochasticBranches) {
  // every step pays 0.5 in expectation and never ends
  const Eigen::VectorXd v = tessac::optimal_values(coin_env(), 0.9);
  EXPECT_NEAR(v(0), 0.5 / (1.0 - 0.9), 1e-9);
}

TEST(Envs, MalformedTableRejected) {
  tessac::EnvSpec spec{2, 2, 10, "bad"};
  TabularEnv::Table table(2, std::vector<std::vector<tessac::Outcome>>(2, {{0.7, 0, 0.0, false}}));
  EXPECT_THROW(TabularEnv(spec, 0, table), std::invalid_argument);
}

}  // namespace
