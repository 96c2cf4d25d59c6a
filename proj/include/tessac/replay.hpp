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

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tessac/mlp.hpp"

namespace tessac {

/// One (s, a, r, s', done) experience tuple.
template <typename Scalar = double>
struct Transition {
  Vector<Scalar> s;
  int a = 0;
  Scalar r = 0;
  Vector<Scalar> s_next;
  bool done = false;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Transitions stacked column-wise for batched network evaluation.
template <typename Scalar = double>
struct Batch {
  Matrix<Scalar> states;       // obs_dim x n
  std::vector<int> actions;    // n
  Vector<Scalar> rewards;      // n
  Matrix<Scalar> next_states;  // obs_dim x n
  Vector<Scalar> not_done;     // n, 0 where the episode terminated

  Eigen::Index size() const { return rewards.size(); }
};

template <typename Scalar>
Batch<Scalar> make_batch(std::span<const Transition<Scalar>> items) {
  if (items.empty()) throw ShapeError("make_batch: empty transition list");
  const auto n = static_cast<Eigen::Index>(items.size());
  const auto dim = items.front().s.size();
  Batch<Scalar> batch;
  batch.states.resize(dim, n);
  batch.next_states.resize(dim, n);
  batch.rewards.resize(n);
  batch.not_done.resize(n);
  batch.actions.resize(items.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& t = items[static_cast<std::size_t>(j)];
    if (t.s.size() != dim || t.s_next.size() != dim) {
      throw ShapeError("make_batch: observation lengths differ within batch");
    }
    batch.states.col(j) = t.s;
    batch.next_states.col(j) = t.s_next;
    batch.actions[static_cast<std::size_t>(j)] = t.a;
    batch.rewards(j) = t.r;
    batch.not_done(j) = t.done ? Scalar(0) : Scalar(1);
  }
  return batch;
}

template <typename Scalar>
Batch<Scalar> make_batch(const std::vector<Transition<Scalar>>& items) {
  return make_batch(std::span<const Transition<Scalar>>(items));
}

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-capacity ring of transitions with seeded uniform sampling (with replacement).
template <typename Scalar = double>
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int observation_dim, int action_count, std::uint64_t seed)
      : capacity_(capacity),
        observation_dim_(observation_dim),
        action_count_(action_count),
        rng_(seed) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    storage_.reserve(capacity);
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return storage_.size(); }
  bool empty() const { return storage_.empty(); }

  void push(Transition<Scalar> t) {
    if (t.s.size() != observation_dim_ || t.s_next.size() != observation_dim_) {
      throw ShapeError("ReplayBuffer::push: observation length " + std::to_string(t.s.size()) +
                       " does not match " + std::to_string(observation_dim_));
    }
    if (t.a < 0 || t.a >= action_count_) {
      throw ShapeError("ReplayBuffer::push: action " + std::to_string(t.a) + " out of range");
    }
    if (storage_.size() < capacity_) {
      storage_.push_back(std::move(t));
    } else {
      storage_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
  }

  std::vector<Transition<Scalar>> sample(std::size_t batch_size) {
    std::vector<Transition<Scalar>> out;
    out.reserve(batch_size);
    for (std::size_t idx : sample_indices(batch_size)) out.push_back(storage_[idx]);
    return out;
  }

  /// Same draw as sample(), stacked directly into a Batch.
  Batch<Scalar> sample_batch(std::size_t batch_size) {
    const auto indices = sample_indices(batch_size);
    const auto n = static_cast<Eigen::Index>(batch_size);
    Batch<Scalar> batch;
    batch.states.resize(observation_dim_, n);
    batch.next_states.resize(observation_dim_, n);
    batch.rewards.resize(n);
    batch.not_done.resize(n);
    batch.actions.resize(batch_size);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& t = storage_[indices[static_cast<std::size_t>(j)]];
      batch.states.col(j) = t.s;
      batch.next_states.col(j) = t.s_next;
      batch.actions[static_cast<std::size_t>(j)] = t.a;
      batch.rewards(j) = t.r;
      batch.not_done(j) = t.done ? Scalar(0) : Scalar(1);
    }
    return batch;
  }

  /// Stored entries, oldest first.
  std::vector<Transition<Scalar>> contents() const {
    std::vector<Transition<Scalar>> out;
    out.reserve(storage_.size());
    const std::size_t start = storage_.size() < capacity_ ? 0 : next_;
    for (std::size_t i = 0; i < storage_.size(); ++i) {
      out.push_back(storage_[(start + i) % storage_.size()]);
    }
    return out;
  }

 private:
  std::vector<std::size_t> sample_indices(std::size_t batch_size) {
    if (storage_.empty()) {
      throw InsufficientDataError("ReplayBuffer::sample: buffer is empty, requested " +
                                  std::to_string(batch_size) + " transitions");
    }
    std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
    std::vector<std::size_t> indices(batch_size);
    for (auto& idx : indices) idx = pick(rng_);
    return indices;
  }

  std::size_t capacity_;
  Eigen::Index observation_dim_;
  int action_count_;
  std::mt19937_64 rng_;
  std::vector<Transition<Scalar>> storage_;
  std::size_t next_ = 0;
};

}  // namespace tessac
