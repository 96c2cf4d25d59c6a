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
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tessac {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Raised when an input, gradient, or batch does not match a network's shape.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation would consume or produce non-finite numbers.
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A gradient is a flat vector aligned index-for-index with Mlp::params().
template <typename Scalar>
using Gradient = Vector<Scalar>;

/**
 * Dense feed-forward network: ReLU on hidden layers, identity on the output.
 *
 * All parameters live in one flat vector. The first weight_count() entries are
 * the weight matrices of every layer (each column-major, out x in), followed by
 * bias_count() bias entries. Inputs are column vectors; batched calls take one
 * sample per column.
 */
template <typename Scalar = double>
class Mlp {
 public:
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;

  Mlp() = default;

  /// Network with all parameters zero.
  explicit Mlp(std::vector<int> layer_sizes) : layer_sizes_(std::move(layer_sizes)) {
    if (layer_sizes_.size() < 2) {
      throw ShapeError("Mlp needs at least an input and an output layer");
    }
    Eigen::Index weights = 0;
    Eigen::Index biases = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
      if (layer_sizes_[l] <= 0 || layer_sizes_[l + 1] <= 0) {
        throw ShapeError("Mlp layer sizes must be positive");
      }
      weight_offsets_.push_back(weights);
      weights += Eigen::Index{layer_sizes_[l]} * layer_sizes_[l + 1];
    }
    for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
      bias_offsets_.push_back(weights + biases);
      biases += layer_sizes_[l + 1];
    }
    weight_count_ = weights;
    params_ = VectorType::Zero(weights + biases);
  }

  /// He-style uniform fan-in initialization; biases start at zero.
  static Mlp random(std::vector<int> layer_sizes, std::uint64_t seed) {
    Mlp net(std::move(layer_sizes));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int l = 0; l < net.num_layers(); ++l) {
      const double bound = std::sqrt(6.0 / net.layer_sizes_[l]);
      auto w = net.weight(l);
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
          w(i, j) = static_cast<Scalar>(bound * unit(rng));
        }
      }
    }
    return net;
  }

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  int num_layers() const { return static_cast<int>(layer_sizes_.size()) - 1; }
  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }

  Eigen::Index weight_count() const { return weight_count_; }
  Eigen::Index bias_count() const { return params_.size() - weight_count_; }

  const VectorType& params() const { return params_; }
  VectorType& params() { return params_; }

  auto weights() const { return params_.head(weight_count_); }
  auto biases() const { return params_.tail(bias_count()); }

  Eigen::Map<MatrixType> weight(int layer) {
    return {params_.data() + weight_offsets_[layer], layer_sizes_[layer + 1], layer_sizes_[layer]};
  }
  Eigen::Map<const MatrixType> weight(int layer) const {
    return {params_.data() + weight_offsets_[layer], layer_sizes_[layer + 1], layer_sizes_[layer]};
  }
  Eigen::Map<VectorType> bias(int layer) {
    return {params_.data() + bias_offsets_[layer], layer_sizes_[layer + 1]};
  }
  Eigen::Map<const VectorType> bias(int layer) const {
    return {params_.data() + bias_offsets_[layer], layer_sizes_[layer + 1]};
  }

  VectorType forward(const VectorType& input) const {
    return forward_batch(input);
  }

  /// Column-wise forward pass over a batch (input_size x batch).
  MatrixType forward_batch(const MatrixType& inputs) const {
    check_input(inputs);
    MatrixType h = inputs;
    for (int l = 0; l < num_layers(); ++l) {
      MatrixType z = weight(l) * h;
      z.colwise() += bias(l);
      if (l + 1 < num_layers()) z = z.cwiseMax(Scalar(0));
      h = std::move(z);
    }
    return h;
  }

  /// Gradient of output_grad . forward(input) with respect to params().
  Gradient<Scalar> backward(const VectorType& input, const VectorType& output_grad) const {
    return backward_batch(input, output_grad);
  }

  /// Activations of one batched forward pass, reusable by backward_batch.
  struct Tape {
    std::vector<MatrixType> activations;  // input first, network output last

    const MatrixType& output() const { return activations.back(); }
  };

  Tape record(const MatrixType& inputs) const {
    check_input(inputs);
    Tape tape;
    tape.activations.reserve(layer_sizes_.size());
    tape.activations.push_back(inputs);
    for (int l = 0; l < num_layers(); ++l) {
      MatrixType z = weight(l) * tape.activations.back();
      z.colwise() += bias(l);
      if (l + 1 < num_layers()) z = z.cwiseMax(Scalar(0));
      tape.activations.push_back(std::move(z));
    }
    return tape;
  }

  /// Gradient of sum_j output_grads.col(j) . forward(inputs.col(j)).
  Gradient<Scalar> backward_batch(const MatrixType& inputs, const MatrixType& output_grads) const {
    return backward_batch(record(inputs), output_grads);
  }

  Gradient<Scalar> backward_batch(const Tape& tape, const MatrixType& output_grads) const {
    const auto& acts = tape.activations;
    if (static_cast<int>(acts.size()) != num_layers() + 1 || acts.front().rows() != input_size()) {
      throw ShapeError("Mlp::backward: tape was not recorded by a network of this shape");
    }
    const Eigen::Index batch = acts.front().cols();
    if (output_grads.rows() != output_size() || output_grads.cols() != batch) {
      throw ShapeError("Mlp::backward: output gradient is " + shape_of(output_grads) +
                       ", expected " + std::to_string(output_size()) + "x" + std::to_string(batch));
    }
    Gradient<Scalar> grad(params_.size());
    MatrixType delta = output_grads;
    for (int l = num_layers() - 1; l >= 0; --l) {
      Eigen::Map<MatrixType> gw(grad.data() + weight_offsets_[l], layer_sizes_[l + 1], layer_sizes_[l]);
      gw.noalias() = delta * acts[l].transpose();
      grad.segment(bias_offsets_[l], layer_sizes_[l + 1]) = delta.rowwise().sum();
      if (l > 0) {
        MatrixType upstream = weight(l).transpose() * delta;
        delta = (acts[l].array() > Scalar(0)).select(upstream, Scalar(0));
      }
    }
    return grad;
  }

  friend bool operator==(const Mlp& a, const Mlp& b) {
    return a.layer_sizes_ == b.layer_sizes_ && a.params_ == b.params_;
  }

 private:
  void check_input(const MatrixType& inputs) const {
    if (inputs.rows() != input_size()) {
      throw ShapeError("Mlp::forward: input has " + std::to_string(inputs.rows()) +
                       " rows, network expects " + std::to_string(input_size()));
    }
  }

  static std::string shape_of(const MatrixType& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
  }

  std::vector<int> layer_sizes_;
  std::vector<Eigen::Index> weight_offsets_;
  std::vector<Eigen::Index> bias_offsets_;
  Eigen::Index weight_count_ = 0;
  VectorType params_;
};

using MlpD = Mlp<double>;

}  // namespace tessac
