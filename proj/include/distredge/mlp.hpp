/* Copyright 2026 The DistrEdge Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "distredge/error.hpp"
#include "distredge/rng.hpp"

namespace distredge {

enum class OutputActivation { kTanh, kIdentity };

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Fully connected network with ReLU hidden layers. Parameters live in one
// flat vector (per layer: weights column-major out x in, then biases) so the
// optimizer, target updates and checkpoints work on a single array.
// Batches are column-major: one sample per column.
template <typename Scalar>
class Mlp {
 public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;
  using WeightMap = Eigen::Map<Matrix>;
  using ConstWeightMap = Eigen::Map<const Matrix>;
  using BiasMap = Eigen::Map<Vector>;
  using ConstBiasMap = Eigen::Map<const Vector>;

  // Activations of one forward pass, kept for the backward pass.
  struct Cache {
    std::vector<Matrix> inputs;  // input of each layer
    std::vector<Matrix> pre;     // pre-activation of each layer
    Matrix output;
  };

  Mlp() = default;

  Mlp(std::vector<int> dims, OutputActivation output) : dims_(std::move(dims)), output_(output) {
    if (dims_.size() < 2) throw Error(ErrorCode::kDimensionMismatch, "need >= 2 layer dims");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      if (dims_[l] < 1 || dims_[l + 1] < 1) {
        throw Error(ErrorCode::kDimensionMismatch, "layer dims must be positive");
      }
      offsets_.push_back(total);
      total += static_cast<std::size_t>(dims_[l]) * dims_[l + 1] + dims_[l + 1];
    }
    params_ = Vector::Zero(static_cast<Eigen::Index>(total));
  }

  // Fan-in uniform initialization; the output layer uses +-final_range.
  void initialize(Rng& rng, double final_range = 3e-3) {
    for (int l = 0; l < layer_count(); ++l) {
      const double r = l + 1 == layer_count() ? final_range : 1.0 / std::sqrt(dims_[l]);
      auto w = weight(l);
      for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = static_cast<Scalar>(rng.uniform(-r, r));
      auto b = bias(l);
      for (Eigen::Index k = 0; k < b.size(); ++k) b[k] = static_cast<Scalar>(rng.uniform(-r, r));
    }
  }

  const std::vector<int>& dims() const { return dims_; }
  OutputActivation output_activation() const { return output_; }
  int layer_count() const { return static_cast<int>(dims_.size()) - 1; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }

  Vector& params() { return params_; }
  const Vector& params() const { return params_; }

  WeightMap weight(int l) {
    return WeightMap(params_.data() + offsets_[l], dims_[l + 1], dims_[l]);
  }
  ConstWeightMap weight(int l) const {
    return ConstWeightMap(params_.data() + offsets_[l], dims_[l + 1], dims_[l]);
  }
  BiasMap bias(int l) {
    return BiasMap(params_.data() + offsets_[l] + dims_[l] * dims_[l + 1], dims_[l + 1]);
  }
  ConstBiasMap bias(int l) const {
    return ConstBiasMap(params_.data() + offsets_[l] + dims_[l] * dims_[l + 1], dims_[l + 1]);
  }

  Matrix forward(const Matrix& input) const {
    Cache cache;
    return forward(input, cache);
  }

  const Matrix& forward(const Matrix& input, Cache& cache) const {
    if (input.rows() != input_dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "input has " + std::to_string(input.rows()) + " rows, network expects " +
                      std::to_string(input_dim()));
    }
    cache.inputs.resize(layer_count());
    cache.pre.resize(layer_count());
    Matrix x = input;
    for (int l = 0; l < layer_count(); ++l) {
      cache.inputs[l] = std::move(x);
      Matrix z = weight(l) * cache.inputs[l];
      z.colwise() += bias(l);
      cache.pre[l] = z;
      if (l + 1 < layer_count()) {
        x = z.cwiseMax(Scalar(0));
      } else if (output_ == OutputActivation::kTanh) {
        x = z.array().tanh().matrix();
      } else {
        x = std::move(z);
      }
    }
    cache.output = std::move(x);
    return cache.output;
  }

  // Reverse pass. `output_grad` is dLoss/dOutput for the cached batch (any
  // batch averaging is already folded in). Gradients are accumulated into
  // `param_grad` (resized and zeroed when empty); the input gradient is
  // written to `input_grad` when non-null.
  void backward(const Cache& cache, const Matrix& output_grad, Vector& param_grad,
                Matrix* input_grad = nullptr, bool want_param_grad = true) const {
    if (want_param_grad && param_grad.size() != params_.size()) {
      param_grad = Vector::Zero(params_.size());
    }
    Matrix delta;
    if (output_ == OutputActivation::kTanh) {
      delta = output_grad.cwiseProduct(
          (Scalar(1) - cache.output.array().square()).matrix());
    } else {
      delta = output_grad;
    }
    for (int l = layer_count() - 1; l >= 0; --l) {
      if (want_param_grad) {
        Eigen::Map<Matrix> gw(param_grad.data() + offsets_[l], dims_[l + 1], dims_[l]);
        Eigen::Map<Vector> gb(param_grad.data() + offsets_[l] + dims_[l] * dims_[l + 1],
                              dims_[l + 1]);
        gw.noalias() += delta * cache.inputs[l].transpose();
        gb += delta.rowwise().sum();
      }
      if (l == 0 && input_grad == nullptr) break;
      Matrix upstream = weight(l).transpose() * delta;
      if (l == 0) {
        *input_grad = std::move(upstream);
        break;
      }
      delta = upstream.cwiseProduct(
          (cache.pre[l - 1].array() > Scalar(0)).template cast<Scalar>().matrix());
    }
  }

  template <typename Other>
  Mlp<Other> cast() const {
    Mlp<Other> out(dims_, output_);
    out.params() = params_.template cast<Other>();
    return out;
  }

  friend bool operator==(const Mlp& a, const Mlp& b) {
    return a.dims_ == b.dims_ && a.output_ == b.output_ && a.params_ == b.params_;
  }

 private:
  std::vector<int> dims_;
  OutputActivation output_ = OutputActivation::kIdentity;
  std::vector<std::size_t> offsets_;
  Vector params_;
};

// Adaptive moment estimation state for one flat parameter vector.
template <typename Scalar>
struct AdamState {
  VectorX<Scalar> m;
  VectorX<Scalar> v;
  std::int64_t step = 0;
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename Scalar>
void adam_step(VectorX<Scalar>& params, const VectorX<Scalar>& grads, AdamState<Scalar>& state,
               double lr, const AdamConfig& config = {}) {
  if (grads.size() != params.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "gradient and parameter sizes differ");
  }
  if (state.m.size() != params.size()) {
    state.m = VectorX<Scalar>::Zero(params.size());
    state.v = VectorX<Scalar>::Zero(params.size());
    state.step = 0;
  }
  ++state.step;
  const auto b1 = static_cast<Scalar>(config.beta1);
  const auto b2 = static_cast<Scalar>(config.beta2);
  state.m = b1 * state.m + (Scalar(1) - b1) * grads;
  state.v = b2 * state.v + (Scalar(1) - b2) * grads.cwiseProduct(grads);
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  const auto step_size = static_cast<Scalar>(lr / c1);
  const auto eps = static_cast<Scalar>(config.epsilon);
  const auto inv_c2 = static_cast<Scalar>(1.0 / c2);
  params.array() -= step_size * state.m.array() / ((state.v.array() * inv_c2).sqrt() + eps);
}

// target <- tau * online + (1 - tau) * target
template <typename Scalar>
void soft_update(Mlp<Scalar>& target, const Mlp<Scalar>& online, double tau) {
  if (target.dims() != online.dims()) {
    throw Error(ErrorCode::kDimensionMismatch, "soft update between different shapes");
  }
  const auto t = static_cast<Scalar>(tau);
  target.params() = t * online.params() + (Scalar(1) - t) * target.params();
}

// I.i.d. N(0, variance) samples.
template <typename Scalar>
VectorX<Scalar> gaussian_noise(int dim, double variance, Rng& rng) {
  VectorX<Scalar> out(dim);
  const double sigma = std::sqrt(std::max(variance, 0.0));
  for (int i = 0; i < dim; ++i) out[i] = static_cast<Scalar>(sigma == 0.0 ? 0.0 : sigma * rng.normal());
  return out;
}

}  // namespace distredge
