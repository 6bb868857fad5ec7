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

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "distredge/ddpg.hpp"

namespace distredge::testing {

using MatrixD = MatrixX<double>;
using VectorD = VectorX<double>;

// Relative error with a floor so that two vanishing gradients compare equal.
inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// Parameter indices to probe: `per_layer` random weights and biases of every
// layer, so that deep and shallow layers are both covered.
inline std::vector<Eigen::Index> probe_indices(const Mlp<double>& net, int per_layer, Rng& rng) {
  std::vector<Eigen::Index> out;
  Eigen::Index offset = 0;
  for (int l = 0; l < net.layer_count(); ++l) {
    const Eigen::Index weights = static_cast<Eigen::Index>(net.dims()[l]) * net.dims()[l + 1];
    const Eigen::Index biases = net.dims()[l + 1];
    for (int k = 0; k < per_layer; ++k) {
      out.push_back(offset + static_cast<Eigen::Index>(rng.below(weights)));
      out.push_back(offset + weights + static_cast<Eigen::Index>(rng.below(biases)));
    }
    offset += weights + biases;
  }
  return out;
}

// ReLU on/off pattern of every hidden unit for a batch input.
inline std::vector<bool> relu_pattern(const Mlp<double>& net, const MatrixD& input) {
  Mlp<double>::Cache cache;
  net.forward(input, cache);
  std::vector<bool> out;
  for (int l = 0; l + 1 < net.layer_count(); ++l) {
    for (Eigen::Index i = 0; i < cache.pre[l].size(); ++i) out.push_back(cache.pre[l].data()[i] > 0);
  }
  return out;
}

struct FdProbe {
  double loss = 0.0;
  std::vector<bool> pattern;  // activation pattern at the probed point
};

struct FdResult {
  double max_error = 0.0;
  int checked = 0;
  int kinks = 0;  // probes whose +h/-h points straddle a ReLU kink
};

// Largest relative error between `grads` and central differences of `loss`.
// A central difference across a ReLU kink does not estimate the derivative,
// so probes whose activation pattern differs between the two points are
// counted and excluded.
inline FdResult fd_check(Mlp<double>& net, const VectorD& grads,
                         const std::function<FdProbe()>& loss,
                         const std::vector<Eigen::Index>& probes, double h = 1e-5) {
  FdResult result;
  for (Eigen::Index k : probes) {
    const double p = net.params()[k];
    net.params()[k] = p + h;
    const FdProbe up = loss();
    net.params()[k] = p - h;
    const FdProbe down = loss();
    net.params()[k] = p;
    if (up.pattern != down.pattern) {
      ++result.kinks;
      continue;
    }
    ++result.checked;
    result.max_error =
        std::max(result.max_error, relative_error((up.loss - down.loss) / (2.0 * h), grads[k]));
  }
  return result;
}

struct GradCheckResult {
  FdResult critic;
  FdResult actor;
  double max_error() const { return std::max(critic.max_error, actor.max_error); }
};

inline MatrixD stack(const MatrixD& top, const MatrixD& bottom) {
  MatrixD out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

// Builds a random actor/critic pair with the given hidden widths and checks
// both the critic loss gradient and the policy gradient on a random batch.
inline GradCheckResult gradient_check(int state_dim, int action_dim,
                                      const std::vector<int>& actor_hidden,
                                      const std::vector<int>& critic_hidden, Rng& rng,
                                      int batch = 4, int per_layer = 20) {
  std::vector<int> actor_dims{state_dim};
  actor_dims.insert(actor_dims.end(), actor_hidden.begin(), actor_hidden.end());
  actor_dims.push_back(action_dim);
  std::vector<int> critic_dims{state_dim + action_dim};
  critic_dims.insert(critic_dims.end(), critic_hidden.begin(), critic_hidden.end());
  critic_dims.push_back(1);
  Mlp<double> actor(actor_dims, OutputActivation::kTanh);
  Mlp<double> critic(critic_dims, OutputActivation::kIdentity);
  // A wide final layer keeps the tanh away from saturation-only gradients.
  actor.initialize(rng, 0.5);
  critic.initialize(rng, 0.5);

  MatrixD states(state_dim, batch);
  MatrixD actions(action_dim, batch);
  VectorD targets(batch);
  for (Eigen::Index i = 0; i < states.size(); ++i) states.data()[i] = rng.uniform(-1.0, 1.0);
  for (Eigen::Index i = 0; i < actions.size(); ++i) actions.data()[i] = rng.uniform(-1.0, 1.0);
  for (Eigen::Index i = 0; i < batch; ++i) targets[i] = rng.uniform(-1.0, 1.0);

  GradCheckResult result;
  VectorD scratch;
  VectorD critic_grads;
  critic_loss_gradients(critic, states, actions, targets, critic_grads);
  result.critic = fd_check(
      critic, critic_grads,
      [&] {
        scratch.resize(0);
        return FdProbe{critic_loss_gradients(critic, states, actions, targets, scratch),
                       relu_pattern(critic, stack(states, actions))};
      },
      probe_indices(critic, per_layer, rng));

  VectorD actor_grads;
  actor_objective_gradients(actor, critic, states, actor_grads);
  result.actor = fd_check(
      actor, actor_grads,
      [&] {
        scratch.resize(0);
        FdProbe probe{actor_objective_gradients(actor, critic, states, scratch),
                      relu_pattern(actor, states)};
        const auto inner = relu_pattern(critic, stack(states, actor.forward(states)));
        probe.pattern.insert(probe.pattern.end(), inner.begin(), inner.end());
        return probe;
      },
      probe_indices(actor, per_layer, rng));
  return result;
}

}  // namespace distredge::testing
