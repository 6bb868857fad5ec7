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

#include <cstdint>
#include <filesystem>
#include <unordered_set>
#include <vector>

#include "distredge/mlp.hpp"
#include "json.hpp"

namespace distredge {

// Scalar type used by the trainer.
using Real = float;

struct Hyperparams {
  int max_episodes = 4000;
  double delta_epsilon = 1.0 / 250.0;
  double noise_variance = 0.1;
  int batch_size = 64;
  double gamma = 0.99;
  double lr_actor = 1e-4;
  double lr_critic = 1e-3;
  double tau = 0.005;
  int buffer_capacity = 100000;
  std::vector<int> actor_hidden{400, 200, 100};
  std::vector<int> critic_hidden{400, 200, 100, 100};

  void validate() const;
};

Hyperparams parse_hyperparams(const nlohmann::json& doc, Hyperparams base = {});
nlohmann::json hyperparams_to_json(const Hyperparams& h);

// Fixed-capacity FIFO of transitions stored column-wise.
template <typename Scalar>
class ReplayBuffer {
 public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  struct Batch {
    Matrix states;
    Matrix actions;
    Vector rewards;
    Matrix next_states;
    Vector terminal;  // 1 for terminal transitions
  };

  ReplayBuffer(int capacity, int state_dim, int action_dim)
      : capacity_(capacity),
        states_(state_dim, capacity),
        actions_(action_dim, capacity),
        rewards_(capacity),
        next_states_(state_dim, capacity),
        terminal_(capacity) {
    if (capacity < 1) throw Error(ErrorCode::kInvalidArgument, "buffer capacity must be >= 1");
  }

  int capacity() const { return capacity_; }
  int size() const { return size_; }

  void push(const Vector& state, const Vector& action, Scalar reward, const Vector& next_state,
            bool terminal) {
    if (state.size() != states_.rows() || next_state.size() != states_.rows() ||
        action.size() != actions_.rows()) {
      throw Error(ErrorCode::kDimensionMismatch, "transition does not match buffer dims");
    }
    states_.col(head_) = state;
    actions_.col(head_) = action;
    rewards_[head_] = reward;
    next_states_.col(head_) = next_state;
    terminal_[head_] = terminal ? Scalar(1) : Scalar(0);
    head_ = (head_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
  }

  // Slot of the i-th oldest stored transition.
  int slot(int i) const { return size_ < capacity_ ? i : (head_ + i) % capacity_; }

  // Uniform indices (0 = oldest): with replacement while the buffer holds
  // fewer than `count` transitions, otherwise without replacement.
  std::vector<int> sample_indices(int count, Rng& rng) const {
    if (size_ == 0) throw Error(ErrorCode::kEmptyBuffer, "cannot sample an empty buffer");
    std::vector<int> out;
    out.reserve(count);
    if (size_ < count) {
      for (int i = 0; i < count; ++i) out.push_back(static_cast<int>(rng.below(size_)));
      return out;
    }
    // Floyd's algorithm.
    std::unordered_set<int> chosen;
    for (int j = size_ - count; j < size_; ++j) {
      const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
      const int pick = chosen.insert(t).second ? t : j;
      if (pick == j) chosen.insert(j);
      out.push_back(pick);
    }
    return out;
  }

  Batch gather(const std::vector<int>& indices) const {
    const auto n = static_cast<Eigen::Index>(indices.size());
    Batch b{Matrix(states_.rows(), n), Matrix(actions_.rows(), n), Vector(n),
            Matrix(states_.rows(), n), Vector(n)};
    for (Eigen::Index k = 0; k < n; ++k) {
      const int s = slot(indices[k]);
      b.states.col(k) = states_.col(s);
      b.actions.col(k) = actions_.col(s);
      b.rewards[k] = rewards_[s];
      b.next_states.col(k) = next_states_.col(s);
      b.terminal[k] = terminal_[s];
    }
    return b;
  }

  Batch sample(int count, Rng& rng) const { return gather(sample_indices(count, rng)); }

  Vector action_at(int i) const { return actions_.col(slot(i)); }

 private:
  int capacity_;
  int size_ = 0;
  int head_ = 0;
  Matrix states_;
  Matrix actions_;
  Vector rewards_;
  Matrix next_states_;
  Vector terminal_;
};

// Mean squared critic loss against fixed targets; gradients are accumulated
// into `grads`. Returns the loss.
template <typename Scalar>
double critic_loss_gradients(const Mlp<Scalar>& critic, const MatrixX<Scalar>& states,
                             const MatrixX<Scalar>& actions, const VectorX<Scalar>& targets,
                             VectorX<Scalar>& grads) {
  MatrixX<Scalar> input(states.rows() + actions.rows(), states.cols());
  input << states, actions;
  typename Mlp<Scalar>::Cache cache;
  const auto& q = critic.forward(input, cache);
  const auto batch = static_cast<Scalar>(states.cols());
  MatrixX<Scalar> diff = q - targets.transpose();
  critic.backward(cache, (Scalar(2) / batch) * diff, grads);
  return static_cast<double>(diff.squaredNorm()) / static_cast<double>(states.cols());
}

// Gradient of -mean_i Critic(s_i, Actor(s_i)) with respect to the actor
// parameters (deterministic policy gradient). Returns the objective value.
template <typename Scalar>
double actor_objective_gradients(const Mlp<Scalar>& actor, const Mlp<Scalar>& critic,
                                 const MatrixX<Scalar>& states, VectorX<Scalar>& grads) {
  typename Mlp<Scalar>::Cache actor_cache;
  const auto& actions = actor.forward(states, actor_cache);
  MatrixX<Scalar> input(states.rows() + actions.rows(), states.cols());
  input << states, actions;
  typename Mlp<Scalar>::Cache critic_cache;
  const auto& q = critic.forward(input, critic_cache);
  const auto batch = static_cast<Scalar>(states.cols());
  MatrixX<Scalar> dq = MatrixX<Scalar>::Constant(1, states.cols(), Scalar(-1) / batch);
  MatrixX<Scalar> dinput;
  VectorX<Scalar> unused;
  critic.backward(critic_cache, dq, unused, &dinput, /*want_param_grad=*/false);
  actor.backward(actor_cache, dinput.bottomRows(actions.rows()), grads);
  return -static_cast<double>(q.sum()) / static_cast<double>(states.cols());
}

// Actor, critic, their targets and optimizer state.
class DdpgAgent {
 public:
  using Matrix = MatrixX<Real>;
  using Vector = VectorX<Real>;

  DdpgAgent(int state_dim, int action_dim, const Hyperparams& hyper, std::uint64_t seed);
  // Resumes from trained networks; targets start as copies.
  DdpgAgent(Mlp<Real> actor, Mlp<Real> critic, const Hyperparams& hyper);

  const Mlp<Real>& actor() const { return actor_; }
  const Mlp<Real>& critic() const { return critic_; }
  const Mlp<Real>& actor_target() const { return actor_target_; }
  const Mlp<Real>& critic_target() const { return critic_target_; }

  Vector act(const Vector& state) const;

  // One critic and one actor step from `batch`, then target soft updates.
  void update(const ReplayBuffer<Real>::Batch& batch);

 private:
  Hyperparams hyper_;
  Mlp<Real> actor_;
  Mlp<Real> critic_;
  Mlp<Real> actor_target_;
  Mlp<Real> critic_target_;
  AdamState<Real> actor_adam_;
  AdamState<Real> critic_adam_;
};

Mlp<Real> make_actor(int state_dim, int action_dim, const std::vector<int>& hidden);
Mlp<Real> make_critic(int state_dim, int action_dim, const std::vector<int>& hidden);

// Versioned checkpoint documents; values round-trip exactly.
nlohmann::json mlp_to_json(const Mlp<Real>& net);
Mlp<Real> mlp_from_json(const nlohmann::json& doc);
void save_checkpoint(const std::filesystem::path& path, const Mlp<Real>& actor,
                     const Mlp<Real>& critic);
std::pair<Mlp<Real>, Mlp<Real>> load_checkpoint(const std::filesystem::path& path);

}  // namespace distredge
