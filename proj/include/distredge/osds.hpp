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
#include <optional>
#include <vector>

#include "distredge/ddpg.hpp"
#include "distredge/latency_sim.hpp"

namespace distredge {

// Maps a raw actor output in [-1, 1]^(|D|-1) to cut points on a volume of
// height `height`: sort ascending, then x = round(H * (a + 1) / 2).
SplitDecision map_action(std::span<const Real> raw, int height);

// Terminal-only reward: 0 before the last volume, 1/T (T in ms) at it.
// `step` and `volume_count` are 1-based like the volumes they index.
double reward(int step, int volume_count, std::optional<double> end_to_end_ms);

// max(0, 1 - (episode * delta)^2)
double exploration_epsilon(int episode, double delta_epsilon);

// The splitting MDP over a fixed environment and partition scheme.
class SplitEnvironment {
 public:
  SplitEnvironment(const Environment& env, PartitionScheme scheme);

  const Environment& env() const { return env_; }
  const PartitionScheme& scheme() const { return scheme_; }
  const std::vector<LayerVolume>& volumes() const { return volumes_; }
  int volume_count() const { return static_cast<int>(volumes_.size()); }
  int device_count() const { return env_.devices.size(); }
  int state_dim() const { return device_count() + 4; }
  // At least 1 so a single-provider agent still has well-formed networks.
  int action_dim() const { return std::max(1, device_count() - 1); }
  double latency_scale() const { return latency_scale_; }

  // (T_{l-1} / scale, H, C, F, S of the volume's last layer / model maxima).
  VectorX<Real> make_state(const AccumLatencies& prev, int volume) const;

  struct Step {
    AccumLatencies finish;
    std::vector<SplitPart> parts;
  };
  Step step(const AccumLatencies& prev, int volume, const SplitDecision& decision,
            std::span<const SplitPart> producers) const;

  double end_to_end(const AccumLatencies& last, std::span<const SplitPart> last_parts,
                    int tail_device) const;

  // Greedy rollout of `actor` (no exploration noise).
  StrategyPlan rollout(const Mlp<Real>& actor, double* end_to_end_ms = nullptr) const;

 private:
  const Environment& env_;
  PartitionScheme scheme_;
  std::vector<LayerVolume> volumes_;
  double latency_scale_ = 1.0;
  double max_height_ = 1.0;
  double max_depth_ = 1.0;
  double max_filter_ = 1.0;
  double max_stride_ = 1.0;
};

struct TraceRow {
  int episode = 0;
  double epsilon = 0.0;
  double end_to_end_ms = 0.0;
  double best_ms = 0.0;
};

struct OsdsResult {
  StrategyPlan best_plan;
  double best_ms = 0.0;
  int best_episode = 0;
  Mlp<Real> best_actor;
  Mlp<Real> best_critic;
  std::vector<TraceRow> trace;
  // Decision sequence realized in every episode, kept only when requested.
  std::vector<std::vector<SplitDecision>> episode_decisions;
};

struct OsdsOptions {
  Hyperparams hyper;
  std::uint64_t seed = 0;
  bool keep_episode_decisions = false;
};

OsdsResult osds_train(const Environment& env, const PartitionScheme& scheme,
                      const OsdsOptions& options);

// Single greedy rollout of a trained actor. Throws DimensionMismatch when the
// actor was trained for a different device count.
StrategyPlan infer_split(const Mlp<Real>& actor, const Environment& env,
                         const PartitionScheme& scheme, double* end_to_end_ms = nullptr);

// Continues training from trained networks on a (possibly changed)
// environment with a fresh, shortened exploration schedule. The best plan
// starts from the greedy rollout (and `prior` when given).
OsdsResult finetune(const Mlp<Real>& actor, const Mlp<Real>& critic, const Environment& env,
                    const PartitionScheme& scheme, int episodes, const OsdsOptions& options,
                    const std::vector<SplitDecision>* prior = nullptr);

}  // namespace distredge
