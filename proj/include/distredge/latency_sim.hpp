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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "distredge/model.hpp"
#include "distredge/profiles.hpp"
#include "distredge/vsl.hpp"

namespace distredge {

// The static inputs every planner and the simulator share.
struct Environment {
  ModelDesc model;
  DeviceSet devices;
};

// Full distribution strategy: scheme, one decision per volume, and the device
// that receives the final feature map.
struct StrategyPlan {
  PartitionScheme scheme;
  std::vector<SplitDecision> decisions;
  int tail_device = 0;
};

// Per-device finish time (ms) after a volume.
using AccumLatencies = std::vector<double>;

struct StepResult {
  AccumLatencies ready;   // when each device had all inputs (prev if idle)
  AccumLatencies finish;  // T_l
  std::vector<double> compute_ms;
  // Transfer time per (sender, receiver) pair; sender -1 is the requester.
  std::map<std::pair<int, int>, double> transfer_ms;
};

// Advances the accumulated latencies through one volume. `producers` are the
// previous volume's parts; empty means the requester scatters the input.
StepResult step_volume(const Environment& env, const AccumLatencies& prev,
                       const LayerVolume& volume, std::span<const SplitPart> parts,
                       std::span<const SplitPart> producers);

struct LatencyBreakdown {
  std::vector<double> compute_ms;                        // per device
  std::map<std::pair<int, int>, double> transfer_ms;     // per link
  double max_compute_ms = 0.0;
  double max_transfer_ms = 0.0;
};

struct LatencyReport {
  std::vector<AccumLatencies> ready;
  std::vector<AccumLatencies> per_volume;
  double end_to_end_ms = 0.0;
  double ips = 0.0;
  LatencyBreakdown breakdown;
};

// Throws InvalidPlan when the plan does not fit the environment.
void validate_plan(const Environment& env, const StrategyPlan& plan);

LatencyReport simulate(const Environment& env, const StrategyPlan& plan);

// Arrival time of the final feature map at the tail device.
double gather_latency(const Environment& env, const AccumLatencies& last,
                      std::span<const SplitPart> last_parts, const LayerVolume& last_volume,
                      int tail_device);

inline double throughput_ips(double end_to_end_ms) { return 1000.0 / end_to_end_ms; }

// Device with the most rows of the final volume; ties go to the lowest index.
int assign_tail(const SplitDecision& last_decision, int last_height);

}  // namespace distredge
