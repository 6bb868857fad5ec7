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
#include <span>
#include <vector>

#include "distredge/latency_sim.hpp"
#include "distredge/partitioner.hpp"

namespace distredge {

// Linear surrogate of each device and its links.
struct CapabilityModel {
  std::vector<double> mmac_per_ms;   // least-squares fit through the origin
  std::vector<double> inbound_mbps;  // mean throughput of links into each device
};

CapabilityModel fit_capabilities(const Environment& env);

// H rows in `device_count` near-equal ranges; remainder rows go to the
// lowest indices.
SplitDecision equal_split(int height, int device_count);

// Rows proportional to `weights` with largest-remainder rounding; ties go to
// the lowest index.
SplitDecision proportional_split(int height, std::span<const double> weights);

// Cuts that give every row of a volume to `device`.
SplitDecision single_device_split(int height, int device_count, int device);

StrategyPlan equal_split_plan(const Environment& env, const PartitionScheme& scheme);

// Rows proportional to fitted compute capability; with `link_aware` each
// device's per-row cost also includes shipping its input rows over its
// inbound links.
StrategyPlan linear_ratio_plan(const Environment& env, const PartitionScheme& scheme,
                               bool link_aware = false);

StrategyPlan layer_by_layer_plan(const Environment& env, bool link_aware = false);

// Whole model on the device with the lowest total compute latency.
StrategyPlan offload_plan(const Environment& env);

// End-to-end latency of the best single device running the unsplit model.
double offload_latency(const Environment& env);

struct BruteForceSplitResult {
  StrategyPlan plan;
  double end_to_end_ms = 0.0;
  std::uint64_t evaluated = 0;
};

// Candidate cut values at granularity g: 0, g, 2g, ... and H.
std::vector<int> cut_grid(int height, int granularity);

// Number of decision combinations brute_force_split would evaluate; saturates
// at UINT64_MAX.
std::uint64_t split_search_size(const Environment& env, const PartitionScheme& scheme,
                                int granularity);

inline constexpr std::uint64_t kDefaultSearchCap = 20'000'000;

// Exhaustive optimum over all decisions on the grid. Throws
// SearchSpaceTooLarge when the search exceeds `cap`.
BruteForceSplitResult brute_force_split(const Environment& env, const PartitionScheme& scheme,
                                        int granularity = 1,
                                        std::uint64_t cap = kDefaultSearchCap);

struct BruteForcePartitionResult {
  PartitionScheme scheme;
  double mean_score = 0.0;
  std::uint64_t evaluated = 0;
};

// Minimum mean score over all 2^(|M|-1) schemes.
BruteForcePartitionResult brute_force_partition(const ModelDesc& model, double alpha,
                                                const RandomDecisionSet& decision_set,
                                                int max_layers = 8);

}  // namespace distredge
