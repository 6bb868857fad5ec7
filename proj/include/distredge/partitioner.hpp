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
#include <vector>

#include "distredge/model.hpp"
#include "distredge/vsl.hpp"

namespace distredge {

// Weighting between normalized transmission bytes and normalized MACs.
struct ScoreParams {
  double alpha = 0.75;
  double transmission_ref = 1.0;  // bytes of the unsplit single-device plan
  double operations_ref = 1.0;    // MACs of the unsplit single-device plan

  static ScoreParams for_model(const ModelDesc& model, double alpha);
};

// A seeded set of random split decisions. Draws are stored per (sample,
// last layer of a volume) so that every scheme sees the same random numbers
// for volumes that end at the same layer.
class RandomDecisionSet {
 public:
  RandomDecisionSet(const ModelDesc& model, int device_count, int count, std::uint64_t seed);

  int count() const { return count_; }
  int device_count() const { return device_count_; }
  std::uint64_t seed() const { return seed_; }

  // Decisions of sample `i` for every volume of `scheme`.
  std::vector<SplitDecision> decisions(const ModelDesc& model, const PartitionScheme& scheme,
                                       int i) const;

 private:
  int count_;
  int device_count_;
  int layer_count_;
  std::uint64_t seed_;
  std::vector<double> draws_;  // [sample][layer][cut]
};

RandomDecisionSet sample_decisions(const ModelDesc& model, int device_count, int count,
                                   std::uint64_t seed);

double partition_score(const ModelDesc& model, const PartitionScheme& scheme,
                       std::span<const SplitDecision> decisions, const ScoreParams& params);

double mean_score(const ModelDesc& model, const PartitionScheme& scheme,
                  const RandomDecisionSet& decision_set, const ScoreParams& params);

// How a proposed location is judged against the scheme without it.
enum class Acceptance {
  kStrictImprovement,  // mean score must drop
  kNoWorse,            // mean score must not rise
};

struct LcpssOptions {
  double alpha = 0.75;
  int decision_count = 100;
  std::uint64_t seed = 0;
  int device_count = 4;
  Acceptance acceptance = Acceptance::kNoWorse;
};

struct LcpssResult {
  PartitionScheme scheme;
  double mean_score = 0.0;
  int outer_loops = 0;
};

// Greedy partition-scheme search: each outer loop proposes, for every
// current volume, the interior start location with the lowest mean score
// and keeps the accepted proposals; stops when nothing is added.
LcpssResult lcpss(const ModelDesc& model, const LcpssOptions& options);

}  // namespace distredge
