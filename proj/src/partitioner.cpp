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

#include "distredge/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "distredge/error.hpp"
#include "distredge/rng.hpp"

namespace distredge {

ScoreParams ScoreParams::for_model(const ModelDesc& model, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  }
  const PartitionScheme single = single_volume_scheme();
  const std::vector<SplitDecision> none{SplitDecision{}};
  ScoreParams params;
  params.alpha = alpha;
  params.transmission_ref = static_cast<double>(transmission_amount(model, single, none));
  params.operations_ref = static_cast<double>(operations_amount(model, single, none));
  return params;
}

RandomDecisionSet::RandomDecisionSet(const ModelDesc& model, int device_count, int count,
                                     std::uint64_t seed)
    : count_(count), device_count_(device_count), layer_count_(model.size()), seed_(seed) {
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "decision count must be >= 1");
  if (device_count < 1) throw Error(ErrorCode::kInvalidArgument, "device count must be >= 1");
  Rng rng = Rng::substream(seed, "sampling");
  draws_.resize(static_cast<std::size_t>(count) * layer_count_ * (device_count - 1));
  for (double& d : draws_) d = rng.uniform();
}

std::vector<SplitDecision> RandomDecisionSet::decisions(const ModelDesc& model,
                                                        const PartitionScheme& scheme,
                                                        int i) const {
  const int cuts = device_count_ - 1;
  std::vector<SplitDecision> out;
  out.reserve(scheme.volume_count());
  for (int l = 0; l < scheme.volume_count(); ++l) {
    const int last = l + 1 < scheme.volume_count() ? scheme.starts[l + 1] - 2 : model.size() - 1;
    const int height = model.layers[last].out_height();
    SplitDecision decision;
    decision.cuts.resize(cuts);
    const double* u =
        draws_.data() + (static_cast<std::size_t>(i) * layer_count_ + last) * cuts;
    for (int k = 0; k < cuts; ++k) {
      // Uniform integer in [0, H].
      decision.cuts[k] = std::min(height, static_cast<int>(std::floor(u[k] * (height + 1))));
    }
    std::sort(decision.cuts.begin(), decision.cuts.end());
    out.push_back(std::move(decision));
  }
  return out;
}

RandomDecisionSet sample_decisions(const ModelDesc& model, int device_count, int count,
                                   std::uint64_t seed) {
  return RandomDecisionSet(model, device_count, count, seed);
}

double partition_score(const ModelDesc& model, const PartitionScheme& scheme,
                       std::span<const SplitDecision> decisions, const ScoreParams& params) {
  double score = 0.0;
  if (params.alpha > 0.0) {
    score += params.alpha *
             (static_cast<double>(transmission_amount(model, scheme, decisions)) /
              params.transmission_ref);
  }
  if (params.alpha < 1.0) {
    score += (1.0 - params.alpha) *
             (static_cast<double>(operations_amount(model, scheme, decisions)) /
              params.operations_ref);
  }
  return score;
}

double mean_score(const ModelDesc& model, const PartitionScheme& scheme,
                  const RandomDecisionSet& decision_set, const ScoreParams& params) {
  double sum = 0.0;
  for (int i = 0; i < decision_set.count(); ++i) {
    sum += partition_score(model, scheme, decision_set.decisions(model, scheme, i), params);
  }
  return sum / decision_set.count();
}

LcpssResult lcpss(const ModelDesc& model, const LcpssOptions& options) {
  const ScoreParams params = ScoreParams::for_model(model, options.alpha);
  const RandomDecisionSet decision_set(model, options.device_count, options.decision_count,
                                       options.seed);
  LcpssResult result;
  PartitionScheme scheme = single_volume_scheme();
  double current = mean_score(model, scheme, decision_set, params);
  while (true) {
    ++result.outer_loops;
    std::vector<int> accepted;
    for (int v = 0; v < scheme.volume_count(); ++v) {
      const int first = scheme.starts[v];
      const int next = v + 1 < scheme.volume_count() ? scheme.starts[v + 1] : model.size() + 1;
      double best = std::numeric_limits<double>::infinity();
      int best_location = -1;
      for (int j = first + 1; j < next; ++j) {
        PartitionScheme candidate = scheme;
        candidate.starts.insert(candidate.starts.begin() + v + 1, j);
        const double score = mean_score(model, candidate, decision_set, params);
        if (score < best) {
          best = score;
          best_location = j;
        }
      }
      if (best_location < 0) continue;
      const bool keep = options.acceptance == Acceptance::kStrictImprovement ? best < current
                                                                             : best <= current;
      if (keep) accepted.push_back(best_location);
    }
    if (accepted.empty()) break;
    for (int j : accepted) scheme.starts.push_back(j);
    std::sort(scheme.starts.begin(), scheme.starts.end());
    current = mean_score(model, scheme, decision_set, params);
  }
  result.scheme = std::move(scheme);
  result.mean_score = current;
  return result;
}

}  // namespace distredge
