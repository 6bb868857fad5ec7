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

#include <set>
#include <vector>

#include "distredge/error.hpp"
#include "distredge/rng.hpp"
#include "distredge/vsl.hpp"

namespace distredge::testing {

// Rows of a layer's input touched by output row `r`, enumerated one filter
// tap at a time and dropped when they land in the zero padding.
inline std::set<int> taps_of_row(const LayerConfig& layer, int r) {
  std::set<int> rows;
  for (int t = 0; t < layer.filter; ++t) {
    const int row = r * layer.stride - layer.padding + t;
    if (row >= 0 && row < layer.input.height) rows.insert(row);
  }
  return rows;
}

// Per-row walk from the last layer of `volume` back to its input. Entry k of
// the result holds the output rows of sub-layer k that the given last-layer
// rows depend on; the final entry holds the volume input rows.
inline std::vector<std::set<int>> brute_force_rows(const ModelDesc& model,
                                                   const LayerVolume& volume, RowRange out) {
  const int n = volume.layer_count();
  std::vector<std::set<int>> rows(n + 1);
  for (int r = out.begin; r < out.end; ++r) rows[n - 1].insert(r);
  for (int k = n - 1; k >= 0; --k) {
    std::set<int>& below = k == 0 ? rows[n] : rows[k - 1];
    for (int r : rows[k]) {
      for (int row : taps_of_row(model.layers[volume.begin + k], r)) below.insert(row);
    }
  }
  return rows;
}

inline RowRange as_range(const std::set<int>& rows) {
  if (rows.empty()) return {};
  return {*rows.begin(), *rows.rbegin() + 1};
}

inline bool contiguous(const std::set<int>& rows) {
  return rows.empty() || static_cast<int>(rows.size()) == *rows.rbegin() - *rows.begin() + 1;
}

inline int rand_int(Rng& rng, int lo, int hi) { return static_cast<int>(rng.integer(lo, hi)); }

// Random chain of up to `max_layers` conv/maxpool layers with F in {1,3,5,7}
// and S in {1,2}; redrawn until every layer has at least one output row.
inline ModelDesc random_chain(Rng& rng, int max_layers) {
  static constexpr int kFilters[] = {1, 3, 5, 7};
  while (true) {
    const int count = rand_int(rng, 1, max_layers);
    ModelDesc model;
    model.name = "random";
    model.input = Shape{rand_int(rng, 8, 24), rand_int(rng, 16, 96), rand_int(rng, 1, 4)};
    Shape current = model.input;
    bool ok = true;
    for (int i = 0; i < count && ok; ++i) {
      LayerConfig l;
      l.kind = rng.below(4) == 0 ? LayerKind::kMaxPool : LayerKind::kConv;
      l.input = current;
      l.filter = kFilters[rng.below(4)];
      l.stride = rand_int(rng, 1, 2);
      l.padding = l.kind == LayerKind::kConv ? rand_int(rng, 0, l.filter / 2) : 0;
      l.out_depth = l.kind == LayerKind::kConv ? rand_int(rng, 1, 4) : current.depth;
      if (current.height + 2 * l.padding < l.filter || current.width + 2 * l.padding < l.filter) {
        ok = false;
        break;
      }
      current = output_shape(l);
      model.layers.push_back(l);
    }
    if (ok) return model;
  }
}

// Random non-decreasing cuts on [0, height] for `devices` devices.
inline SplitDecision random_decision(Rng& rng, int height, int devices) {
  SplitDecision d;
  for (int i = 0; i + 1 < devices; ++i) d.cuts.push_back(rand_int(rng, 0, height));
  std::sort(d.cuts.begin(), d.cuts.end());
  return d;
}

// Random scheme: each layer after the first starts a volume with prob. 1/2.
inline PartitionScheme random_scheme(Rng& rng, const ModelDesc& model) {
  PartitionScheme scheme;
  for (int j = 2; j <= model.size(); ++j) {
    if (rng.below(2) == 1) scheme.starts.push_back(j);
  }
  return scheme;
}

}  // namespace distredge::testing
