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
#include <cstdint>
#include <span>
#include <vector>

#include "distredge/model.hpp"

namespace distredge {

// Horizontal partition of a model into layer-volumes. `starts` holds the
// 1-based first layer of each volume: starts[0] == 1, strictly increasing,
// every entry <= |M|. Volume l spans layers [starts[l], starts[l+1]) and the
// last volume runs through layer |M|.
struct PartitionScheme {
  std::vector<int> starts{1};

  int volume_count() const { return static_cast<int>(starts.size()); }
  friend bool operator==(const PartitionScheme&, const PartitionScheme&) = default;
};

// Throws InvalidScheme unless `scheme` is well formed for `model`.
void validate_scheme(const ModelDesc& model, const PartitionScheme& scheme);

PartitionScheme single_volume_scheme();
PartitionScheme layer_by_layer_scheme(const ModelDesc& model);

struct LayerVolume {
  int index = 0;
  int begin = 0;  // 0-based first layer
  int end = 0;    // 0-based, exclusive
  Shape input;
  Shape output;

  int layer_count() const { return end - begin; }
  int out_height() const { return output.height; }
};

std::vector<LayerVolume> make_volumes(const ModelDesc& model, const PartitionScheme& scheme);

// Half-open row interval on the height axis.
struct RowRange {
  int begin = 0;
  int end = 0;

  int size() const { return end > begin ? end - begin : 0; }
  bool empty() const { return size() == 0; }
  friend bool operator==(const RowRange&, const RowRange&) = default;
};

inline int overlap(RowRange a, RowRange b) {
  return RowRange{std::max(a.begin, b.begin), std::min(a.end, b.end)}.size();
}

// Cut points x_1..x_{|D|-1} on the volume's last-layer height. Device i takes
// rows [x_{i-1}, x_i) with x_0 = 0 and x_|D| = H.
struct SplitDecision {
  std::vector<int> cuts;

  int device_count() const { return static_cast<int>(cuts.size()) + 1; }
  RowRange rows_of(int device, int height) const;
  friend bool operator==(const SplitDecision&, const SplitDecision&) = default;
};

// Throws InvalidDecision on unsorted or out-of-range cuts.
void validate_decision(const SplitDecision& decision, int height, int device_count);

struct SplitPart {
  int device = 0;
  RowRange out_rows;                  // rows of the volume's last layer
  std::vector<RowRange> layer_rows;   // output rows computed per sub-layer
  RowRange input_rows;                // rows of the volume input tensor needed

  bool empty() const { return out_rows.empty(); }
  int in_height() const { return input_rows.size(); }
};

struct BackpropHeights {
  std::vector<int> out_heights;  // one per sub-layer, first to last
  int in_height = 0;
};

// Output height of every sub-layer and the input height needed for
// `out_height_last` rows of the last sub-layer, ignoring tensor bounds.
BackpropHeights backpropagate_heights(const ModelDesc& model, const LayerVolume& volume,
                                      int out_height_last);

// Input rows needed by output rows `out` of `layer`, clamped to the input
// tensor. Rows that fall outside are zero padding.
RowRange receptive_rows(const LayerConfig& layer, RowRange out);

std::vector<SplitPart> split_volume(const ModelDesc& model, const LayerVolume& volume,
                                    const SplitDecision& decision);

// Total bytes moved between distinct devices: requester scatter of each
// part's input rows plus inter-volume rows a part needs but does not hold.
std::uint64_t transmission_amount(const ModelDesc& model, const PartitionScheme& scheme,
                                  std::span<const SplitDecision> decisions);

// Total MACs over all volumes, parts and sub-layers; duplicated halo rows are
// counted once per device that computes them.
std::uint64_t operations_amount(const ModelDesc& model, const PartitionScheme& scheme,
                                std::span<const SplitDecision> decisions);

}  // namespace distredge
