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

#include "distredge/vsl.hpp"

#include <algorithm>
#include <string>

#include "distredge/error.hpp"

namespace distredge {

void validate_scheme(const ModelDesc& model, const PartitionScheme& scheme) {
  const auto& s = scheme.starts;
  if (s.empty() || s.front() != 1) {
    throw Error(ErrorCode::kInvalidScheme, "scheme must start at layer 1");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 1 || s[i] > model.size()) {
      throw Error(ErrorCode::kInvalidScheme, "location " + std::to_string(s[i]) + " out of range");
    }
    if (i > 0 && s[i] <= s[i - 1]) {
      throw Error(ErrorCode::kInvalidScheme, "locations must be strictly increasing");
    }
  }
}

PartitionScheme single_volume_scheme() { return PartitionScheme{{1}}; }

PartitionScheme layer_by_layer_scheme(const ModelDesc& model) {
  PartitionScheme scheme;
  scheme.starts.clear();
  for (int i = 1; i <= model.size(); ++i) scheme.starts.push_back(i);
  return scheme;
}

std::vector<LayerVolume> make_volumes(const ModelDesc& model, const PartitionScheme& scheme) {
  validate_scheme(model, scheme);
  std::vector<LayerVolume> volumes;
  const int count = scheme.volume_count();
  volumes.reserve(count);
  for (int l = 0; l < count; ++l) {
    LayerVolume v;
    v.index = l;
    v.begin = scheme.starts[l] - 1;
    v.end = l + 1 < count ? scheme.starts[l + 1] - 1 : model.size();
    v.input = model.layers[v.begin].input;
    v.output = model.output_of(v.end - 1);
    volumes.push_back(v);
  }
  return volumes;
}

RowRange SplitDecision::rows_of(int device, int height) const {
  const int lo = device == 0 ? 0 : cuts[device - 1];
  const int hi = device == static_cast<int>(cuts.size()) ? height : cuts[device];
  return {lo, hi};
}

void validate_decision(const SplitDecision& decision, int height, int device_count) {
  if (decision.device_count() != device_count) {
    throw Error(ErrorCode::kInvalidDecision,
                "expected " + std::to_string(device_count - 1) + " cuts, got " +
                    std::to_string(decision.cuts.size()));
  }
  int previous = 0;
  for (int cut : decision.cuts) {
    if (cut < previous || cut > height) {
      throw Error(ErrorCode::kInvalidDecision,
                  "cuts must be non-decreasing within [0, " + std::to_string(height) + "]");
    }
    previous = cut;
  }
}

BackpropHeights backpropagate_heights(const ModelDesc& model, const LayerVolume& volume,
                                      int out_height_last) {
  BackpropHeights result;
  const int n = volume.layer_count();
  result.out_heights.assign(n, 0);
  if (out_height_last <= 0) return result;
  result.out_heights[n - 1] = out_height_last;
  for (int i = n - 2; i >= 0; --i) {
    const auto& next = model.layers[volume.begin + i + 1];
    result.out_heights[i] = (result.out_heights[i + 1] - 1) * next.stride + next.filter;
  }
  const auto& first = model.layers[volume.begin];
  result.in_height = (result.out_heights[0] - 1) * first.stride + first.filter;
  return result;
}

RowRange receptive_rows(const LayerConfig& layer, RowRange out) {
  if (out.empty()) return {};
  const int pad = layer.kind == LayerKind::kConv ? layer.padding : 0;
  const int lo = out.begin * layer.stride - pad;
  const int hi = (out.end - 1) * layer.stride - pad + layer.filter;
  return {std::clamp(lo, 0, layer.input.height), std::clamp(hi, 0, layer.input.height)};
}

std::vector<SplitPart> split_volume(const ModelDesc& model, const LayerVolume& volume,
                                    const SplitDecision& decision) {
  validate_decision(decision, volume.out_height(), decision.device_count());
  const int devices = decision.device_count();
  const int n = volume.layer_count();
  std::vector<SplitPart> parts(devices);
  for (int d = 0; d < devices; ++d) {
    SplitPart& part = parts[d];
    part.device = d;
    part.out_rows = decision.rows_of(d, volume.out_height());
    part.layer_rows.assign(n, RowRange{});
    if (part.out_rows.empty()) continue;
    RowRange rows = part.out_rows;
    for (int i = n - 1; i >= 0; --i) {
      part.layer_rows[i] = rows;
      rows = receptive_rows(model.layers[volume.begin + i], rows);
    }
    part.input_rows = rows;
  }
  return parts;
}

namespace {

void check_decisions(const std::vector<LayerVolume>& volumes,
                     std::span<const SplitDecision> decisions) {
  if (decisions.size() != volumes.size()) {
    throw Error(ErrorCode::kInvalidDecision, "one decision per volume is required");
  }
  const int devices = decisions.empty() ? 1 : decisions.front().device_count();
  for (std::size_t l = 0; l < volumes.size(); ++l) {
    validate_decision(decisions[l], volumes[l].out_height(), devices);
  }
}

}  // namespace

std::uint64_t transmission_amount(const ModelDesc& model, const PartitionScheme& scheme,
                                  std::span<const SplitDecision> decisions) {
  const auto volumes = make_volumes(model, scheme);
  check_decisions(volumes, decisions);
  std::uint64_t total = 0;
  std::vector<SplitPart> previous;
  for (std::size_t l = 0; l < volumes.size(); ++l) {
    auto parts = split_volume(model, volumes[l], decisions[l]);
    const std::uint64_t row = row_bytes(volumes[l].input, model.bytes_per_element);
    for (const auto& part : parts) {
      int remote_rows = part.input_rows.size();
      if (l > 0) remote_rows -= overlap(part.input_rows, previous[part.device].out_rows);
      total += row * static_cast<std::uint64_t>(remote_rows);
    }
    previous = std::move(parts);
  }
  return total;
}

std::uint64_t operations_amount(const ModelDesc& model, const PartitionScheme& scheme,
                                std::span<const SplitDecision> decisions) {
  const auto volumes = make_volumes(model, scheme);
  check_decisions(volumes, decisions);
  std::uint64_t total = 0;
  for (std::size_t l = 0; l < volumes.size(); ++l) {
    for (const auto& part : split_volume(model, volumes[l], decisions[l])) {
      for (int i = 0; i < volumes[l].layer_count(); ++i) {
        const std::uint64_t ops =
            op_count(model.layers[volumes[l].begin + i], part.layer_rows[i].size());
        if (__builtin_add_overflow(total, ops, &total)) {
          throw Error(ErrorCode::kOpCountOverflow, "operation total overflows");
        }
      }
    }
  }
  return total;
}

}  // namespace distredge
