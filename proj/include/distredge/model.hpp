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
#include <string>
#include <vector>

#include "json.hpp"

namespace distredge {

enum class LayerKind { kConv, kMaxPool };

struct Shape {
  int width = 0;
  int height = 0;
  int depth = 0;

  friend bool operator==(const Shape&, const Shape&) = default;
};

// One conv or maxpool layer with its (derived) input shape.
struct LayerConfig {
  LayerKind kind = LayerKind::kConv;
  Shape input;
  int out_depth = 0;  // conv only; equals input.depth for maxpool
  int filter = 1;
  int stride = 1;
  int padding = 0;  // conv only
  std::string activation;

  int out_height() const;
  int out_width() const;
};

struct ModelDesc {
  std::string name;
  Shape input;
  int bytes_per_element = 2;
  std::vector<LayerConfig> layers;

  int size() const { return static_cast<int>(layers.size()); }
  // Output shape of layer `index` (0-based).
  Shape output_of(int index) const;
  // MACs of the whole model run unsplit on one device.
  std::uint64_t total_ops() const;
};

// Shape produced by `layer`. Throws DegenerateOutput if it has no rows or
// columns.
Shape output_shape(const LayerConfig& layer);

// MAC count for `out_height` output rows of `layer` (full output width).
std::uint64_t op_count(const LayerConfig& layer, int out_height);

std::uint64_t tensor_bytes(const Shape& shape, int bytes_per_element);

// Bytes of a single row (height 1) of a tensor with the given shape.
inline std::uint64_t row_bytes(const Shape& shape, int bytes_per_element) {
  return tensor_bytes(Shape{shape.width, 1, shape.depth}, bytes_per_element);
}

// Builds layers from the compact file form, deriving every input shape, and
// validates the chain.
ModelDesc parse_model(const nlohmann::json& doc);
ModelDesc load_model(const std::filesystem::path& path);
nlohmann::json model_to_json(const ModelDesc& model);

// Checks that each layer's input shape is the previous layer's output shape.
// Throws ChainMismatch with the 1-based index of the first bad layer.
void validate_chain(const ModelDesc& model);

}  // namespace distredge
