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

#include "distredge/model.hpp"

#include <fstream>

#include "distredge/error.hpp"

namespace distredge {
namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, ErrorCode code) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(code, "arithmetic overflow");
  }
  return out;
}

int conv_extent(int in, int filter, int stride, int padding) {
  const int span = in - filter + 2 * padding;
  if (span < 0) return 0;
  return span / stride + 1;
}

}  // namespace

int LayerConfig::out_height() const {
  return conv_extent(input.height, filter, stride, kind == LayerKind::kConv ? padding : 0);
}

int LayerConfig::out_width() const {
  return conv_extent(input.width, filter, stride, kind == LayerKind::kConv ? padding : 0);
}

Shape output_shape(const LayerConfig& layer) {
  const Shape out{layer.out_width(), layer.out_height(),
                  layer.kind == LayerKind::kConv ? layer.out_depth : layer.input.depth};
  if (out.width < 1 || out.height < 1) {
    throw Error(ErrorCode::kDegenerateOutput, "layer produces an empty output");
  }
  return out;
}

std::uint64_t op_count(const LayerConfig& layer, int out_height) {
  if (out_height <= 0) return 0;
  const auto code = ErrorCode::kOpCountOverflow;
  std::uint64_t ops = checked_mul(static_cast<std::uint64_t>(layer.out_width()),
                                  static_cast<std::uint64_t>(out_height), code);
  if (layer.kind == LayerKind::kConv) {
    ops = checked_mul(ops, static_cast<std::uint64_t>(layer.out_depth), code);
  }
  ops = checked_mul(ops, static_cast<std::uint64_t>(layer.filter) * layer.filter, code);
  return checked_mul(ops, static_cast<std::uint64_t>(layer.input.depth), code);
}

std::uint64_t tensor_bytes(const Shape& shape, int bytes_per_element) {
  const auto code = ErrorCode::kByteCountOverflow;
  std::uint64_t b = checked_mul(static_cast<std::uint64_t>(shape.width),
                                static_cast<std::uint64_t>(shape.height), code);
  b = checked_mul(b, static_cast<std::uint64_t>(shape.depth), code);
  return checked_mul(b, static_cast<std::uint64_t>(bytes_per_element), code);
}

Shape ModelDesc::output_of(int index) const { return output_shape(layers.at(index)); }

std::uint64_t ModelDesc::total_ops() const {
  std::uint64_t total = 0;
  for (const auto& layer : layers) {
    if (__builtin_add_overflow(total, op_count(layer, layer.out_height()), &total)) {
      throw Error(ErrorCode::kOpCountOverflow, "model MAC total overflows");
    }
  }
  return total;
}

void validate_chain(const ModelDesc& model) {
  if (model.layers.empty()) throw Error(ErrorCode::kEmptyModel, "model has no layers");
  Shape expected = model.input;
  for (int i = 0; i < model.size(); ++i) {
    const auto& layer = model.layers[i];
    if (layer.input != expected) {
      throw LayerError(ErrorCode::kChainMismatch, i + 1,
                       "layer " + std::to_string(i + 1) +
                           " input shape does not match the previous output");
    }
    if (layer.filter < 1 || layer.stride < 1 || layer.padding < 0) {
      throw LayerError(ErrorCode::kParseError, i + 1,
                       "layer " + std::to_string(i + 1) + " has invalid F/S/P");
    }
    if (layer.kind == LayerKind::kMaxPool && layer.out_depth != layer.input.depth) {
      throw LayerError(ErrorCode::kChainMismatch, i + 1, "maxpool must keep depth");
    }
    if (layer.kind == LayerKind::kConv && layer.out_depth < 1) {
      throw LayerError(ErrorCode::kParseError, i + 1, "conv needs cOut >= 1");
    }
    expected = output_shape(layer);
  }
}

ModelDesc parse_model(const nlohmann::json& doc) {
  ModelDesc model;
  try {
    model.name = doc.value("name", std::string("model"));
    model.bytes_per_element = doc.value("bytesPerElement", 2);
    const auto& in = doc.at("input");
    model.input = Shape{in.at("w").get<int>(), in.at("h").get<int>(), in.at("c").get<int>()};
    if (model.input.width < 1 || model.input.height < 1 || model.input.depth < 1 ||
        model.bytes_per_element < 1) {
      throw Error(ErrorCode::kParseError, "input shape and precision must be positive");
    }
    const auto& layers = doc.at("layers");
    if (!layers.is_array() || layers.empty()) {
      throw Error(ErrorCode::kEmptyModel, "model has no layers");
    }
    Shape current = model.input;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto& l = layers[i];
      LayerConfig layer;
      const auto kind = l.at("kind").get<std::string>();
      if (kind == "conv") {
        layer.kind = LayerKind::kConv;
      } else if (kind == "maxpool") {
        layer.kind = LayerKind::kMaxPool;
      } else {
        throw Error(ErrorCode::kParseError, "unknown layer kind '" + kind + "'");
      }
      // An explicit input shape overrides derivation; used to express (and
      // reject) inconsistent chains.
      if (l.contains("in")) {
        const auto& s = l["in"];
        layer.input = Shape{s.at("w").get<int>(), s.at("h").get<int>(), s.at("c").get<int>()};
      } else {
        layer.input = current;
      }
      layer.filter = l.at("f").get<int>();
      layer.stride = l.at("s").get<int>();
      layer.padding = layer.kind == LayerKind::kConv ? l.value("p", 0) : 0;
      layer.out_depth =
          layer.kind == LayerKind::kConv ? l.at("cOut").get<int>() : layer.input.depth;
      layer.activation = l.value("activation", std::string());
      model.layers.push_back(layer);
      if (layer.filter >= 1 && layer.stride >= 1 && layer.padding >= 0 && layer.out_depth >= 1 &&
          layer.out_height() >= 1 && layer.out_width() >= 1) {
        current = output_shape(layer);
      } else {
        throw LayerError(ErrorCode::kDegenerateOutput, static_cast<int>(i) + 1,
                         "layer " + std::to_string(i + 1) + " has a degenerate output");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  validate_chain(model);
  return model;
}

ModelDesc load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return parse_model(doc);
}

nlohmann::json model_to_json(const ModelDesc& model) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : model.layers) {
    nlohmann::json l;
    l["kind"] = layer.kind == LayerKind::kConv ? "conv" : "maxpool";
    if (layer.kind == LayerKind::kConv) l["cOut"] = layer.out_depth;
    l["f"] = layer.filter;
    l["s"] = layer.stride;
    if (layer.kind == LayerKind::kConv) l["p"] = layer.padding;
    if (!layer.activation.empty()) l["activation"] = layer.activation;
    layers.push_back(std::move(l));
  }
  return {{"name", model.name},
          {"bytesPerElement", model.bytes_per_element},
          {"input", {{"w", model.input.width}, {"h", model.input.height}, {"c", model.input.depth}}},
          {"layers", std::move(layers)}};
}

}  // namespace distredge
