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

#include <filesystem>
#include <string>
#include <vector>

#include "distredge/latency_sim.hpp"
#include "distredge/model.hpp"
#include "distredge/profiles.hpp"

namespace distredge::testing {

inline std::filesystem::path data_dir() { return DISTREDGE_DATA_DIR; }

inline nlohmann::json conv_json(int c_out, int f = 3, int s = 1, int p = 1) {
  return {{"kind", "conv"}, {"cOut", c_out}, {"f", f}, {"s", s}, {"p", p}};
}

inline nlohmann::json pool_json(int f = 2, int s = 2) {
  return {{"kind", "maxpool"}, {"f", f}, {"s", s}};
}

inline ModelDesc make_model(int w, int h, int c, const std::vector<nlohmann::json>& layers,
                            int bytes = 2, const std::string& name = "test") {
  return parse_model({{"name", name},
                      {"bytesPerElement", bytes},
                      {"input", {{"w", w}, {"h", h}, {"c", c}}},
                      {"layers", layers}});
}

inline LayerConfig conv_layer(Shape in, int c_out, int f, int s, int p) {
  LayerConfig l;
  l.kind = LayerKind::kConv;
  l.input = in;
  l.out_depth = c_out;
  l.filter = f;
  l.stride = s;
  l.padding = p;
  return l;
}

inline LayerConfig pool_layer(Shape in, int f, int s) {
  LayerConfig l;
  l.kind = LayerKind::kMaxPool;
  l.input = in;
  l.out_depth = in.depth;
  l.filter = f;
  l.stride = s;
  return l;
}

// Flat per-layer profile: `ms_per_row` for every output row of every layer.
inline DeviceProfile linear_rows_profile(const ModelDesc& model, const std::string& id,
                                         double ms_per_row) {
  DeviceProfile p(id, model.size(), Regressor::kPiecewiseLinear);
  for (int l = 0; l < model.size(); ++l) {
    for (int h = 1; h <= model.layers[l].out_height(); ++h) p.set(l, h, ms_per_row * h);
  }
  return p;
}

inline LinkProfile link(const std::string& src, const std::string& dst, double mbps,
                        double overhead_ms) {
  LinkProfile l;
  l.src = src;
  l.dst = dst;
  l.mbps = mbps;
  l.overhead_ms = overhead_ms;
  return l;
}

// Fully connected device set (requester "req") with one uniform link tier.
inline DeviceSet uniform_devices(std::vector<Device> devices, double mbps, double overhead_ms) {
  std::vector<LinkProfile> links;
  for (std::size_t i = 0; i < devices.size(); ++i) {
    links.push_back(link("req", devices[i].id, mbps, overhead_ms));
    for (std::size_t j = i + 1; j < devices.size(); ++j) {
      links.push_back(link(devices[i].id, devices[j].id, mbps, overhead_ms));
    }
  }
  return DeviceSet("req", std::move(devices), std::move(links));
}

// Devices "d0", "d1", ... with flat per-row costs on one uniform link tier.
inline Environment linear_env(const ModelDesc& model, const std::vector<double>& ms_per_row,
                              double mbps, double overhead_ms) {
  Environment env;
  env.model = model;
  std::vector<Device> devices;
  for (std::size_t i = 0; i < ms_per_row.size(); ++i) {
    const std::string id = "d" + std::to_string(i);
    devices.push_back(Device{id, linear_rows_profile(model, id, ms_per_row[i])});
  }
  env.devices = uniform_devices(std::move(devices), mbps, overhead_ms);
  return env;
}

inline Environment load_environment(const std::string& model_file,
                                    const std::string& devices_file) {
  Environment env;
  env.model = load_model(data_dir() / "models" / model_file);
  env.devices = load_device_set(data_dir() / "devices" / devices_file, env.model);
  return env;
}

}  // namespace distredge::testing
