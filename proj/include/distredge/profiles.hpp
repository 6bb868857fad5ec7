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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "distredge/model.hpp"
#include "json.hpp"

namespace distredge {

enum class Regressor { kNone, kPiecewiseLinear, kNearestNeighbor };

// Compute latency of one device, tabulated per model layer against the
// layer's output height. Heights absent from a table are filled in by the
// fallback regressor.
class DeviceProfile {
 public:
  DeviceProfile() = default;
  DeviceProfile(std::string device_id, int layer_count, Regressor regressor = Regressor::kNone);

  const std::string& device_id() const { return device_id_; }
  int layer_count() const { return static_cast<int>(tables_.size()); }
  Regressor regressor() const { return regressor_; }
  void set_regressor(Regressor r) { regressor_ = r; }

  // Adds or replaces the latency for (layer, out_height). Height 0 is pinned
  // to 0 ms and cannot be overridden.
  void set(int layer, int out_height, double ms);

  // Sorted (height, ms) points for `layer`, excluding the implicit (0, 0).
  const std::vector<std::pair<int, double>>& table(int layer) const { return tables_.at(layer); }

  double latency(int layer, int out_height) const;

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;

 private:
  std::string device_id_;
  Regressor regressor_ = Regressor::kNone;
  std::vector<std::vector<std::pair<int, double>>> tables_;
};

// Free-function form used throughout the simulator; `layer` is 0-based.
inline double compute_latency(const DeviceProfile& profile, int layer, int out_height) {
  return profile.latency(layer, out_height);
}

struct ThroughputTrace {
  double step_ms = 1.0;
  std::vector<double> mbps;  // piecewise constant, wraps around
};

struct LinkProfile {
  std::string src;
  std::string dst;
  double mbps = 1.0;
  std::optional<ThroughputTrace> trace;
  double overhead_ms = 0.0;

  double throughput_at(double at_ms) const;
};

// Overhead plus serialization time of `bytes`; zero for empty payloads and
// self links.
double transmission_latency(const LinkProfile& link, std::uint64_t bytes, double at_ms = 0.0);

enum class SynthKind { kStaircase, kLinear, kKnee };

SynthKind parse_synth_kind(const std::string& name);
std::string synth_kind_name(SynthKind kind);

struct SynthParams {
  SynthKind kind = SynthKind::kLinear;
  double slope_ms_per_mmac = 1.0;  // ms per million MACs
  int period = 8;                  // staircase rows per step
  double jump_ms = 0.0;            // staircase extra cost per step
  double base_ms = 0.0;            // fixed per-layer launch cost when h > 0
  int knee_rows = 1;               // knee: rows below this cost as much as the knee
  double noise = 0.0;              // relative, multiplicative; 0 keeps tables exact
};

SynthParams parse_synth_params(const nlohmann::json& doc);
nlohmann::json synth_params_to_json(const SynthParams& params);

// Deterministic granularity-1 table over every layer of `model`.
DeviceProfile synth_profile(const ModelDesc& model, const std::string& device_id,
                            const SynthParams& params, std::uint64_t seed);

struct Device {
  std::string id;
  DeviceProfile profile;
};

// Service providers (index 0..n-1) plus the requester. Link lookups use
// kRequester for the requester endpoint.
class DeviceSet {
 public:
  static constexpr int kRequester = -1;

  DeviceSet() = default;
  DeviceSet(std::string requester, std::vector<Device> devices, std::vector<LinkProfile> links);

  int size() const { return static_cast<int>(devices_.size()); }
  const std::string& requester() const { return requester_; }
  const Device& device(int i) const { return devices_.at(i); }
  const std::vector<Device>& devices() const { return devices_; }
  const std::vector<LinkProfile>& links() const { return links_; }
  std::optional<int> index_of(const std::string& id) const;

  // Link from endpoint `from` to endpoint `to`; self links are never
  // requested by the simulator.
  const LinkProfile& link(int from, int to) const;

  // Returns a copy with every link touching device `device` rescaled.
  DeviceSet with_link_scale(int device, double throughput_factor) const;
  // Returns a copy where every latency (compute and link overhead) is
  // multiplied by `factor` and throughputs divided by it.
  DeviceSet scaled(double factor) const;

 private:
  void build_matrix();

  std::string requester_;
  std::vector<Device> devices_;
  std::vector<LinkProfile> links_;
  std::vector<int> matrix_;  // (from+1)*(n+1)+(to+1) -> index into links_
};

// Device-set JSON; synthetic profiles are materialized against `model` and
// CSV tables are resolved relative to `base_dir`.
DeviceSet parse_device_set(const nlohmann::json& doc, const ModelDesc& model,
                           const std::filesystem::path& base_dir = {});
DeviceSet load_device_set(const std::filesystem::path& path, const ModelDesc& model);

// Profile CSV: `layerIndex,outHeight,ms` with 1-based layer indices.
void save_profile_csv(const DeviceProfile& profile, const std::filesystem::path& path);
DeviceProfile load_profile_csv(const std::filesystem::path& path, const std::string& device_id,
                               int layer_count, Regressor regressor = Regressor::kNone);

}  // namespace distredge
