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

#include "distredge/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "distredge/error.hpp"
#include "distredge/rng.hpp"

namespace distredge {

DeviceProfile::DeviceProfile(std::string device_id, int layer_count, Regressor regressor)
    : device_id_(std::move(device_id)), regressor_(regressor), tables_(layer_count) {}

void DeviceProfile::set(int layer, int out_height, double ms) {
  if (layer < 0 || layer >= layer_count()) {
    throw LayerError(ErrorCode::kMissingProfile, layer + 1, "layer index out of range");
  }
  if (!(ms >= 0.0) || !std::isfinite(ms)) {
    throw Error(ErrorCode::kParseError, "latencies must be finite and non-negative");
  }
  if (out_height <= 0) return;
  auto& t = tables_[layer];
  auto it = std::lower_bound(t.begin(), t.end(), out_height,
                             [](const auto& p, int h) { return p.first < h; });
  if (it != t.end() && it->first == out_height) {
    it->second = ms;
  } else {
    t.insert(it, {out_height, ms});
  }
}

double DeviceProfile::latency(int layer, int out_height) const {
  if (out_height <= 0) return 0.0;
  if (layer < 0 || layer >= layer_count()) {
    throw LayerError(ErrorCode::kMissingProfile, layer + 1,
                     device_id_ + " has no profile for layer " + std::to_string(layer + 1));
  }
  const auto& t = tables_[layer];
  auto it = std::lower_bound(t.begin(), t.end(), out_height,
                             [](const auto& p, int h) { return p.first < h; });
  if (it != t.end() && it->first == out_height) return it->second;
  if (regressor_ == Regressor::kNone || t.empty()) {
    throw LayerError(ErrorCode::kMissingProfile, layer + 1,
                     device_id_ + " has no entry for layer " + std::to_string(layer + 1) +
                         " height " + std::to_string(out_height));
  }
  if (regressor_ == Regressor::kNearestNeighbor) {
    if (it == t.begin()) return it->second;
    if (it == t.end()) return t.back().second;
    const auto& below = *(it - 1);
    return out_height - below.first <= it->first - out_height ? below.second : it->second;
  }
  // Neighbours, with the implicit (0, 0) point below the first entry.
  const std::pair<int, double> lo = it == t.begin() ? std::pair<int, double>{0, 0.0} : *(it - 1);
  if (it == t.end()) {
    // Extrapolate along the last segment.
    const std::pair<int, double> prev =
        t.size() >= 2 ? t[t.size() - 2] : std::pair<int, double>{0, 0.0};
    const auto& last = t.back();
    const double slope = (last.second - prev.second) / (last.first - prev.first);
    return std::max(last.second, last.second + slope * (out_height - last.first));
  }
  const double w = static_cast<double>(out_height - lo.first) / (it->first - lo.first);
  return lo.second + w * (it->second - lo.second);
}

double LinkProfile::throughput_at(double at_ms) const {
  if (!trace || trace->mbps.empty()) return mbps;
  const double period = trace->step_ms * static_cast<double>(trace->mbps.size());
  double t = std::fmod(std::max(at_ms, 0.0), period);
  auto index = static_cast<std::size_t>(t / trace->step_ms);
  return trace->mbps[std::min(index, trace->mbps.size() - 1)];
}

double transmission_latency(const LinkProfile& link, std::uint64_t bytes, double at_ms) {
  if (bytes == 0 || link.src == link.dst) return 0.0;
  // Mbps -> bits per ms is mbps * 1e3.
  return link.overhead_ms + static_cast<double>(bytes) * 8.0 / (link.throughput_at(at_ms) * 1e3);
}

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "staircase") return SynthKind::kStaircase;
  if (name == "linear") return SynthKind::kLinear;
  if (name == "knee") return SynthKind::kKnee;
  throw Error(ErrorCode::kUnknownKind, "unknown profile kind '" + name + "'");
}

std::string synth_kind_name(SynthKind kind) {
  switch (kind) {
    case SynthKind::kStaircase: return "staircase";
    case SynthKind::kLinear: return "linear";
    case SynthKind::kKnee: return "knee";
  }
  return "linear";
}

SynthParams parse_synth_params(const nlohmann::json& doc) {
  SynthParams p;
  p.kind = parse_synth_kind(doc.at("kind").get<std::string>());
  p.slope_ms_per_mmac = doc.value("slope", p.slope_ms_per_mmac);
  p.period = doc.value("period", p.period);
  p.jump_ms = doc.value("jump", p.jump_ms);
  p.base_ms = doc.value("base", p.base_ms);
  p.knee_rows = doc.value("knee", p.knee_rows);
  p.noise = doc.value("noise", p.noise);
  if (p.slope_ms_per_mmac < 0 || p.period < 1 || p.jump_ms < 0 || p.base_ms < 0 ||
      p.knee_rows < 1 || p.noise < 0) {
    throw Error(ErrorCode::kParseError, "synthetic profile parameters out of range");
  }
  return p;
}

nlohmann::json synth_params_to_json(const SynthParams& p) {
  return {{"kind", synth_kind_name(p.kind)}, {"slope", p.slope_ms_per_mmac},
          {"period", p.period},              {"jump", p.jump_ms},
          {"base", p.base_ms},               {"knee", p.knee_rows},
          {"noise", p.noise}};
}

DeviceProfile synth_profile(const ModelDesc& model, const std::string& device_id,
                            const SynthParams& params, std::uint64_t seed) {
  DeviceProfile profile(device_id, model.size());
  Rng rng = Rng::substream(seed, "profile:" + device_id);
  for (int l = 0; l < model.size(); ++l) {
    const auto& layer = model.layers[l];
    const auto mmac = [&](int h) { return static_cast<double>(op_count(layer, h)) / 1e6; };
    double running = 0.0;
    for (int h = 1; h <= layer.out_height(); ++h) {
      double ms = 0.0;
      switch (params.kind) {
        case SynthKind::kLinear:
          ms = params.slope_ms_per_mmac * mmac(h);
          break;
        case SynthKind::kStaircase: {
          const int steps = (h + params.period - 1) / params.period;
          ms = steps * (params.jump_ms + params.slope_ms_per_mmac * mmac(params.period));
          break;
        }
        case SynthKind::kKnee:
          ms = params.slope_ms_per_mmac * mmac(std::max(h, params.knee_rows));
          break;
      }
      ms += params.base_ms;
      if (params.noise > 0.0) ms *= 1.0 + params.noise * rng.uniform();
      running = std::max(running, ms);
      profile.set(l, h, running);
    }
  }
  return profile;
}

DeviceSet::DeviceSet(std::string requester, std::vector<Device> devices,
                     std::vector<LinkProfile> links)
    : requester_(std::move(requester)), devices_(std::move(devices)), links_(std::move(links)) {
  if (devices_.empty()) throw Error(ErrorCode::kParseError, "device set needs a provider");
  build_matrix();
}

std::optional<int> DeviceSet::index_of(const std::string& id) const {
  for (int i = 0; i < size(); ++i) {
    if (devices_[i].id == id) return i;
  }
  return std::nullopt;
}

void DeviceSet::build_matrix() {
  const int n = size();
  std::map<std::string, int> endpoint;
  endpoint[requester_] = kRequester;
  for (int i = 0; i < n; ++i) {
    if (devices_[i].id == requester_ || endpoint.count(devices_[i].id)) {
      throw Error(ErrorCode::kParseError, "duplicate device id '" + devices_[i].id + "'");
    }
    endpoint[devices_[i].id] = i;
  }
  matrix_.assign((n + 1) * (n + 1), -1);
  const auto slot = [n](int from, int to) { return (from + 1) * (n + 1) + (to + 1); };
  // Explicit directions first; a single entry also serves the reverse
  // direction unless that one is listed too.
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 0; k < static_cast<int>(links_.size()); ++k) {
      const auto& link = links_[k];
      auto s = endpoint.find(link.src);
      auto d = endpoint.find(link.dst);
      if (s == endpoint.end() || d == endpoint.end()) {
        throw Error(ErrorCode::kParseError,
                    "link " + link.src + "->" + link.dst + " names an unknown device");
      }
      if (link.mbps <= 0.0 || link.overhead_ms < 0.0) {
        throw Error(ErrorCode::kParseError, "link throughput must be > 0 and overhead >= 0");
      }
      if (link.trace) {
        if (link.trace->mbps.empty() || link.trace->step_ms <= 0.0) {
          throw Error(ErrorCode::kParseError, "throughput trace must be non-empty");
        }
        for (double v : link.trace->mbps) {
          if (v <= 0.0) throw Error(ErrorCode::kParseError, "trace throughput must be > 0");
        }
      }
      const int from = pass == 0 ? s->second : d->second;
      const int to = pass == 0 ? d->second : s->second;
      int& cell = matrix_[slot(from, to)];
      if (cell < 0) cell = k;
    }
  }
  for (int from = kRequester; from < n; ++from) {
    for (int to = 0; to < n; ++to) {
      if (from == to) continue;
      if (matrix_[slot(from, to)] < 0) {
        const std::string a = from == kRequester ? requester_ : devices_[from].id;
        throw Error(ErrorCode::kIncompleteLinkMatrix,
                    "missing link (" + a + ", " + devices_[to].id + ")");
      }
    }
  }
}

const LinkProfile& DeviceSet::link(int from, int to) const {
  const int n = size();
  const int k = matrix_.at((from + 1) * (n + 1) + (to + 1));
  if (k < 0) throw Error(ErrorCode::kIncompleteLinkMatrix, "no such link");
  return links_[k];
}

DeviceSet DeviceSet::with_link_scale(int device, double throughput_factor) const {
  DeviceSet copy = *this;
  const std::string& id = devices_.at(device).id;
  for (auto& link : copy.links_) {
    if (link.src != id && link.dst != id) continue;
    link.mbps *= throughput_factor;
    if (link.trace) {
      for (double& v : link.trace->mbps) v *= throughput_factor;
    }
  }
  return copy;
}

DeviceSet DeviceSet::scaled(double factor) const {
  DeviceSet copy = *this;
  for (auto& device : copy.devices_) {
    DeviceProfile p(device.id, device.profile.layer_count(), device.profile.regressor());
    for (int l = 0; l < p.layer_count(); ++l) {
      for (const auto& [h, ms] : device.profile.table(l)) p.set(l, h, ms * factor);
    }
    device.profile = std::move(p);
  }
  for (auto& link : copy.links_) {
    link.overhead_ms *= factor;
    link.mbps /= factor;
    if (link.trace) {
      link.trace->step_ms *= factor;
      for (double& v : link.trace->mbps) v /= factor;
    }
  }
  return copy;
}

namespace {

Regressor parse_regressor(const nlohmann::json& doc) {
  const auto name = doc.value("regressor", std::string("none"));
  if (name == "none") return Regressor::kNone;
  if (name == "piecewise-linear") return Regressor::kPiecewiseLinear;
  if (name == "nearest-neighbor") return Regressor::kNearestNeighbor;
  throw Error(ErrorCode::kUnknownKind, "unknown regressor '" + name + "'");
}

}  // namespace

DeviceSet parse_device_set(const nlohmann::json& doc, const ModelDesc& model,
                           const std::filesystem::path& base_dir) {
  try {
    const auto requester = doc.at("requester").get<std::string>();
    std::vector<Device> devices;
    for (const auto& d : doc.at("devices")) {
      Device device;
      device.id = d.at("id").get<std::string>();
      const auto& p = d.at("profile");
      const Regressor regressor = parse_regressor(p);
      if (p.contains("kind")) {
        device.profile = synth_profile(model, device.id, parse_synth_params(p),
                                       p.value("seed", std::uint64_t{0}));
        device.profile.set_regressor(regressor);
      } else if (p.contains("table")) {
        device.profile = DeviceProfile(device.id, model.size(), regressor);
        for (const auto& row : p.at("table")) {
          device.profile.set(row.at(0).get<int>() - 1, row.at(1).get<int>(),
                             row.at(2).get<double>());
        }
      } else if (p.contains("csv")) {
        device.profile = load_profile_csv(base_dir / p.at("csv").get<std::string>(), device.id,
                                          model.size(), regressor);
      } else {
        throw Error(ErrorCode::kParseError, "profile of " + device.id + " needs kind|table|csv");
      }
      devices.push_back(std::move(device));
    }
    std::vector<LinkProfile> links;
    for (const auto& l : doc.at("links")) {
      LinkProfile link;
      link.src = l.at("src").get<std::string>();
      link.dst = l.at("dst").get<std::string>();
      link.overhead_ms = l.value("overheadMs", 0.0);
      if (l.contains("trace")) {
        ThroughputTrace trace;
        trace.step_ms = l["trace"].at("stepMs").get<double>();
        trace.mbps = l["trace"].at("mbps").get<std::vector<double>>();
        link.mbps = trace.mbps.empty() ? 0.0 : trace.mbps.front();
        link.trace = std::move(trace);
      } else {
        link.mbps = l.at("mbps").get<double>();
      }
      links.push_back(std::move(link));
    }
    return DeviceSet(requester, std::move(devices), std::move(links));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

DeviceSet load_device_set(const std::filesystem::path& path, const ModelDesc& model) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return parse_device_set(doc, model, path.parent_path());
}

void save_profile_csv(const DeviceProfile& profile, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << "layerIndex,outHeight,ms\n";
  char buf[64];
  for (int l = 0; l < profile.layer_count(); ++l) {
    for (const auto& [h, ms] : profile.table(l)) {
      std::snprintf(buf, sizeof(buf), "%.17g", ms);
      out << (l + 1) << ',' << h << ',' << buf << '\n';
    }
  }
}

DeviceProfile load_profile_csv(const std::filesystem::path& path, const std::string& device_id,
                               int layer_count, Regressor regressor) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  DeviceProfile profile(device_id, layer_count, regressor);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && line.rfind("layerIndex", 0) == 0)) continue;
    std::istringstream fields(line);
    std::string a, b, c;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') ||
        !std::getline(fields, c)) {
      throw Error(ErrorCode::kParseError, path.string() + ":" + std::to_string(line_no));
    }
    try {
      profile.set(std::stoi(a) - 1, std::stoi(b), std::strtod(c.c_str(), nullptr));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParseError, path.string() + ":" + std::to_string(line_no));
    }
  }
  return profile;
}

}  // namespace distredge
