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

#include "distredge/report.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "distredge/error.hpp"

namespace distredge {

namespace {

std::string endpoint_name(const Environment& env, int endpoint) {
  return endpoint == DeviceSet::kRequester ? env.devices.requester()
                                           : env.devices.device(endpoint).id;
}

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidPlan, what);
}

}  // namespace

nlohmann::json plan_to_json(const Environment& env, const StrategyPlan& plan,
                            double end_to_end_ms) {
  nlohmann::json devices = nlohmann::json::array();
  for (const auto& d : env.devices.devices()) devices.push_back(d.id);
  nlohmann::json cuts = nlohmann::json::array();
  for (const auto& d : plan.decisions) cuts.push_back(d.cuts);
  return {{"model", env.model.name},
          {"requester", env.devices.requester()},
          {"devices", devices},
          {"scheme", plan.scheme.starts},
          {"cuts", cuts},
          {"tailDevice", env.devices.device(plan.tail_device).id},
          {"T_ms", end_to_end_ms},
          {"ips", throughput_ips(end_to_end_ms)}};
}

StrategyPlan plan_from_json(const nlohmann::json& doc, const Environment& env) {
  StrategyPlan plan;
  try {
    const auto model = doc.at("model").get<std::string>();
    if (model != env.model.name) invalid("plan is for model '" + model + "'");
    const auto devices = doc.at("devices").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < devices.size(); ++i) {
      const auto index = env.devices.index_of(devices[i]);
      if (!index) invalid("plan references unknown device '" + devices[i] + "'");
      if (*index != static_cast<int>(i)) {
        invalid("device '" + devices[i] + "' is listed in a different order than the device set");
      }
    }
    if (static_cast<int>(devices.size()) != env.devices.size()) {
      invalid("plan lists " + std::to_string(devices.size()) + " devices; device set has " +
              std::to_string(env.devices.size()));
    }
    plan.scheme.starts = doc.at("scheme").get<std::vector<int>>();
    for (const auto& cuts : doc.at("cuts")) {
      plan.decisions.push_back(SplitDecision{cuts.get<std::vector<int>>()});
    }
    const auto tail = doc.at("tailDevice").get<std::string>();
    const auto tail_index = env.devices.index_of(tail);
    if (!tail_index) invalid("plan references unknown tail device '" + tail + "'");
    plan.tail_device = *tail_index;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  validate_plan(env, plan);
  return plan;
}

StrategyPlan load_plan(const std::filesystem::path& path, const Environment& env) {
  return plan_from_json(read_json_file(path), env);
}

nlohmann::json report_to_json(const Environment& env, const LatencyReport& report) {
  nlohmann::json per_volume = nlohmann::json::array();
  for (std::size_t l = 0; l < report.per_volume.size(); ++l) {
    per_volume.push_back({{"volume", l + 1},
                          {"ready_ms", report.ready[l]},
                          {"finish_ms", report.per_volume[l]}});
  }
  nlohmann::json compute = nlohmann::json::object();
  for (int i = 0; i < env.devices.size(); ++i) {
    compute[env.devices.device(i).id] = report.breakdown.compute_ms[i];
  }
  nlohmann::json transfer = nlohmann::json::array();
  for (const auto& [link, ms] : report.breakdown.transfer_ms) {
    transfer.push_back({{"src", endpoint_name(env, link.first)},
                        {"dst", endpoint_name(env, link.second)},
                        {"ms", ms}});
  }
  return {{"model", env.model.name},
          {"T_ms", report.end_to_end_ms},
          {"ips", report.ips},
          {"perVolume", per_volume},
          {"breakdown",
           {{"compute_ms", compute},
            {"transfer_ms", transfer},
            {"maxCompute_ms", report.breakdown.max_compute_ms},
            {"maxTransfer_ms", report.breakdown.max_transfer_ms}}}};
}

std::string format_ms(double value) { return fmt::format("{:.6f}", value); }

std::string report_csv(const Environment& env, const LatencyReport& report) {
  std::string out = "volume,device,ready_ms,finish_ms\n";
  for (std::size_t l = 0; l < report.per_volume.size(); ++l) {
    for (int i = 0; i < env.devices.size(); ++i) {
      out += fmt::format("{},{},{},{}\n", l + 1, env.devices.device(i).id,
                         format_ms(report.ready[l][i]), format_ms(report.per_volume[l][i]));
    }
  }
  return out;
}

std::string trace_csv(std::span<const TraceRow> trace) {
  std::string out = "episode,epsilon,T_ms,best_T_ms\n";
  for (const auto& row : trace) {
    out += fmt::format("{},{},{},{}\n", row.episode, format_ms(row.epsilon),
                       format_ms(row.end_to_end_ms), format_ms(row.best_ms));
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

}  // namespace distredge
