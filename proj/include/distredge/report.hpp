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
#include <span>
#include <string>

#include "json.hpp"

#include "distredge/latency_sim.hpp"
#include "distredge/osds.hpp"

namespace distredge {

// Plan file: {model, requester, devices, scheme, cuts, tailDevice, T_ms, ips}.
// `devices` lists provider ids in the order the cuts refer to.
nlohmann::json plan_to_json(const Environment& env, const StrategyPlan& plan, double end_to_end_ms);

// Resolves device ids against `env`. Throws InvalidPlan for unknown or
// reordered devices, a different model, or cuts that do not fit.
StrategyPlan plan_from_json(const nlohmann::json& doc, const Environment& env);
StrategyPlan load_plan(const std::filesystem::path& path, const Environment& env);

// Report file: {model, T_ms, ips, perVolume:[{volume, ready_ms, finish_ms}],
// breakdown:{compute_ms, transfer_ms, maxCompute_ms, maxTransfer_ms}}.
nlohmann::json report_to_json(const Environment& env, const LatencyReport& report);

// `volume,device,ready_ms,finish_ms`, one row per (volume, device).
std::string report_csv(const Environment& env, const LatencyReport& report);

// `episode,epsilon,T_ms,best_T_ms`.
std::string trace_csv(std::span<const TraceRow> trace);

// Fixed six-decimal rendering used by every CSV writer.
std::string format_ms(double value);

// Rewrites `path` whole; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace distredge
