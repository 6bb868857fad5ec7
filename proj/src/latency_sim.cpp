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

#include "distredge/latency_sim.hpp"

#include <algorithm>

#include "distredge/error.hpp"

namespace distredge {

StepResult step_volume(const Environment& env, const AccumLatencies& prev,
                       const LayerVolume& volume, std::span<const SplitPart> parts,
                       std::span<const SplitPart> producers) {
  const int n = env.devices.size();
  if (static_cast<int>(prev.size()) != n || static_cast<int>(parts.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "state and parts must match the device count");
  }
  StepResult result;
  result.ready = prev;
  result.finish = prev;
  result.compute_ms.assign(n, 0.0);
  const std::uint64_t row = row_bytes(volume.input, env.model.bytes_per_element);

  std::vector<double> arrival(n, 0.0);
  if (producers.empty()) {
    // Input tiles are prepared ahead of time, so the requester sends to every
    // provider concurrently.
    for (int i = 0; i < n; ++i) {
      const std::uint64_t bytes = row * static_cast<std::uint64_t>(parts[i].input_rows.size());
      if (bytes == 0) continue;
      const double ms =
          transmission_latency(env.devices.link(DeviceSet::kRequester, i), bytes, 0.0);
      arrival[i] = ms;
      result.transfer_ms[{DeviceSet::kRequester, i}] += ms;
    }
  } else {
    for (int j = 0; j < n; ++j) {
      if (producers[j].empty()) continue;
      double clock = prev[j];
      for (int i = 0; i < n; ++i) {
        if (i == j || parts[i].empty()) continue;
        const int rows = overlap(parts[i].input_rows, producers[j].out_rows);
        if (rows == 0) continue;
        const double ms = transmission_latency(env.devices.link(j, i),
                                               row * static_cast<std::uint64_t>(rows), clock);
        clock += ms;
        arrival[i] = std::max(arrival[i], clock);
        result.transfer_ms[{j, i}] += ms;
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    if (parts[i].empty()) continue;
    const auto& profile = env.devices.device(i).profile;
    double compute = 0.0;
    for (int k = 0; k < volume.layer_count(); ++k) {
      compute += compute_latency(profile, volume.begin + k, parts[i].layer_rows[k].size());
    }
    result.compute_ms[i] = compute;
    result.ready[i] = std::max(prev[i], arrival[i]);
    result.finish[i] = result.ready[i] + compute;
  }
  return result;
}

double gather_latency(const Environment& env, const AccumLatencies& last,
                      std::span<const SplitPart> last_parts, const LayerVolume& last_volume,
                      int tail_device) {
  const std::uint64_t row = row_bytes(last_volume.output, env.model.bytes_per_element);
  double end = *std::max_element(last.begin(), last.end());
  for (int i = 0; i < static_cast<int>(last_parts.size()); ++i) {
    if (i == tail_device || last_parts[i].empty()) continue;
    const auto bytes = row * static_cast<std::uint64_t>(last_parts[i].out_rows.size());
    end = std::max(end, last[i] + transmission_latency(env.devices.link(i, tail_device), bytes,
                                                       last[i]));
  }
  return end;
}

void validate_plan(const Environment& env, const StrategyPlan& plan) {
  try {
    const auto volumes = make_volumes(env.model, plan.scheme);
    if (plan.decisions.size() != volumes.size()) {
      throw Error(ErrorCode::kInvalidPlan, "plan needs one decision per volume");
    }
    for (std::size_t l = 0; l < volumes.size(); ++l) {
      validate_decision(plan.decisions[l], volumes[l].out_height(), env.devices.size());
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidPlan) throw;
    throw Error(ErrorCode::kInvalidPlan, e.what());
  }
  if (plan.tail_device < 0 || plan.tail_device >= env.devices.size()) {
    throw Error(ErrorCode::kInvalidPlan, "tail device out of range");
  }
  for (int i = 0; i < env.devices.size(); ++i) {
    if (env.devices.device(i).profile.layer_count() != env.model.size()) {
      throw Error(ErrorCode::kInvalidPlan,
                  "profile of " + env.devices.device(i).id + " does not cover the model");
    }
  }
}

LatencyReport simulate(const Environment& env, const StrategyPlan& plan) {
  validate_plan(env, plan);
  const auto volumes = make_volumes(env.model, plan.scheme);
  const int n = env.devices.size();
  LatencyReport report;
  report.breakdown.compute_ms.assign(n, 0.0);
  AccumLatencies state(n, 0.0);
  std::vector<SplitPart> producers;
  for (std::size_t l = 0; l < volumes.size(); ++l) {
    auto parts = split_volume(env.model, volumes[l], plan.decisions[l]);
    StepResult step = step_volume(env, state, volumes[l], parts, producers);
    for (int i = 0; i < n; ++i) report.breakdown.compute_ms[i] += step.compute_ms[i];
    for (const auto& [link, ms] : step.transfer_ms) report.breakdown.transfer_ms[link] += ms;
    report.ready.push_back(step.ready);
    report.per_volume.push_back(step.finish);
    state = std::move(step.finish);
    producers = std::move(parts);
  }
  report.end_to_end_ms = gather_latency(env, state, producers, volumes.back(), plan.tail_device);
  report.ips = throughput_ips(report.end_to_end_ms);
  const auto& b = report.breakdown;
  report.breakdown.max_compute_ms = *std::max_element(b.compute_ms.begin(), b.compute_ms.end());
  for (const auto& [link, ms] : b.transfer_ms) {
    report.breakdown.max_transfer_ms = std::max(report.breakdown.max_transfer_ms, ms);
  }
  return report;
}

int assign_tail(const SplitDecision& last_decision, int last_height) {
  int best = 0;
  int best_rows = -1;
  for (int i = 0; i < last_decision.device_count(); ++i) {
    const int rows = last_decision.rows_of(i, last_height).size();
    if (rows > best_rows) {
      best = i;
      best_rows = rows;
    }
  }
  return best;
}

}  // namespace distredge
