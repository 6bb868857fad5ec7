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

#include "distredge/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "distredge/error.hpp"

namespace distredge {

CapabilityModel fit_capabilities(const Environment& env) {
  const int n = env.devices.size();
  CapabilityModel caps;
  for (int i = 0; i < n; ++i) {
    const auto& profile = env.devices.device(i).profile;
    double sxy = 0.0;
    double sxx = 0.0;
    for (int l = 0; l < profile.layer_count() && l < env.model.size(); ++l) {
      for (const auto& [h, ms] : profile.table(l)) {
        const double x = static_cast<double>(op_count(env.model.layers[l], h)) / 1e6;
        sxy += x * ms;
        sxx += x * x;
      }
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    caps.mmac_per_ms.push_back(slope > 0.0 ? 1.0 / slope : 1.0);

    double mbps = 0.0;
    int links = 0;
    for (int j = DeviceSet::kRequester; j < n; ++j) {
      if (j == i) continue;
      mbps += env.devices.link(j, i).mbps;
      ++links;
    }
    caps.inbound_mbps.push_back(mbps / links);
  }
  return caps;
}

SplitDecision equal_split(int height, int device_count) {
  return proportional_split(height, std::vector<double>(device_count, 1.0));
}

SplitDecision proportional_split(int height, std::span<const double> weights) {
  const int n = static_cast<int>(weights.size());
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<int> rows(n, 0);
  std::vector<double> remainder(n, 0.0);
  int assigned = 0;
  for (int i = 0; i < n; ++i) {
    const double exact = total > 0.0 ? height * weights[i] / total : double(height) / n;
    rows[i] = static_cast<int>(std::floor(exact));
    remainder[i] = exact - rows[i];
    assigned += rows[i];
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (int k = 0; assigned < height; k = (k + 1) % n, ++assigned) ++rows[order[k]];
  SplitDecision decision;
  int cut = 0;
  for (int i = 0; i + 1 < n; ++i) {
    cut += rows[i];
    decision.cuts.push_back(cut);
  }
  return decision;
}

SplitDecision single_device_split(int height, int device_count, int device) {
  SplitDecision decision;
  for (int i = 0; i + 1 < device_count; ++i) decision.cuts.push_back(i < device ? 0 : height);
  return decision;
}

namespace {

StrategyPlan finish_plan(const Environment& env, PartitionScheme scheme,
                         std::vector<SplitDecision> decisions) {
  StrategyPlan plan;
  plan.scheme = std::move(scheme);
  plan.decisions = std::move(decisions);
  const auto volumes = make_volumes(env.model, plan.scheme);
  plan.tail_device = assign_tail(plan.decisions.back(), volumes.back().out_height());
  return plan;
}

}  // namespace

StrategyPlan equal_split_plan(const Environment& env, const PartitionScheme& scheme) {
  std::vector<SplitDecision> decisions;
  for (const auto& v : make_volumes(env.model, scheme)) {
    decisions.push_back(equal_split(v.out_height(), env.devices.size()));
  }
  return finish_plan(env, scheme, std::move(decisions));
}

StrategyPlan linear_ratio_plan(const Environment& env, const PartitionScheme& scheme,
                               bool link_aware) {
  const CapabilityModel caps = fit_capabilities(env);
  const int n = env.devices.size();
  std::vector<SplitDecision> decisions;
  for (const auto& v : make_volumes(env.model, scheme)) {
    std::vector<double> weights(n);
    double mmac_per_row = 0.0;
    for (int k = v.begin; k < v.end; ++k) {
      mmac_per_row += static_cast<double>(op_count(env.model.layers[k], env.model.layers[k].out_height())) / 1e6;
    }
    mmac_per_row /= v.out_height();
    const double in_bytes_per_row =
        static_cast<double>(tensor_bytes(v.input, env.model.bytes_per_element)) / v.out_height();
    for (int i = 0; i < n; ++i) {
      double cost = mmac_per_row / caps.mmac_per_ms[i];
      if (link_aware) cost += in_bytes_per_row * 8.0 / (caps.inbound_mbps[i] * 1e3);
      weights[i] = 1.0 / cost;
    }
    decisions.push_back(proportional_split(v.out_height(), weights));
  }
  return finish_plan(env, scheme, std::move(decisions));
}

StrategyPlan layer_by_layer_plan(const Environment& env, bool link_aware) {
  return linear_ratio_plan(env, layer_by_layer_scheme(env.model), link_aware);
}

StrategyPlan offload_plan(const Environment& env) {
  const int n = env.devices.size();
  int best = 0;
  double best_ms = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int l = 0; l < env.model.size(); ++l) {
      total += compute_latency(env.devices.device(i).profile, l, env.model.layers[l].out_height());
    }
    if (total < best_ms) {
      best_ms = total;
      best = i;
    }
  }
  const int height = env.model.layers.back().out_height();
  return finish_plan(env, single_volume_scheme(), {single_device_split(height, n, best)});
}

double offload_latency(const Environment& env) {
  return simulate(env, offload_plan(env)).end_to_end_ms;
}

std::vector<int> cut_grid(int height, int granularity) {
  if (granularity < 1) throw Error(ErrorCode::kInvalidArgument, "granularity must be >= 1");
  std::vector<int> grid;
  for (int x = 0; x < height; x += granularity) grid.push_back(x);
  grid.push_back(height);
  return grid;
}

namespace {

// Non-decreasing sequences of length k over g values: C(g + k - 1, k).
std::uint64_t multiset_count(std::uint64_t g, int k) {
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) c = c * static_cast<long double>(g + i - 1) / i;
  if (c >= static_cast<long double>(UINT64_MAX)) return UINT64_MAX;
  return static_cast<std::uint64_t>(std::llround(c));
}

void enumerate_cuts(const std::vector<int>& grid, int k, std::vector<SplitDecision>& out) {
  std::vector<int> idx(k, 0);
  while (true) {
    SplitDecision d;
    for (int i : idx) d.cuts.push_back(grid[i]);
    out.push_back(std::move(d));
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == static_cast<int>(grid.size()) - 1) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[pos];
  }
}

struct SplitSearch {
  const Environment& env;
  const std::vector<LayerVolume>& volumes;
  std::vector<std::vector<SplitDecision>> options;
  std::vector<std::vector<std::vector<SplitPart>>> parts;  // [volume][option]
  std::vector<int> chosen;
  std::vector<int> best_choice;
  double best_ms = std::numeric_limits<double>::infinity();
  std::uint64_t evaluated = 0;

  void run(std::size_t l, const AccumLatencies& prev, std::span<const SplitPart> producers) {
    for (std::size_t o = 0; o < options[l].size(); ++o) {
      chosen[l] = static_cast<int>(o);
      const auto& p = parts[l][o];
      StepResult step = step_volume(env, prev, volumes[l], p, producers);
      if (l + 1 < volumes.size()) {
        run(l + 1, step.finish, p);
        continue;
      }
      ++evaluated;
      const int tail = assign_tail(options[l][o], volumes[l].out_height());
      const double t = gather_latency(env, step.finish, p, volumes[l], tail);
      if (t < best_ms) {
        best_ms = t;
        best_choice = chosen;
      }
    }
  }
};

}  // namespace

std::uint64_t split_search_size(const Environment& env, const PartitionScheme& scheme,
                                int granularity) {
  const int k = env.devices.size() - 1;
  std::uint64_t total = 1;
  for (const auto& v : make_volumes(env.model, scheme)) {
    const std::uint64_t per = multiset_count(cut_grid(v.out_height(), granularity).size(), k);
    if (per != 0 && total > UINT64_MAX / per) return UINT64_MAX;
    total *= per;
  }
  return total;
}

BruteForceSplitResult brute_force_split(const Environment& env, const PartitionScheme& scheme,
                                        int granularity, std::uint64_t cap) {
  const std::uint64_t size = split_search_size(env, scheme, granularity);
  if (size > cap) {
    throw Error(ErrorCode::kSearchSpaceTooLarge,
                "search size " + std::to_string(size) + " exceeds cap " + std::to_string(cap));
  }
  const auto volumes = make_volumes(env.model, scheme);
  const int n = env.devices.size();
  SplitSearch search{env, volumes, {}, {}, {}, {}};
  for (const auto& v : volumes) {
    std::vector<SplitDecision> opts;
    enumerate_cuts(cut_grid(v.out_height(), granularity), n - 1, opts);
    std::vector<std::vector<SplitPart>> vparts;
    vparts.reserve(opts.size());
    for (const auto& d : opts) vparts.push_back(split_volume(env.model, v, d));
    search.options.push_back(std::move(opts));
    search.parts.push_back(std::move(vparts));
  }
  search.chosen.assign(volumes.size(), 0);
  search.run(0, AccumLatencies(n, 0.0), {});

  BruteForceSplitResult result;
  result.plan.scheme = scheme;
  for (std::size_t l = 0; l < volumes.size(); ++l) {
    result.plan.decisions.push_back(search.options[l][search.best_choice[l]]);
  }
  result.plan.tail_device = assign_tail(result.plan.decisions.back(), volumes.back().out_height());
  result.end_to_end_ms = search.best_ms;
  result.evaluated = search.evaluated;
  return result;
}

BruteForcePartitionResult brute_force_partition(const ModelDesc& model, double alpha,
                                                const RandomDecisionSet& decision_set,
                                                int max_layers) {
  if (model.size() > max_layers) {
    throw Error(ErrorCode::kSearchSpaceTooLarge,
                "model has " + std::to_string(model.size()) + " layers; partition oracle cap is " +
                    std::to_string(max_layers));
  }
  const ScoreParams params = ScoreParams::for_model(model, alpha);
  BruteForcePartitionResult result;
  result.mean_score = std::numeric_limits<double>::infinity();
  const std::uint32_t combos = 1u << (model.size() - 1);
  for (std::uint32_t mask = 0; mask < combos; ++mask) {
    PartitionScheme scheme;
    for (int j = 2; j <= model.size(); ++j) {
      if (mask & (1u << (j - 2))) scheme.starts.push_back(j);
    }
    const double score = mean_score(model, scheme, decision_set, params);
    ++result.evaluated;
    if (score < result.mean_score) {
      result.mean_score = score;
      result.scheme = std::move(scheme);
    }
  }
  return result;
}

}  // namespace distredge
