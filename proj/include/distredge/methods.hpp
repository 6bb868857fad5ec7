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
#include <optional>
#include <string>
#include <vector>

#include "distredge/baselines.hpp"
#include "distredge/osds.hpp"

namespace distredge {

// Planning methods reachable by name from the command line and benchmarks:
//   distredge   LC-PSS scheme + DRL split decisions
//   equal       one fused block, equal rows per device
//   ratio       LC-PSS scheme, rows by fitted compute capability
//   ratio-link  as `ratio`, with per-row link cost folded in
//   lbl         one volume per layer, compute-capability rows
//   lbl-link    as `lbl`, with per-row link cost folded in
//   offload     whole model on the fastest device
//   oracle      LC-PSS scheme, exhaustive split search
const std::vector<std::string>& method_names();
bool is_method(const std::string& name);

struct MethodOptions {
  double alpha = 0.75;
  int decision_count = 100;
  Hyperparams hyper;
  std::uint64_t seed = 0;
  int granularity = 1;
  std::uint64_t search_cap = kDefaultSearchCap;
  // Overrides the LC-PSS scheme where a method would use it.
  std::optional<PartitionScheme> scheme;
};

struct MethodResult {
  StrategyPlan plan;
  double end_to_end_ms = 0.0;
  // Present for `distredge` only.
  std::optional<OsdsResult> training;
};

// LC-PSS on the environment's device count (or `options.scheme` when set).
PartitionScheme planned_scheme(const Environment& env, const MethodOptions& options);

// Throws InvalidArgument for unknown names.
MethodResult run_method(const std::string& method, const Environment& env,
                        const MethodOptions& options);

}  // namespace distredge
