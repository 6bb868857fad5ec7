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

#include "distredge/methods.hpp"

#include <algorithm>

#include "distredge/error.hpp"
#include "distredge/partitioner.hpp"

namespace distredge {

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"distredge", "equal",    "ratio",   "ratio-link",
                                              "lbl",       "lbl-link", "offload", "oracle"};
  return names;
}

bool is_method(const std::string& name) {
  const auto& names = method_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

PartitionScheme planned_scheme(const Environment& env, const MethodOptions& options) {
  if (options.scheme) {
    validate_scheme(env.model, *options.scheme);
    return *options.scheme;
  }
  LcpssOptions lc;
  lc.alpha = options.alpha;
  lc.decision_count = options.decision_count;
  lc.seed = options.seed;
  lc.device_count = env.devices.size();
  return lcpss(env.model, lc).scheme;
}

MethodResult run_method(const std::string& method, const Environment& env,
                        const MethodOptions& options) {
  MethodResult result;
  if (method == "distredge") {
    OsdsOptions osds;
    osds.hyper = options.hyper;
    osds.seed = options.seed;
    OsdsResult trained = osds_train(env, planned_scheme(env, options), osds);
    result.plan = trained.best_plan;
    result.training = std::move(trained);
  } else if (method == "equal") {
    result.plan = equal_split_plan(env, options.scheme.value_or(single_volume_scheme()));
  } else if (method == "ratio" || method == "ratio-link") {
    result.plan = linear_ratio_plan(env, planned_scheme(env, options), method == "ratio-link");
  } else if (method == "lbl" || method == "lbl-link") {
    result.plan = layer_by_layer_plan(env, method == "lbl-link");
  } else if (method == "offload") {
    result.plan = offload_plan(env);
  } else if (method == "oracle") {
    result.plan = brute_force_split(env, planned_scheme(env, options), options.granularity,
                                    options.search_cap)
                      .plan;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown method '" + method + "'");
  }
  // Every method is scored by the same simulator.
  result.end_to_end_ms = simulate(env, result.plan).end_to_end_ms;
  return result;
}

}  // namespace distredge
