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
#include <vector>

#include "json.hpp"

#include "distredge/methods.hpp"

namespace distredge {

struct BenchEnv {
  std::string name;
  Environment env;
};

// Benchmark file:
//   {model, envs:[{name, devices: path | inline device set, model?}],
//    methods, alpha?, decisionCount?, hyper?, seeds, scheme?, granularity?}
// Paths are relative to the file's directory.
struct BenchConfig {
  std::vector<BenchEnv> envs;
  std::vector<std::string> methods;
  std::vector<std::uint64_t> seeds;
  MethodOptions options;  // seed is overwritten per cell
};

BenchConfig parse_bench_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
BenchConfig load_bench_config(const std::filesystem::path& path);

struct BenchRow {
  std::string env;
  std::string method;
  std::uint64_t seed = 0;
  double end_to_end_ms = 0.0;
  double ips = 0.0;
  std::string error;  // empty on success
};

// DISTREDGE_THREADS when set to a positive integer, else the hardware
// concurrency (at least 1).
int bench_threads();

// Runs every (env, method, seed) cell on up to `threads` workers. A failing
// cell is recorded in its row and the rest still run. Rows come back in the
// config's (env, method, seed) order whatever the completion order.
std::vector<BenchRow> run_bench(const BenchConfig& config, int threads);

// `env,method,seed,T_ms,ips`; failed cells carry `nan`.
std::string results_csv(const std::vector<BenchRow>& rows);

// `env,method,baseline,speedup`: mean IPS of the first method over the mean
// IPS of every other method, per env.
std::string summary_csv(const BenchConfig& config, const std::vector<BenchRow>& rows);

}  // namespace distredge
