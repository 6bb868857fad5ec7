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

#include "distredge/bench.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>

#include "distredge/error.hpp"
#include "distredge/report.hpp"

namespace distredge {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base / p;
}

ModelDesc load_model_checked(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIoError, "model file not found: " + path.string());
  }
  return load_model(path);
}

}  // namespace

BenchConfig parse_bench_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  BenchConfig config;
  try {
    const ModelDesc shared_model =
        load_model_checked(resolve(base_dir, doc.at("model").get<std::string>()));
    for (const auto& e : doc.at("envs")) {
      BenchEnv bench_env;
      bench_env.name = e.at("name").get<std::string>();
      bench_env.env.model =
          e.contains("model")
              ? load_model_checked(resolve(base_dir, e.at("model").get<std::string>()))
              : shared_model;
      const auto& devices = e.at("devices");
      if (devices.is_string()) {
        const auto path = resolve(base_dir, devices.get<std::string>());
        if (!std::filesystem::exists(path)) {
          throw Error(ErrorCode::kIoError, "device-set file not found: " + path.string());
        }
        bench_env.env.devices = load_device_set(path, bench_env.env.model);
      } else {
        bench_env.env.devices = parse_device_set(devices, bench_env.env.model, base_dir);
      }
      config.envs.push_back(std::move(bench_env));
    }
    config.methods = doc.value("methods", std::vector<std::string>{});
    config.seeds = doc.value("seeds", std::vector<std::uint64_t>{});
    config.options.alpha = doc.value("alpha", config.options.alpha);
    config.options.decision_count = doc.value("decisionCount", config.options.decision_count);
    config.options.granularity = doc.value("granularity", config.options.granularity);
    if (doc.contains("hyper")) config.options.hyper = parse_hyperparams(doc.at("hyper"));
    if (doc.contains("scheme")) {
      config.options.scheme = PartitionScheme{doc.at("scheme").get<std::vector<int>>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return config;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  return parse_bench_config(read_json_file(path), path.parent_path());
}

int bench_threads() {
  if (const char* env = std::getenv("DISTREDGE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<BenchRow> run_bench(const BenchConfig& config, int threads) {
  std::vector<BenchRow> rows;
  for (const auto& e : config.envs) {
    for (const auto& m : config.methods) {
      for (const auto seed : config.seeds) rows.push_back(BenchRow{e.name, m, seed, 0.0, 0.0, {}});
    }
  }
  const std::size_t per_env = config.methods.size() * config.seeds.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      BenchRow& row = rows[k];
      const Environment& env = config.envs[k / per_env].env;
      MethodOptions options = config.options;
      options.seed = row.seed;
      try {
        const MethodResult result = run_method(row.method, env, options);
        row.end_to_end_ms = result.end_to_end_ms;
        row.ips = throughput_ips(result.end_to_end_ms);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const int workers = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(1, rows.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string results_csv(const std::vector<BenchRow>& rows) {
  std::string out = "env,method,seed,T_ms,ips\n";
  for (const auto& r : rows) {
    if (r.error.empty()) {
      out += fmt::format("{},{},{},{},{}\n", r.env, r.method, r.seed, format_ms(r.end_to_end_ms),
                         format_ms(r.ips));
    } else {
      out += fmt::format("{},{},{},nan,nan\n", r.env, r.method, r.seed);
    }
  }
  return out;
}

std::string summary_csv(const BenchConfig& config, const std::vector<BenchRow>& rows) {
  std::string out = "env,method,baseline,speedup\n";
  if (config.methods.empty()) return out;
  const std::string& lead = config.methods.front();
  auto mean_ips = [&](const std::string& env, const std::string& method) -> std::optional<double> {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : rows) {
      if (r.env != env || r.method != method) continue;
      if (!r.error.empty()) return std::nullopt;
      sum += r.ips;
      ++count;
    }
    if (count == 0) return std::nullopt;
    return sum / count;
  };
  for (const auto& e : config.envs) {
    const auto lead_ips = mean_ips(e.name, lead);
    for (std::size_t m = 1; m < config.methods.size(); ++m) {
      const auto base_ips = mean_ips(e.name, config.methods[m]);
      const std::string speedup =
          lead_ips && base_ips ? fmt::format("{:.6f}", *lead_ips / *base_ips) : "nan";
      out += fmt::format("{},{},{},{}\n", e.name, lead, config.methods[m], speedup);
    }
  }
  return out;
}

}  // namespace distredge
