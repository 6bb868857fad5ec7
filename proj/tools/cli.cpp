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

#include "cli.hpp"

#include <filesystem>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "distredge/bench.hpp"
#include "distredge/error.hpp"
#include "distredge/methods.hpp"
#include "distredge/partitioner.hpp"
#include "distredge/report.hpp"

namespace distredge::cli {

namespace fs = std::filesystem;

namespace {

// Raised for argument combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by every command that builds an environment.
struct EnvArgs {
  std::string model;
  std::string devices;
};

void add_env_options(CLI::App* cmd, EnvArgs& a) {
  cmd->add_option("--model", a.model, "Model description (JSON)")->required();
  cmd->add_option("--devices", a.devices, "Device set (JSON)")->required();
}

Environment load_env(const EnvArgs& a) {
  Environment env;
  env.model = load_model(a.model);
  env.devices = load_device_set(a.devices, env.model);
  return env;
}

// Options that feed MethodOptions.
struct PlanArgs {
  double alpha = 0.75;
  int decisions = 100;
  std::uint64_t seed = 1;
  std::optional<int> episodes;
  std::string hyper;
  std::string scheme;
  int granularity = 1;
  std::uint64_t cap = kDefaultSearchCap;
};

void add_plan_options(CLI::App* cmd, PlanArgs& a) {
  cmd->add_option("--alpha", a.alpha, "Transmission weight of the partition score")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--decisions", a.decisions, "Random decisions per partition score")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "Seed for every random stream");
  cmd->add_option("--episodes", a.episodes, "Training episodes (overrides the hyperparameters)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--hyper", a.hyper, "Training hyperparameters (JSON)");
  cmd->add_option("--scheme", a.scheme, "Volume start layers, e.g. 1,4,9 (skips the search)");
  cmd->add_option("--granularity", a.granularity, "Row granularity of the exhaustive search")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cap", a.cap, "Largest exhaustive search allowed");
}

PartitionScheme parse_scheme_list(const std::string& text) {
  PartitionScheme scheme{{}};
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      scheme.starts.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--scheme expects comma-separated layer numbers, got '" + text + "'");
    }
  }
  return scheme;
}

MethodOptions method_options(const PlanArgs& a) {
  MethodOptions o;
  o.alpha = a.alpha;
  o.decision_count = a.decisions;
  o.seed = a.seed;
  o.granularity = a.granularity;
  o.search_cap = a.cap;
  if (!a.hyper.empty()) o.hyper = parse_hyperparams(read_json_file(a.hyper));
  if (a.episodes) o.hyper.max_episodes = *a.episodes;
  if (!a.scheme.empty()) o.scheme = parse_scheme_list(a.scheme);
  return o;
}

void print_latency(std::ostream& out, double end_to_end_ms) {
  out << fmt::format("T_ms={} ips={}\n", format_ms(end_to_end_ms),
                     format_ms(throughput_ips(end_to_end_ms)));
}

fs::path sibling(const std::string& anchor, const std::string& name) {
  return fs::path(anchor).parent_path() / name;
}

// --- plan ---------------------------------------------------------------

struct PlanCmd {
  EnvArgs env;
  PlanArgs plan;
  std::string method = "distredge";
  std::string out;
  std::string trace;
  std::string checkpoint;
};

int cmd_plan(const PlanCmd& c, std::ostream& out) {
  const Environment env = load_env(c.env);
  const MethodResult result = run_method(c.method, env, method_options(c.plan));
  write_text_file(c.out, plan_to_json(env, result.plan, result.end_to_end_ms).dump(2) + "\n");
  if (result.training) {
    const auto& t = *result.training;
    write_text_file(c.trace.empty() ? sibling(c.out, "trace.csv") : fs::path(c.trace),
                    trace_csv(t.trace));
    save_checkpoint(c.checkpoint.empty() ? sibling(c.out, "checkpoint.json")
                                         : fs::path(c.checkpoint),
                    t.best_actor, t.best_critic);
  }
  print_latency(out, result.end_to_end_ms);
  return kExitOk;
}

// --- simulate -----------------------------------------------------------

struct SimulateCmd {
  EnvArgs env;
  std::string plan;
  std::string out;
  bool csv = false;
};

int cmd_simulate(const SimulateCmd& c, std::ostream& out) {
  const Environment env = load_env(c.env);
  const StrategyPlan plan = load_plan(c.plan, env);
  const LatencyReport report = simulate(env, plan);
  write_text_file(c.out, report_to_json(env, report).dump(2) + "\n");
  if (c.csv) write_text_file(fs::path(c.out).replace_extension(".csv"), report_csv(env, report));
  print_latency(out, report.end_to_end_ms);
  return kExitOk;
}

// --- bench --------------------------------------------------------------

struct BenchCmd {
  std::string config;
  std::string out_dir;
};

int cmd_bench(const BenchCmd& c, std::ostream& out, std::ostream& err) {
  const BenchConfig config = load_bench_config(c.config);
  if (config.methods.empty()) throw UsageError("benchmark lists no methods");
  if (config.seeds.empty()) throw UsageError("benchmark lists no seeds");
  for (const auto& m : config.methods) {
    if (!is_method(m)) throw UsageError("unknown method '" + m + "'");
  }
  fs::create_directories(c.out_dir);
  const auto rows = run_bench(config, bench_threads());
  write_text_file(fs::path(c.out_dir) / "results.csv", results_csv(rows));
  write_text_file(fs::path(c.out_dir) / "summary.csv", summary_csv(config, rows));
  int failed = 0;
  for (const auto& r : rows) {
    if (r.error.empty()) continue;
    ++failed;
    err << fmt::format("cell {}/{}/{} failed: {}\n", r.env, r.method, r.seed, r.error);
  }
  out << fmt::format("{} cells, {} failed\n", rows.size(), failed);
  return failed == 0 ? kExitOk : kExitFailure;
}

// --- oracle -------------------------------------------------------------

struct OracleCmd {
  EnvArgs env;
  PlanArgs plan;
  std::vector<std::string> methods{"distredge", "equal", "ratio", "offload"};
  bool partition = false;
  int max_layers = 8;
  std::string out;
};

int cmd_oracle(const OracleCmd& c, std::ostream& out) {
  const Environment env = load_env(c.env);
  for (const auto& m : c.methods) {
    if (!is_method(m)) throw UsageError("unknown method '" + m + "'");
  }
  MethodOptions options = method_options(c.plan);
  const PartitionScheme scheme = planned_scheme(env, options);
  options.scheme = scheme;

  const auto size = split_search_size(env, scheme, c.plan.granularity);
  const BruteForceSplitResult best =
      brute_force_split(env, scheme, c.plan.granularity, c.plan.cap);
  nlohmann::json doc{{"searchSize", size},
                     {"granularity", c.plan.granularity},
                     {"optimum", plan_to_json(env, best.plan, best.end_to_end_ms)}};
  out << fmt::format("optimum T_ms={} over {} decision combinations\n",
                     format_ms(best.end_to_end_ms), best.evaluated);
  out << fmt::format("{:<12} {:>14} {:>10}\n", "method", "T_ms", "gap_pct");
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& m : c.methods) {
    const MethodResult r = run_method(m, env, options);
    const double gap = 100.0 * (r.end_to_end_ms / best.end_to_end_ms - 1.0);
    gaps.push_back({{"method", m}, {"T_ms", r.end_to_end_ms}, {"gapPct", gap}});
    out << fmt::format("{:<12} {:>14} {:>10}\n", m, format_ms(r.end_to_end_ms),
                       fmt::format("{:.3f}", gap));
  }
  doc["gaps"] = gaps;

  if (c.partition) {
    const RandomDecisionSet set(env.model, env.devices.size(), c.plan.decisions, c.plan.seed);
    const auto exhaustive = brute_force_partition(env.model, c.plan.alpha, set, c.max_layers);
    MethodOptions search = options;
    search.scheme.reset();
    const PartitionScheme greedy_scheme = planned_scheme(env, search);
    const double greedy = mean_score(env.model, greedy_scheme, set,
                                     ScoreParams::for_model(env.model, c.plan.alpha));
    doc["partition"] = {{"optimumScheme", exhaustive.scheme.starts},
                        {"optimumScore", exhaustive.mean_score},
                        {"scheme", greedy_scheme.starts},
                        {"score", greedy},
                        {"ratio", greedy / exhaustive.mean_score}};
    out << fmt::format("partition score {} vs optimum {} (ratio {:.4f})\n", greedy,
                       exhaustive.mean_score, greedy / exhaustive.mean_score);
  }
  if (!c.out.empty()) write_text_file(c.out, doc.dump(2) + "\n");
  return kExitOk;
}

// --- profile-synth ------------------------------------------------------

struct SynthCmd {
  std::string model;
  std::string id = "device";
  std::string kind = "staircase";
  SynthParams params;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_profile_synth(SynthCmd c, std::ostream& out) {
  const ModelDesc model = load_model(c.model);
  c.params.kind = parse_synth_kind(c.kind);
  const DeviceProfile profile = synth_profile(model, c.id, c.params, c.seed);
  save_profile_csv(profile, c.out);
  double total = 0.0;
  for (int l = 0; l < model.size(); ++l) {
    total += compute_latency(profile, l, model.layers[l].out_height());
  }
  out << fmt::format("{}: {} layers, full-model compute {} ms\n", c.id, model.size(),
                     format_ms(total));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed CNN inference planner for heterogeneous edge devices", "distredge"};
  app.require_subcommand(1);

  PlanCmd plan;
  auto* plan_app = app.add_subcommand("plan", "Choose a partition scheme and split decisions");
  add_env_options(plan_app, plan.env);
  add_plan_options(plan_app, plan.plan);
  plan_app->add_option("--method", plan.method, "Planning method")
      ->check(CLI::IsMember(method_names()));
  plan_app->add_option("--out", plan.out, "Plan file to write")->required();
  plan_app->add_option("--trace", plan.trace, "Training trace CSV (default: trace.csv beside --out)");
  plan_app->add_option("--checkpoint", plan.checkpoint,
                       "Network checkpoint (default: checkpoint.json beside --out)");

  SimulateCmd sim;
  auto* sim_app = app.add_subcommand("simulate", "Simulate a plan and write a latency report");
  add_env_options(sim_app, sim.env);
  sim_app->add_option("--plan", sim.plan, "Plan file")->required();
  sim_app->add_option("--out", sim.out, "Report file to write (JSON)")->required();
  sim_app->add_flag("--csv", sim.csv, "Also write the per-volume CSV beside the report");

  BenchCmd bench;
  auto* bench_app = app.add_subcommand("bench", "Run every (env, method, seed) cell of a suite");
  bench_app->add_option("--config", bench.config, "Benchmark file (JSON)")->required();
  bench_app->add_option("--out-dir", bench.out_dir, "Directory for results.csv and summary.csv")
      ->required();

  OracleCmd oracle;
  auto* oracle_app = app.add_subcommand("oracle", "Exhaustive optimum and gaps of other methods");
  add_env_options(oracle_app, oracle.env);
  add_plan_options(oracle_app, oracle.plan);
  oracle_app->add_option("--methods", oracle.methods, "Methods to compare")->delimiter(',');
  oracle_app->add_flag("--partition", oracle.partition,
                       "Also search every partition scheme exhaustively");
  oracle_app->add_option("--max-layers", oracle.max_layers,
                         "Largest model the partition search accepts");
  oracle_app->add_option("--out", oracle.out, "Oracle report to write (JSON)");

  SynthCmd synth;
  auto* synth_app = app.add_subcommand("profile-synth", "Generate a synthetic latency profile");
  synth_app->add_option("--model", synth.model, "Model description (JSON)")->required();
  synth_app->add_option("--out", synth.out, "Profile CSV to write")->required();
  synth_app->add_option("--id", synth.id, "Device id");
  synth_app->add_option("--kind", synth.kind, "Profile shape")
      ->check(CLI::IsMember({"staircase", "linear", "knee"}));
  synth_app->add_option("--slope", synth.params.slope_ms_per_mmac, "ms per million MACs")
      ->check(CLI::PositiveNumber);
  synth_app->add_option("--period", synth.params.period, "Rows per staircase step")
      ->check(CLI::PositiveNumber);
  synth_app->add_option("--jump", synth.params.jump_ms, "Extra ms per staircase step");
  synth_app->add_option("--base", synth.params.base_ms, "Fixed ms per non-empty layer");
  synth_app->add_option("--knee", synth.params.knee_rows, "Rows below which cost stays flat");
  synth_app->add_option("--noise", synth.params.noise, "Relative multiplicative noise");
  synth_app->add_option("--seed", synth.seed, "Noise seed");

  std::vector<std::string> argv_store{"distredge"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*plan_app) return cmd_plan(plan, out);
    if (*sim_app) return cmd_simulate(sim, out);
    if (*bench_app) return cmd_bench(bench, out, err);
    if (*oracle_app) return cmd_oracle(oracle, out);
    if (*synth_app) return cmd_profile_synth(synth, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace distredge::cli
