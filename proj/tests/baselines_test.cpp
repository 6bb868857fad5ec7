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

#include <functional>

#include <gtest/gtest.h>

#include "distredge/baselines.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace distredge {
namespace {

using testing::conv_json;
using testing::linear_env;
using testing::make_model;
using testing::pool_json;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

TEST(Baselines, EqualSplitExamples) {
  EXPECT_EQ(equal_split(20, 4).cuts, (std::vector<int>{5, 10, 15}));
  EXPECT_EQ(equal_split(10, 4).cuts, (std::vector<int>{3, 6, 8}));
  EXPECT_TRUE(equal_split(10, 1).cuts.empty());
}

TEST(Baselines, ProportionalSplitExamples) {
  const std::vector<double> two_to_one{2.0, 1.0};
  EXPECT_EQ(proportional_split(30, two_to_one).cuts, (std::vector<int>{20}));
  const std::vector<double> same{3.0, 3.0, 3.0};
  EXPECT_EQ(proportional_split(31, same), equal_split(31, 3));
}

TEST(Baselines, LinearRatioFollowsFittedCapabilities) {
  const ModelDesc m = make_model(30, 30, 2, {conv_json(4, 1, 1, 0)});
  // Device 0 is twice as fast per row, so it gets two thirds of the rows.
  const Environment env = linear_env(m, {0.5, 1.0}, 100.0, 0.0);
  const StrategyPlan plan = linear_ratio_plan(env, single_volume_scheme());
  EXPECT_EQ(plan.decisions.front().cuts, (std::vector<int>{20}));
  const Environment same = linear_env(m, {1.0, 1.0}, 100.0, 0.0);
  EXPECT_EQ(linear_ratio_plan(same, single_volume_scheme()).decisions.front(), equal_split(30, 2));
}

TEST(Baselines, LayerByLayerStructure) {
  const ModelDesc m = make_model(32, 32, 3, {conv_json(4), pool_json(), conv_json(4), conv_json(4)});
  const Environment env = linear_env(m, {0.1, 0.2, 0.3}, 2.0, 2.0);
  const StrategyPlan plan = layer_by_layer_plan(env);
  EXPECT_EQ(plan.scheme.volume_count(), 4);
  // With link costs comparable to compute, fusing beats a synchronization
  // point per layer for the same cuts.
  StrategyPlan fused = linear_ratio_plan(env, single_volume_scheme());
  StrategyPlan unfused = fused;
  unfused.scheme = layer_by_layer_scheme(m);
  unfused.decisions.clear();
  for (const auto& v : make_volumes(m, unfused.scheme)) {
    unfused.decisions.push_back(
        proportional_split(v.out_height(), fit_capabilities(env).mmac_per_ms));
  }
  EXPECT_GE(simulate(env, unfused).end_to_end_ms, simulate(env, fused).end_to_end_ms);
  const Environment one = linear_env(m, {0.1}, 20.0, 0.5);
  EXPECT_NEAR(simulate(one, layer_by_layer_plan(one)).end_to_end_ms, offload_latency(one), 1e-9);
}

TEST(Baselines, OffloadPicksFastestWithLowestIndexOnTies) {
  const ModelDesc m = make_model(16, 16, 2, {conv_json(4)});
  EXPECT_EQ(offload_plan(linear_env(m, {1.0, 0.5}, 100.0, 0.0)).tail_device, 1);
  EXPECT_EQ(offload_plan(linear_env(m, {0.5, 0.5}, 100.0, 0.0)).tail_device, 0);
  const Environment env = linear_env(m, {0.7, 0.4, 0.9}, 100.0, 0.3);
  EXPECT_NEAR(offload_latency(env), simulate(env, offload_plan(env)).end_to_end_ms, 1e-12);
}

TEST(Baselines, CutGridAndSearchSize) {
  EXPECT_EQ(cut_grid(10, 1).size(), 11u);
  EXPECT_EQ(cut_grid(10, 4), (std::vector<int>{0, 4, 8, 10}));
  EXPECT_EQ(code_of([] { cut_grid(10, 0); }), ErrorCode::kInvalidArgument);
  const ModelDesc m = make_model(16, 16, 2, {conv_json(4), conv_json(4)});
  const Environment env = linear_env(m, {1.0, 1.0, 1.0}, 100.0, 0.0);
  // Three devices: non-decreasing pairs over 17 cut points, per volume.
  EXPECT_EQ(split_search_size(env, PartitionScheme{{1, 2}}, 1), 153u * 153u);
  EXPECT_EQ(split_search_size(env, single_volume_scheme(), 2), 45u);
}

TEST(Baselines, BruteForceRefusesLargeSearches) {
  const Environment env = testing::load_environment("vgg16.model.json", "group-db.devices.json");
  try {
    brute_force_split(env, layer_by_layer_scheme(env.model));
    FAIL() << "search was not refused";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSearchSpaceTooLarge);
    EXPECT_NE(std::string(e.what()).find(std::to_string(kDefaultSearchCap)), std::string::npos);
  }
}

TEST(Baselines, BruteForceSingleDeviceIsOffload) {
  const ModelDesc m = make_model(16, 16, 2, {conv_json(4), conv_json(4)});
  const Environment env = linear_env(m, {0.4}, 30.0, 0.2);
  const auto r = brute_force_split(env, PartitionScheme{{1, 2}});
  EXPECT_NEAR(r.end_to_end_ms, offload_latency(env), 1e-9);
  EXPECT_EQ(r.evaluated, 1u);
}

TEST(Baselines, BruteForceEqualCutOnSymmetricDevices) {
  const ModelDesc m = make_model(16, 16, 2, {conv_json(4, 1, 1, 0)});
  const Environment env = linear_env(m, {1.0, 1.0}, 1e9, 0.0);
  const auto r = brute_force_split(env, single_volume_scheme());
  EXPECT_NEAR(r.plan.decisions.front().cuts.front(), 8, 1);
  EXPECT_EQ(r.evaluated, 17u);
}

TEST(Baselines, BruteForceBeatsEveryPolicy) {
  Rng rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const ModelDesc m = testing::random_chain(rng, 3);
    const int n = testing::rand_int(rng, 2, 3);
    std::vector<double> rates;
    for (int i = 0; i < n; ++i) rates.push_back(0.01 + 0.2 * rng.uniform());
    const Environment env = linear_env(m, rates, 5.0 + 50.0 * rng.uniform(), rng.uniform());
    const PartitionScheme scheme = single_volume_scheme();
    const double best = brute_force_split(env, scheme).end_to_end_ms;
    for (const StrategyPlan& p :
         {equal_split_plan(env, scheme), linear_ratio_plan(env, scheme),
          linear_ratio_plan(env, scheme, true), offload_plan(env)}) {
      EXPECT_LE(best, simulate(env, p).end_to_end_ms + 1e-9) << "trial " << trial;
    }
  }
}

TEST(Baselines, PartitionOracleEnumeratesEverySchemeAndRespectsLimit) {
  const ModelDesc one = make_model(16, 16, 2, {conv_json(4)});
  const auto single = brute_force_partition(one, 0.5, sample_decisions(one, 3, 4, 1));
  EXPECT_EQ(single.evaluated, 1u);
  EXPECT_EQ(single.scheme, single_volume_scheme());
  std::vector<nlohmann::json> layers(8, conv_json(4));
  const ModelDesc eight = make_model(32, 32, 2, layers);
  const RandomDecisionSet set = sample_decisions(eight, 3, 8, 2);
  const auto r = brute_force_partition(eight, 0.5, set);
  EXPECT_EQ(r.evaluated, 128u);
  EXPECT_NEAR(r.mean_score, mean_score(eight, r.scheme, set, ScoreParams::for_model(eight, 0.5)),
              1e-12);
  std::vector<nlohmann::json> nine(9, conv_json(4));
  const ModelDesc big = make_model(32, 32, 2, nine);
  EXPECT_EQ(code_of([&] { brute_force_partition(big, 0.5, sample_decisions(big, 3, 2, 1)); }),
            ErrorCode::kSearchSpaceTooLarge);
}

}  // namespace
}  // namespace distredge
