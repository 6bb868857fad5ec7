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

#include <gtest/gtest.h>

#include "distredge/partitioner.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace distredge {
namespace {

using testing::conv_json;
using testing::make_model;
using testing::pool_json;

ModelDesc toy() {
  return make_model(32, 32, 4, {conv_json(8), pool_json(), conv_json(8), conv_json(8, 5, 2, 2)});
}

TEST(Partitioner, AlphaOneUsesOnlyTransmission) {
  const ModelDesc m = toy();
  const ScoreParams p = ScoreParams::for_model(m, 1.0);
  const PartitionScheme s = layer_by_layer_scheme(m);
  const RandomDecisionSet set = sample_decisions(m, 3, 5, 1);
  for (int i = 0; i < set.count(); ++i) {
    const auto d = set.decisions(m, s, i);
    EXPECT_NEAR(partition_score(m, s, d, p),
                static_cast<double>(transmission_amount(m, s, d)) / p.transmission_ref, 1e-12);
  }
}

TEST(Partitioner, AlphaZeroUsesOnlyOperations) {
  const ModelDesc m = toy();
  const ScoreParams p = ScoreParams::for_model(m, 0.0);
  const PartitionScheme s{{1, 3}};
  const RandomDecisionSet set = sample_decisions(m, 3, 5, 1);
  for (int i = 0; i < set.count(); ++i) {
    const auto d = set.decisions(m, s, i);
    EXPECT_NEAR(partition_score(m, s, d, p),
                static_cast<double>(operations_amount(m, s, d)) / p.operations_ref, 1e-12);
  }
}

TEST(Partitioner, SingleDeviceAlphaZeroScoresOne) {
  const ModelDesc m = make_model(32, 32, 4, {conv_json(8), pool_json(), conv_json(8)});
  const ScoreParams p = ScoreParams::for_model(m, 0.0);
  const RandomDecisionSet set = sample_decisions(m, 1, 4, 9);
  for (const PartitionScheme& s :
       {single_volume_scheme(), layer_by_layer_scheme(m), PartitionScheme{{1, 2}}}) {
    EXPECT_DOUBLE_EQ(mean_score(m, s, set, p), 1.0);
    for (const auto& d : set.decisions(m, s, 0)) EXPECT_TRUE(d.cuts.empty());
  }
}

TEST(Partitioner, MeanOfOneIsTheScore) {
  const ModelDesc m = toy();
  const ScoreParams p = ScoreParams::for_model(m, 0.75);
  const RandomDecisionSet set = sample_decisions(m, 4, 1, 5);
  const PartitionScheme s{{1, 2, 4}};
  EXPECT_DOUBLE_EQ(mean_score(m, s, set, p), partition_score(m, s, set.decisions(m, s, 0), p));
}

TEST(Partitioner, SamplingIsDeterministic) {
  const ModelDesc m = toy();
  const RandomDecisionSet a = sample_decisions(m, 4, 100, 42);
  const RandomDecisionSet b = sample_decisions(m, 4, 100, 42);
  const PartitionScheme s{{1, 2}};
  for (int i = 0; i < 100; ++i) {
    const auto da = a.decisions(m, s, i);
    const auto db = b.decisions(m, s, i);
    ASSERT_EQ(da.size(), db.size());
    for (std::size_t l = 0; l < da.size(); ++l) EXPECT_EQ(da[l].cuts, db[l].cuts);
  }
}

TEST(Partitioner, CutsStayWithinHeight) {
  const ModelDesc m = make_model(1, 1, 1, {conv_json(1, 1, 1, 0)});
  const RandomDecisionSet set = sample_decisions(m, 2, 200, 3);
  bool seen[2] = {false, false};
  for (int i = 0; i < set.count(); ++i) {
    const auto d = set.decisions(m, single_volume_scheme(), i);
    ASSERT_EQ(d.front().cuts.size(), 1u);
    const int c = d.front().cuts.front();
    ASSERT_TRUE(c == 0 || c == 1);
    seen[c] = true;
  }
  EXPECT_TRUE(seen[0] && seen[1]);
}

TEST(Partitioner, SampledDecisionsAreValid) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const ModelDesc m = testing::random_chain(rng, 6);
    const int n = testing::rand_int(rng, 1, 5);
    const RandomDecisionSet set = sample_decisions(m, n, 10, trial);
    const PartitionScheme s = testing::random_scheme(rng, m);
    const auto volumes = make_volumes(m, s);
    for (int i = 0; i < set.count(); ++i) {
      const auto d = set.decisions(m, s, i);
      ASSERT_EQ(d.size(), volumes.size());
      for (std::size_t l = 0; l < d.size(); ++l) {
        EXPECT_NO_THROW(validate_decision(d[l], volumes[l].out_height(), n));
      }
    }
  }
}

TEST(Partitioner, SingleLayerModelIsOneVolume) {
  const ModelDesc m = make_model(16, 16, 3, {conv_json(4)});
  LcpssOptions opts;
  const LcpssResult r = lcpss(m, opts);
  EXPECT_EQ(r.scheme.starts, (std::vector<int>{1}));
}

TEST(Partitioner, AlphaZeroSplitsTwoConvToyPerLayer) {
  const ModelDesc m = make_model(32, 32, 4, {conv_json(8), conv_json(8)});
  LcpssOptions opts;
  opts.alpha = 0.0;
  opts.seed = 1;
  for (Acceptance acc : {Acceptance::kStrictImprovement, Acceptance::kNoWorse}) {
    opts.acceptance = acc;
    EXPECT_EQ(lcpss(m, opts).scheme.starts, (std::vector<int>{1, 2}));
  }
}

TEST(Partitioner, SchemeIsValidAndDeterministic) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelDesc m = testing::random_chain(rng, 7);
    LcpssOptions opts;
    opts.alpha = rng.uniform();
    opts.decision_count = 20;
    opts.seed = trial;
    opts.device_count = testing::rand_int(rng, 1, 4);
    const LcpssResult a = lcpss(m, opts);
    const LcpssResult b = lcpss(m, opts);
    EXPECT_NO_THROW(validate_scheme(m, a.scheme));
    EXPECT_EQ(a.scheme.starts, b.scheme.starts);
    EXPECT_DOUBLE_EQ(a.mean_score, b.mean_score);
    EXPECT_LE(a.outer_loops, m.size());
  }
}

TEST(Partitioner, Vgg16VolumeCountsFollowAlpha) {
  const ModelDesc vgg = load_model(testing::data_dir() / "models" / "vgg16.model.json");
  LcpssOptions opts;
  opts.seed = 1;
  opts.alpha = 0.0;
  EXPECT_GE(lcpss(vgg, opts).scheme.volume_count(), 14);
  opts.alpha = 1.0;
  EXPECT_LE(lcpss(vgg, opts).scheme.volume_count(), 3);
}

}  // namespace
}  // namespace distredge
