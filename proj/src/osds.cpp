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

#include "distredge/osds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "distredge/baselines.hpp"
#include "distredge/error.hpp"

namespace distredge {

SplitDecision map_action(std::span<const Real> raw, int height) {
  std::vector<double> sorted(raw.begin(), raw.end());
  std::sort(sorted.begin(), sorted.end());
  SplitDecision decision;
  decision.cuts.reserve(sorted.size());
  for (double x : sorted) {
    const double clamped = std::clamp(x, -1.0, 1.0);
    const auto cut = static_cast<int>(std::lround(height * (clamped + 1.0) / 2.0));
    decision.cuts.push_back(std::clamp(cut, 0, height));
  }
  return decision;
}

double reward(int step, int volume_count, std::optional<double> end_to_end_ms) {
  if (step < volume_count) return 0.0;
  if (!end_to_end_ms) {
    throw Error(ErrorCode::kMissingTerminalLatency, "terminal step needs the end-to-end latency");
  }
  return 1.0 / *end_to_end_ms;
}

double exploration_epsilon(int episode, double delta_epsilon) {
  const double x = episode * delta_epsilon;
  return std::clamp(1.0 - x * x, 0.0, 1.0);
}

SplitEnvironment::SplitEnvironment(const Environment& env, PartitionScheme scheme)
    : env_(env), scheme_(std::move(scheme)), volumes_(make_volumes(env.model, scheme_)) {
  latency_scale_ = offload_latency(env);
  for (const auto& layer : env.model.layers) {
    max_height_ = std::max(max_height_, static_cast<double>(layer.out_height()));
    max_depth_ = std::max(max_depth_, static_cast<double>(output_shape(layer).depth));
    max_filter_ = std::max(max_filter_, static_cast<double>(layer.filter));
    max_stride_ = std::max(max_stride_, static_cast<double>(layer.stride));
  }
}

VectorX<Real> SplitEnvironment::make_state(const AccumLatencies& prev, int volume) const {
  const int n = device_count();
  VectorX<Real> s(state_dim());
  for (int i = 0; i < n; ++i) s[i] = static_cast<Real>(prev[i] / latency_scale_);
  const auto& last = env_.model.layers[volumes_[volume].end - 1];
  s[n] = static_cast<Real>(last.out_height() / max_height_);
  s[n + 1] = static_cast<Real>(output_shape(last).depth / max_depth_);
  s[n + 2] = static_cast<Real>(last.filter / max_filter_);
  s[n + 3] = static_cast<Real>(last.stride / max_stride_);
  return s;
}

SplitEnvironment::Step SplitEnvironment::step(const AccumLatencies& prev, int volume,
                                              const SplitDecision& decision,
                                              std::span<const SplitPart> producers) const {
  Step out;
  out.parts = split_volume(env_.model, volumes_[volume], decision);
  out.finish = step_volume(env_, prev, volumes_[volume], out.parts, producers).finish;
  return out;
}

double SplitEnvironment::end_to_end(const AccumLatencies& last,
                                    std::span<const SplitPart> last_parts,
                                    int tail_device) const {
  return gather_latency(env_, last, last_parts, volumes_.back(), tail_device);
}

namespace {

void check_actor(const Mlp<Real>& actor, const SplitEnvironment& senv) {
  if (actor.input_dim() != senv.state_dim() || actor.output_dim() != senv.action_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "actor expects " + std::to_string(actor.input_dim()) + " state features and " +
                    std::to_string(actor.output_dim()) + " actions; environment has " +
                    std::to_string(senv.state_dim()) + " and " +
                    std::to_string(senv.action_dim()));
  }
}

SplitDecision decide(const VectorX<Real>& raw, const SplitEnvironment& senv, int volume) {
  if (senv.device_count() == 1) return SplitDecision{};
  return map_action(std::span<const Real>(raw.data(), static_cast<std::size_t>(raw.size())),
                    senv.volumes()[volume].out_height());
}

struct Episode {
  std::vector<SplitDecision> decisions;
  double end_to_end_ms = 0.0;
};

// Evaluates a fixed decision sequence.
double evaluate(const SplitEnvironment& senv, const std::vector<SplitDecision>& decisions) {
  AccumLatencies state(senv.device_count(), 0.0);
  std::vector<SplitPart> producers;
  for (int l = 0; l < senv.volume_count(); ++l) {
    auto step = senv.step(state, l, decisions[l], producers);
    state = std::move(step.finish);
    producers = std::move(step.parts);
  }
  const int tail = assign_tail(decisions.back(), senv.volumes().back().out_height());
  return senv.end_to_end(state, producers, tail);
}

StrategyPlan make_plan(const SplitEnvironment& senv, std::vector<SplitDecision> decisions) {
  StrategyPlan plan;
  plan.scheme = senv.scheme();
  plan.tail_device = assign_tail(decisions.back(), senv.volumes().back().out_height());
  plan.decisions = std::move(decisions);
  return plan;
}

// Episode loop shared by training and fine-tuning.
OsdsResult run_training(const SplitEnvironment& senv, DdpgAgent& agent, int episodes,
                        double delta_epsilon, const OsdsOptions& options,
                        std::optional<Episode> initial_best) {
  const Hyperparams& hyper = options.hyper;
  const int n = senv.device_count();
  const int volumes = senv.volume_count();
  Rng explore = Rng::substream(options.seed, "explore");
  Rng noise = Rng::substream(options.seed, "noise");
  Rng replay_rng = Rng::substream(options.seed, "replay");
  ReplayBuffer<Real> buffer(hyper.buffer_capacity, senv.state_dim(), senv.action_dim());

  OsdsResult result;
  result.best_ms = std::numeric_limits<double>::infinity();
  result.best_actor = agent.actor();
  result.best_critic = agent.critic();
  if (initial_best) {
    result.best_ms = initial_best->end_to_end_ms;
    result.best_plan = make_plan(senv, initial_best->decisions);
  }

  for (int episode = 1; episode <= episodes; ++episode) {
    const double epsilon = exploration_epsilon(episode, delta_epsilon);
    AccumLatencies state_t(n, 0.0);
    std::vector<SplitPart> producers;
    std::vector<SplitDecision> decisions;
    double end_to_end_ms = 0.0;
    for (int l = 0; l < volumes; ++l) {
      const VectorX<Real> state = senv.make_state(state_t, l);
      VectorX<Real> raw = agent.act(state);
      if (explore.uniform() < epsilon) {
        raw += gaussian_noise<Real>(senv.action_dim(), hyper.noise_variance, noise);
        raw = raw.cwiseMax(Real(-1)).cwiseMin(Real(1));
      }
      SplitDecision decision = decide(raw, senv, l);
      auto step = senv.step(state_t, l, decision, producers);
      const bool terminal = l + 1 == volumes;
      std::optional<double> t_end;
      if (terminal) {
        const int tail = assign_tail(decision, senv.volumes()[l].out_height());
        end_to_end_ms = senv.end_to_end(step.finish, step.parts, tail);
        t_end = end_to_end_ms;
      }
      const double r = reward(l + 1, volumes, t_end);
      const VectorX<Real> next_state = senv.make_state(step.finish, terminal ? l : l + 1);
      decisions.push_back(std::move(decision));
      state_t = std::move(step.finish);
      producers = std::move(step.parts);
      if (n > 1) {
        buffer.push(state, raw, static_cast<Real>(r), next_state, terminal);
        agent.update(buffer.sample(hyper.batch_size, replay_rng));
      }
    }
    if (end_to_end_ms < result.best_ms) {
      result.best_ms = end_to_end_ms;
      result.best_episode = episode;
      result.best_plan = make_plan(senv, decisions);
      result.best_actor = agent.actor();
      result.best_critic = agent.critic();
    }
    if (options.keep_episode_decisions) result.episode_decisions.push_back(decisions);
    result.trace.push_back({episode, epsilon, end_to_end_ms, result.best_ms});
  }
  return result;
}

}  // namespace

StrategyPlan SplitEnvironment::rollout(const Mlp<Real>& actor, double* end_to_end_ms) const {
  check_actor(actor, *this);
  AccumLatencies state(device_count(), 0.0);
  std::vector<SplitPart> producers;
  std::vector<SplitDecision> decisions;
  for (int l = 0; l < volume_count(); ++l) {
    const VectorX<Real> raw = actor.forward(MatrixX<Real>(make_state(state, l))).col(0);
    decisions.push_back(decide(raw, *this, l));
    auto s = step(state, l, decisions.back(), producers);
    state = std::move(s.finish);
    producers = std::move(s.parts);
  }
  StrategyPlan plan = make_plan(*this, std::move(decisions));
  if (end_to_end_ms) *end_to_end_ms = end_to_end(state, producers, plan.tail_device);
  return plan;
}

OsdsResult osds_train(const Environment& env, const PartitionScheme& scheme,
                      const OsdsOptions& options) {
  options.hyper.validate();
  const SplitEnvironment senv(env, scheme);
  DdpgAgent agent(senv.state_dim(), senv.action_dim(), options.hyper, options.seed);
  return run_training(senv, agent, options.hyper.max_episodes, options.hyper.delta_epsilon,
                      options, std::nullopt);
}

StrategyPlan infer_split(const Mlp<Real>& actor, const Environment& env,
                         const PartitionScheme& scheme, double* end_to_end_ms) {
  const SplitEnvironment senv(env, scheme);
  return senv.rollout(actor, end_to_end_ms);
}

OsdsResult finetune(const Mlp<Real>& actor, const Mlp<Real>& critic, const Environment& env,
                    const PartitionScheme& scheme, int episodes, const OsdsOptions& options,
                    const std::vector<SplitDecision>* prior) {
  options.hyper.validate();
  if (episodes < 0) throw Error(ErrorCode::kInvalidArgument, "episodes must be >= 0");
  const SplitEnvironment senv(env, scheme);
  Episode start;
  senv.rollout(actor, &start.end_to_end_ms);
  start.decisions = senv.rollout(actor).decisions;
  if (prior) {
    const double prior_ms = evaluate(senv, *prior);
    if (prior_ms < start.end_to_end_ms) start = Episode{*prior, prior_ms};
  }
  DdpgAgent agent(actor, critic, options.hyper);
  // Same shape as the full schedule: exploration ends after 1/16 of the run.
  const double base_span = options.hyper.delta_epsilon > 0.0
                               ? 1.0 / (options.hyper.delta_epsilon * options.hyper.max_episodes)
                               : 0.0;
  const double delta = episodes > 0 && base_span > 0.0 ? 1.0 / (base_span * episodes) : 0.0;
  OsdsResult result = run_training(senv, agent, episodes, delta, options, start);
  if (result.best_episode == 0) {
    result.best_actor = actor;
    result.best_critic = critic;
  }
  return result;
}

}  // namespace distredge
