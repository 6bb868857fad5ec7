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

#include "distredge/ddpg.hpp"

#include <fstream>

namespace distredge {

void Hyperparams::validate() const {
  if (max_episodes < 0) throw Error(ErrorCode::kInvalidArgument, "Max_ep must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "gamma in (0,1]");
  if (batch_size < 1) throw Error(ErrorCode::kInvalidArgument, "N_b must be >= 1");
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "tau in (0,1]");
  if (noise_variance < 0.0) throw Error(ErrorCode::kInvalidArgument, "sigma^2 must be >= 0");
  if (delta_epsilon < 0.0) throw Error(ErrorCode::kInvalidArgument, "delta epsilon must be >= 0");
  if (buffer_capacity < 1) throw Error(ErrorCode::kInvalidArgument, "buffer capacity >= 1");
  if (lr_actor <= 0.0 || lr_critic <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "learning rates must be positive");
  }
}

Hyperparams parse_hyperparams(const nlohmann::json& doc, Hyperparams h) {
  try {
    h.max_episodes = doc.value("maxEpisodes", h.max_episodes);
    h.delta_epsilon = doc.value("deltaEpsilon", h.delta_epsilon);
    h.noise_variance = doc.value("noiseVariance", h.noise_variance);
    h.batch_size = doc.value("batchSize", h.batch_size);
    h.gamma = doc.value("gamma", h.gamma);
    h.lr_actor = doc.value("lrActor", h.lr_actor);
    h.lr_critic = doc.value("lrCritic", h.lr_critic);
    h.tau = doc.value("tau", h.tau);
    h.buffer_capacity = doc.value("bufferCapacity", h.buffer_capacity);
    h.actor_hidden = doc.value("actorHidden", h.actor_hidden);
    h.critic_hidden = doc.value("criticHidden", h.critic_hidden);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  h.validate();
  return h;
}

nlohmann::json hyperparams_to_json(const Hyperparams& h) {
  return {{"maxEpisodes", h.max_episodes}, {"deltaEpsilon", h.delta_epsilon},
          {"noiseVariance", h.noise_variance}, {"batchSize", h.batch_size},
          {"gamma", h.gamma}, {"lrActor", h.lr_actor}, {"lrCritic", h.lr_critic},
          {"tau", h.tau}, {"bufferCapacity", h.buffer_capacity},
          {"actorHidden", h.actor_hidden}, {"criticHidden", h.critic_hidden}};
}

Mlp<Real> make_actor(int state_dim, int action_dim, const std::vector<int>& hidden) {
  std::vector<int> dims{state_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(action_dim);
  return Mlp<Real>(dims, OutputActivation::kTanh);
}

Mlp<Real> make_critic(int state_dim, int action_dim, const std::vector<int>& hidden) {
  std::vector<int> dims{state_dim + action_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  return Mlp<Real>(dims, OutputActivation::kIdentity);
}

DdpgAgent::DdpgAgent(int state_dim, int action_dim, const Hyperparams& hyper, std::uint64_t seed)
    : hyper_(hyper),
      actor_(make_actor(state_dim, action_dim, hyper.actor_hidden)),
      critic_(make_critic(state_dim, action_dim, hyper.critic_hidden)) {
  hyper_.validate();
  Rng init = Rng::substream(seed, "init");
  actor_.initialize(init);
  critic_.initialize(init);
  actor_target_ = actor_;
  critic_target_ = critic_;
}

DdpgAgent::DdpgAgent(Mlp<Real> actor, Mlp<Real> critic, const Hyperparams& hyper)
    : hyper_(hyper), actor_(std::move(actor)), critic_(std::move(critic)) {
  hyper_.validate();
  if (critic_.input_dim() != actor_.input_dim() + actor_.output_dim() ||
      critic_.output_dim() != 1) {
    throw Error(ErrorCode::kDimensionMismatch, "actor and critic shapes do not pair up");
  }
  actor_target_ = actor_;
  critic_target_ = critic_;
}

DdpgAgent::Vector DdpgAgent::act(const Vector& state) const {
  return actor_.forward(Matrix(state)).col(0);
}

void DdpgAgent::update(const ReplayBuffer<Real>::Batch& batch) {
  // Bootstrapped targets; terminal transitions keep only the reward.
  const Matrix next_actions = actor_target_.forward(batch.next_states);
  Matrix next_input(batch.next_states.rows() + next_actions.rows(), batch.next_states.cols());
  next_input << batch.next_states, next_actions;
  const Matrix next_q = critic_target_.forward(next_input);
  const auto gamma = static_cast<Real>(hyper_.gamma);
  const Vector targets =
      batch.rewards +
      gamma * (Vector::Ones(batch.terminal.size()) - batch.terminal).cwiseProduct(
                  next_q.row(0).transpose());

  Vector critic_grads;
  critic_loss_gradients(critic_, batch.states, batch.actions, targets, critic_grads);
  adam_step(critic_.params(), critic_grads, critic_adam_, hyper_.lr_critic);

  Vector actor_grads;
  actor_objective_gradients(actor_, critic_, batch.states, actor_grads);
  adam_step(actor_.params(), actor_grads, actor_adam_, hyper_.lr_actor);

  soft_update(critic_target_, critic_, hyper_.tau);
  soft_update(actor_target_, actor_, hyper_.tau);
}

nlohmann::json mlp_to_json(const Mlp<Real>& net) {
  std::vector<double> params(net.params().data(), net.params().data() + net.params().size());
  return {{"format", "distredge-mlp"},
          {"version", 1},
          {"dims", net.dims()},
          {"output", net.output_activation() == OutputActivation::kTanh ? "tanh" : "identity"},
          {"params", params}};
}

Mlp<Real> mlp_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format") != "distredge-mlp" || doc.at("version") != 1) {
      throw Error(ErrorCode::kParseError, "unsupported network format");
    }
    const auto output = doc.at("output").get<std::string>() == "tanh" ? OutputActivation::kTanh
                                                                      : OutputActivation::kIdentity;
    Mlp<Real> net(doc.at("dims").get<std::vector<int>>(), output);
    const auto params = doc.at("params").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(params.size()) != net.params().size()) {
      throw Error(ErrorCode::kDimensionMismatch, "parameter count does not match dims");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      net.params()[static_cast<Eigen::Index>(i)] = static_cast<Real>(params[i]);
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Mlp<Real>& actor,
                     const Mlp<Real>& critic) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  const nlohmann::json doc{{"format", "distredge-checkpoint"},
                           {"version", 1},
                           {"actor", mlp_to_json(actor)},
                           {"critic", mlp_to_json(critic)}};
  out << doc.dump() << '\n';
}

std::pair<Mlp<Real>, Mlp<Real>> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
    if (doc.at("format") != "distredge-checkpoint" || doc.at("version") != 1) {
      throw Error(ErrorCode::kParseError, "unsupported checkpoint format");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return {mlp_from_json(doc["actor"]), mlp_from_json(doc["critic"])};
}

}  // namespace distredge
