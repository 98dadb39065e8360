// Copyright 2026 The hqrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file trainer.hpp
 * QPG (REINFORCE) and QDQN (deep Q-learning) training loops over a circuit
 * model, plus greedy / sampled policy evaluation.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hqrl/agents/model.hpp"
#include "hqrl/agents/optim.hpp"
#include "hqrl/envs/environment.hpp"

namespace hqrl::agents {

enum class Algorithm { Qpg, Qdqn };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

struct AgentConfig {
    Algorithm algorithm = Algorithm::Qpg;
    ModelSpec model;
    /// One trainable output scaling per observable (QPG only).
    bool trainable_scalings = false;
    /// Softmax inverse temperature, or the shared output scaling.
    Schedule beta = Schedule::constant(1.0);
    double lr_circuit = 1e-2;
    double lr_scaling = 1e-1;
    double gamma = 0.99;
    /// Initial circuit parameters uniform on [-init_range, init_range].
    double init_range = std::numbers::pi / 8.0;

    // QPG
    bool baseline = true;
    double baseline_decay = 0.99;
    /// Episodes per update. On a multi-binary environment every step is its
    /// own one-step episode and this counts environment episodes instead.
    std::size_t batch_episodes = 10;

    // QDQN
    std::size_t replay_capacity = 10000;
    std::size_t batch_size = 32;
    std::size_t target_sync = 100; ///< in updates
    std::size_t learning_starts = 32;
    std::size_t train_every = 1;
    Schedule epsilon = Schedule::linear(1.0, 0.01, 10000);
};

/// Everything needed to act: spec, parameters and the temperature schedule.
struct Model {
    Algorithm algorithm = Algorithm::Qpg;
    ModelSpec spec;
    std::vector<double> theta;
    std::vector<double> scalings;
    Schedule beta = Schedule::constant(1.0);

    [[nodiscard]] nlohmann::json to_json() const;
    static Model from_json(const nlohmann::json &j);
};

enum class ActionMode { Sample, Greedy };

/// QDQN: epsilon-greedy on Q. QPG: a draw from the policy (Sample) or its
/// most likely action (Greedy).
envs::Action choose_action(const Model &model, const envs::StepResult &state, double beta,
                           double eps, ActionMode mode, Rng &rng);
/// Same, reusing head values already computed for this state.
envs::Action choose_action(const Model &model, const HeadValues &hv, const envs::Mask &mask,
                           double beta, double eps, ActionMode mode, Rng &rng);

struct EpisodeRecord {
    std::uint64_t end_step = 0; ///< steps completed when the episode ended
    std::size_t length = 0;
    envs::EpisodeOutcome outcome;
};

class Trainer {
  public:
    Trainer(AgentConfig cfg, envs::Environment &env, std::uint64_t seed);

    /// One environment step, followed by any learning it triggers.
    void step();
    void run(std::uint64_t steps);

    [[nodiscard]] std::uint64_t steps_done() const { return step_; }
    [[nodiscard]] std::uint64_t updates() const { return updates_; }
    [[nodiscard]] const std::vector<double> &step_rewards() const { return step_rewards_; }
    [[nodiscard]] const std::vector<EpisodeRecord> &episodes() const { return episodes_; }
    [[nodiscard]] double epsilon() const;
    [[nodiscard]] double beta() const { return cfg_.beta.value(step_); }
    [[nodiscard]] const Model &model() const { return model_; }
    [[nodiscard]] const std::vector<double> &target_theta() const { return target_theta_; }
    [[nodiscard]] const AgentConfig &config() const { return cfg_; }

    /// Full state, enough to continue bit-exactly.
    [[nodiscard]] nlohmann::json checkpoint() const;
    /// Loads a checkpoint taken from a trainer with the same configuration
    /// and dataset.
    void restore(const nlohmann::json &ckpt);

  private:
    void qpg_step();
    void qdqn_step();
    void qdqn_learn();
    void qpg_accumulate(const LogProbGradient &g, double ret);
    void qpg_maybe_update(bool episode_ended);
    void end_step(const envs::StepResult &res, std::size_t action);

    AgentConfig cfg_;
    envs::Environment &env_;
    bool bandit_ = false;
    Rng rng_;
    Rng env_rng_;
    Model model_;
    std::vector<double> target_theta_;
    Adam adam_theta_;
    Adam adam_scale_;
    ReplayBuffer replay_;
    envs::StepResult current_;
    std::uint64_t step_ = 0;
    std::uint64_t updates_ = 0;
    std::size_t episode_length_ = 0;

    // QPG episode and batch accumulators.
    std::vector<LogProbGradient> ep_grads_;
    std::vector<double> ep_rewards_;
    std::vector<double> batch_theta_;
    std::vector<double> batch_scale_;
    std::size_t batch_count_ = 0;
    std::size_t batch_samples_ = 0;
    double baseline_ = 0.0;
    bool baseline_set_ = false;

    std::vector<double> step_rewards_;
    std::vector<EpisodeRecord> episodes_;
};

struct EvalSummary {
    std::size_t episodes = 0;
    double mean_reward = 0.0; ///< mean episode return
    double mean_ratio = 0.0;
    double p_optimal = 0.0;
    double p_valid = 0.0;
};

/// Runs `episodes_per_instance` episodes on every instance with eps = 0 and
/// the final temperature.
EvalSummary evaluate_policy(const Model &model, envs::Environment &env,
                            std::size_t episodes_per_instance, std::uint64_t seed,
                            ActionMode mode = ActionMode::Sample);

} // namespace hqrl::agents
