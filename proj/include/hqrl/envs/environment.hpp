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
 * @file environment.hpp
 * MaxCut, unit commitment and knapsack episodes.
 *
 * Each environment owns a dataset and the current episode. Observations
 * carry the max-abs normalized Ising Hamiltonian of the current instance
 * plus the annotation angles, which is everything an ansatz needs.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "hqrl/ansatz/ansatz.hpp"
#include "hqrl/common/random.hpp"
#include "hqrl/hamiltonians/instance_io.hpp"

namespace hqrl::envs {

using hamiltonians::Bits;
using hamiltonians::ProblemKind;

/// Discrete: the action is a variable index. MultiBinary: the action is a
/// bitmask assigning every variable at once.
enum class ActionSpace { Discrete, MultiBinary };

using Action = std::uint64_t;
using Mask = std::vector<std::uint8_t>;

struct Observation {
    hamiltonians::IsingHamiltonian ham;
    std::optional<ansatz::Annotations> annotations;
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool done = false;
    Mask action_mask;
};

struct EnvConfig {
    /// Knapsack unbalanced penalty weights.
    double lambda1 = hamiltonians::kUnbalancedLambda1;
    double lambda2 = hamiltonians::kUnbalancedLambda2;
    /// Knapsack: mask only already-selected items and score an overweight
    /// selection 0 instead of masking overweight items.
    bool soft_constraint = false;
    /// UCP equality penalty; <= 0 picks default_ucp_penalty per instance.
    double lambda_eq = 0.0;
    std::size_t ucp_steps = 10;
    bool normalize = true;
};

/// What an episode achieved, filled in when it ends.
struct EpisodeOutcome {
    double total_reward = 0.0;
    /// MaxCut: best cut / optimum. Knapsack: value / optimum. UCP: unset (0).
    /// UCP valid: every step covered its demand.
    double approximation_ratio = 0.0;
    bool optimal = false;
    bool valid = true;
    Bits selection = 0;
};

class Environment {
  public:
    virtual ~Environment() = default;

    [[nodiscard]] virtual ProblemKind kind() const = 0;
    [[nodiscard]] virtual ActionSpace action_space() const = 0;
    /// Qubits (= decision variables) of every instance.
    [[nodiscard]] virtual std::size_t num_qubits() const = 0;
    [[nodiscard]] virtual std::size_t instance_count() const = 0;

    /// Starts an episode on a uniformly drawn instance.
    StepResult reset(Rng &rng) {
        return reset_to(static_cast<std::size_t>(uniform_index(rng, instance_count())), rng);
    }
    /// Starts an episode on instance `index`. `rng` drives any in-episode
    /// sampling (UCP demands and powers).
    virtual StepResult reset_to(std::size_t index, Rng &rng) = 0;
    virtual StepResult step(Action action) = 0;

    [[nodiscard]] virtual bool done() const = 0;
    [[nodiscard]] virtual const EpisodeOutcome &outcome() const = 0;
    [[nodiscard]] virtual nlohmann::json state_json() const = 0;
    /// Inverse of state_json; the dataset must be the one the state came from.
    virtual void restore(const nlohmann::json &state) = 0;
    /// Observation, mask and done flag of the current state (reward 0).
    [[nodiscard]] virtual StepResult current() const = 0;
};

nlohmann::json to_json(const Observation &obs);
Observation observation_from_json(const nlohmann::json &j);
nlohmann::json to_json(const EpisodeOutcome &o);
EpisodeOutcome outcome_from_json(const nlohmann::json &j);

/// Throws ConfigError when the dataset does not match the environment kind
/// or is empty.
std::unique_ptr<Environment> make_environment(const hamiltonians::Dataset &ds,
                                              const EnvConfig &cfg = {});

class MaxCutEnv final : public Environment {
  public:
    explicit MaxCutEnv(hamiltonians::Dataset ds, EnvConfig cfg = {});

    ProblemKind kind() const override { return ProblemKind::MaxCut; }
    ActionSpace action_space() const override { return ActionSpace::Discrete; }
    std::size_t num_qubits() const override { return ds_.size; }
    std::size_t instance_count() const override { return ds_.graphs.size(); }
    StepResult reset_to(std::size_t index, Rng &rng) override;
    StepResult step(Action action) override;
    bool done() const override { return done_; }
    const EpisodeOutcome &outcome() const override { return outcome_; }
    nlohmann::json state_json() const override;
    void restore(const nlohmann::json &state) override;
    StepResult current() const override { return observe(0.0); }

    [[nodiscard]] Bits partition() const { return partition_; }
    [[nodiscard]] double last_cut() const { return last_cut_; }
    [[nodiscard]] double best_cut() const { return best_cut_; }
    [[nodiscard]] const hamiltonians::WeightedGraph &graph() const;

  private:
    StepResult observe(double reward) const;

    hamiltonians::Dataset ds_;
    EnvConfig cfg_;
    std::vector<hamiltonians::IsingHamiltonian> hams_;
    std::size_t index_ = 0;
    Bits partition_ = 0;
    ansatz::Annotations ann_;
    std::size_t step_ = 0;
    double last_cut_ = 0.0;
    double best_cut_ = 0.0;
    bool done_ = true;
    EpisodeOutcome outcome_;
};

class KnapsackEnv final : public Environment {
  public:
    explicit KnapsackEnv(hamiltonians::Dataset ds, EnvConfig cfg = {});

    ProblemKind kind() const override { return ProblemKind::Knapsack; }
    ActionSpace action_space() const override { return ActionSpace::Discrete; }
    std::size_t num_qubits() const override { return ds_.size; }
    std::size_t instance_count() const override { return ds_.knapsacks.size(); }
    StepResult reset_to(std::size_t index, Rng &rng) override;
    StepResult step(Action action) override;
    bool done() const override { return done_; }
    const EpisodeOutcome &outcome() const override { return outcome_; }
    nlohmann::json state_json() const override;
    void restore(const nlohmann::json &state) override;
    StepResult current() const override { return observe(0.0); }

    [[nodiscard]] Bits selected() const { return selected_; }
    [[nodiscard]] const Mask &mask() const { return mask_; }

  private:
    void recompute_mask();
    void finish();
    StepResult observe(double reward) const;

    hamiltonians::Dataset ds_;
    EnvConfig cfg_;
    std::vector<hamiltonians::IsingHamiltonian> hams_;
    std::size_t index_ = 0;
    Bits selected_ = 0;
    double weight_ = 0.0;
    ansatz::Annotations ann_;
    Mask mask_;
    std::size_t step_ = 0;
    bool done_ = true;
    EpisodeOutcome outcome_;
};

class UcpEnv final : public Environment {
  public:
    explicit UcpEnv(hamiltonians::Dataset ds, EnvConfig cfg = {});

    ProblemKind kind() const override { return ProblemKind::Ucp; }
    ActionSpace action_space() const override { return ActionSpace::MultiBinary; }
    std::size_t num_qubits() const override { return ds_.size; }
    std::size_t instance_count() const override { return ds_.ucps.size(); }
    StepResult reset_to(std::size_t index, Rng &rng) override;
    StepResult step(Action action) override;
    bool done() const override { return done_; }
    const EpisodeOutcome &outcome() const override { return outcome_; }
    nlohmann::json state_json() const override;
    void restore(const nlohmann::json &state) override;
    StepResult current() const override { return observe(0.0); }

    [[nodiscard]] const std::vector<double> &demands() const { return demands_; }
    [[nodiscard]] const std::vector<double> &powers() const { return p_; }
    [[nodiscard]] double penalty() const { return lambda_; }
    /// QUBO of the current step; reward(x) = -value(x).
    [[nodiscard]] const hamiltonians::QuboProblem &current_qubo() const { return qubo_; }
    /// Largest reward available in the current step, by enumeration.
    [[nodiscard]] double optimal_reward() const;

  private:
    void sample_powers();
    StepResult observe(double reward) const;

    hamiltonians::Dataset ds_;
    EnvConfig cfg_;
    std::size_t index_ = 0;
    Rng rng_;
    std::vector<double> demands_;
    std::vector<double> p_;
    double lambda_ = 0.0;
    hamiltonians::QuboProblem qubo_;
    hamiltonians::IsingHamiltonian ham_;
    std::size_t step_ = 0;
    bool done_ = true;
    EpisodeOutcome outcome_;
};

/// One JSON object per line: episode, step, action, reward, done.
class TraceWriter {
  public:
    explicit TraceWriter(const std::filesystem::path &path);
    void write(std::size_t episode, std::size_t step, Action action, const StepResult &r);

  private:
    std::ofstream out_;
};

/// Indices i with mask[i] != 0.
std::vector<std::size_t> allowed_actions(const Mask &mask);

} // namespace hqrl::envs
