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
#include "hqrl/envs/environment.hpp"

#include <algorithm>
#include <cmath>

#include "hqrl/common/error.hpp"

namespace hqrl::envs {

namespace hm = hamiltonians;

namespace {

hm::IsingHamiltonian prepare(const hm::IsingHamiltonian &ham, const EnvConfig &cfg) {
    return cfg.normalize ? ham.normalized() : ham;
}

void require_dataset(const hm::Dataset &ds, ProblemKind kind) {
    HQRL_REQUIRE(ds.kind == kind, ConfigError,
                 "dataset holds " + std::string(hm::to_string(ds.kind)) + " instances, expected " +
                     std::string(hm::to_string(kind)));
    HQRL_REQUIRE(ds.count() > 0, ConfigError, "empty dataset");
    HQRL_REQUIRE(ds.size >= 1 && ds.size <= 63, ConfigError, "instance size out of range");
}

void fill_optima(hm::Dataset &ds) {
    if (ds.optima.size() == ds.count()) {
        return;
    }
    ds.optima.clear();
    for (const auto &g : ds.graphs) {
        const auto bf = hm::brute_force(hm::maxcut_ising(g));
        ds.optima.push_back(hm::cut_value(g, bf.x));
    }
    for (const auto &k : ds.knapsacks) {
        ds.optima.push_back(hm::knapsack_optimum(k).value);
    }
}

nlohmann::json mask_json(const Mask &m) {
    auto j = nlohmann::json::array();
    for (auto b : m) {
        j.push_back(static_cast<int>(b));
    }
    return j;
}

} // namespace

std::vector<std::size_t> allowed_actions(const Mask &mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] != 0) {
            out.push_back(i);
        }
    }
    return out;
}

// ---------------------------------------------------------------- MaxCut

MaxCutEnv::MaxCutEnv(hm::Dataset ds, EnvConfig cfg) : ds_(std::move(ds)), cfg_(cfg) {
    require_dataset(ds_, ProblemKind::MaxCut);
    fill_optima(ds_);
    for (const auto &g : ds_.graphs) {
        HQRL_REQUIRE(g.num_nodes() == ds_.size, DimensionError, "graph size differs from dataset");
        hams_.push_back(prepare(hm::maxcut_ising(g), cfg_));
    }
}

const hm::WeightedGraph &MaxCutEnv::graph() const { return ds_.graphs[index_]; }

StepResult MaxCutEnv::reset_to(std::size_t index, Rng & /*rng*/) {
    HQRL_REQUIRE(index < instance_count(), IndexError, "instance index out of range");
    index_ = index;
    partition_ = 0;
    ann_ = ansatz::all_unassigned(ds_.size);
    step_ = 0;
    last_cut_ = 0.0;
    best_cut_ = 0.0;
    done_ = false;
    outcome_ = {};
    return observe(0.0);
}

StepResult MaxCutEnv::step(Action action) {
    HQRL_REQUIRE(!done_, ContractViolation, "step on a finished episode");
    HQRL_REQUIRE(action < ds_.size, IndexError, "node index out of range");
    HQRL_REQUIRE(hm::bit(partition_, action) == 0, ContractViolation,
                 "node " + std::to_string(action) + " is already assigned");
    partition_ |= Bits{1} << action;
    ann_[action] = 0.0;
    ++step_;
    const double cut = hm::cut_value(graph(), partition_);
    const double reward = cut - last_cut_;
    last_cut_ = cut;
    best_cut_ = std::max(best_cut_, cut);
    outcome_.total_reward += reward;
    const Bits full = ds_.size == 64 ? ~Bits{0} : (Bits{1} << ds_.size) - 1;
    done_ = reward <= 0.0 || partition_ == full;
    if (done_) {
        const double opt = ds_.optima[index_];
        outcome_.approximation_ratio = opt > 0.0 ? best_cut_ / opt : 1.0;
        outcome_.optimal = best_cut_ >= opt * (1.0 - 1e-9);
        outcome_.selection = partition_;
    }
    return observe(reward);
}

StepResult MaxCutEnv::observe(double reward) const {
    StepResult r;
    r.observation.ham = hams_[index_];
    r.observation.annotations = ann_;
    r.reward = reward;
    r.done = done_;
    r.action_mask.assign(ds_.size, 0);
    for (std::size_t i = 0; i < ds_.size; ++i) {
        r.action_mask[i] = hm::bit(partition_, i) == 0 ? 1 : 0;
    }
    return r;
}

nlohmann::json MaxCutEnv::state_json() const {
    return {{"kind", "maxcut"},   {"instance", index_},  {"partition", partition_},
            {"annotations", ann_}, {"step", step_},      {"last_cut", last_cut_},
            {"best_cut", best_cut_}, {"done", done_}, {"outcome", to_json(outcome_)}};
}

void MaxCutEnv::restore(const nlohmann::json &st) {
    HQRL_REQUIRE(st.at("kind") == "maxcut", ConfigError, "state is not a maxcut state");
    index_ = st.at("instance").get<std::size_t>();
    HQRL_REQUIRE(index_ < instance_count(), IndexError, "instance index out of range");
    partition_ = st.at("partition").get<Bits>();
    ann_ = st.at("annotations").get<ansatz::Annotations>();
    step_ = st.at("step").get<std::size_t>();
    last_cut_ = st.at("last_cut").get<double>();
    best_cut_ = st.at("best_cut").get<double>();
    done_ = st.at("done").get<bool>();
    outcome_ = outcome_from_json(st.at("outcome"));
}

// ---------------------------------------------------------------- Knapsack

KnapsackEnv::KnapsackEnv(hm::Dataset ds, EnvConfig cfg) : ds_(std::move(ds)), cfg_(cfg) {
    require_dataset(ds_, ProblemKind::Knapsack);
    fill_optima(ds_);
    for (const auto &k : ds_.knapsacks) {
        HQRL_REQUIRE(k.size() == ds_.size, DimensionError, "instance size differs from dataset");
        hams_.push_back(
            prepare(hm::qubo_to_ising(hm::knapsack_qubo_unbalanced(k, cfg_.lambda1, cfg_.lambda2)),
                    cfg_));
    }
}

void KnapsackEnv::recompute_mask() {
    const auto &inst = ds_.knapsacks[index_];
    mask_.assign(ds_.size, 0);
    for (std::size_t i = 0; i < ds_.size; ++i) {
        const bool free = hm::bit(selected_, i) == 0;
        const bool fits = cfg_.soft_constraint || weight_ + inst.weights[i] <= inst.capacity;
        mask_[i] = free && fits ? 1 : 0;
    }
}

void KnapsackEnv::finish() {
    done_ = true;
    const auto &inst = ds_.knapsacks[index_];
    const auto ev = hm::evaluate_knapsack(inst, selected_);
    const double opt = ds_.optima[index_];
    outcome_.valid = ev.valid;
    outcome_.selection = selected_;
    outcome_.total_reward = ev.valid ? ev.objective : 0.0;
    outcome_.approximation_ratio = opt > 0.0 ? outcome_.total_reward / opt : 1.0;
    outcome_.optimal = ev.valid && ev.objective >= opt - 1e-9 * std::max(1.0, opt);
}

StepResult KnapsackEnv::reset_to(std::size_t index, Rng & /*rng*/) {
    HQRL_REQUIRE(index < instance_count(), IndexError, "instance index out of range");
    index_ = index;
    selected_ = 0;
    weight_ = 0.0;
    ann_ = ansatz::all_unassigned(ds_.size);
    step_ = 0;
    done_ = false;
    outcome_ = {};
    recompute_mask();
    if (std::none_of(mask_.begin(), mask_.end(), [](auto b) { return b != 0; })) {
        finish();
    }
    return observe(0.0);
}

StepResult KnapsackEnv::step(Action action) {
    HQRL_REQUIRE(!done_, ContractViolation, "step on a finished episode");
    HQRL_REQUIRE(action < ds_.size, IndexError, "item index out of range");
    HQRL_REQUIRE(mask_[action] != 0, ContractViolation,
                 "item " + std::to_string(action) + " is masked");
    const auto &inst = ds_.knapsacks[index_];
    selected_ |= Bits{1} << action;
    weight_ += inst.weights[action];
    ann_[action] = 0.0;
    ++step_;
    recompute_mask();
    const bool overweight = weight_ > inst.capacity;
    if (overweight || std::none_of(mask_.begin(), mask_.end(), [](auto b) { return b != 0; })) {
        finish();
        return observe(outcome_.total_reward);
    }
    return observe(0.0);
}

StepResult KnapsackEnv::observe(double reward) const {
    StepResult r;
    r.observation.ham = hams_[index_];
    r.observation.annotations = ann_;
    r.reward = reward;
    r.done = done_;
    r.action_mask = mask_;
    return r;
}

nlohmann::json KnapsackEnv::state_json() const {
    return {{"kind", "knapsack"}, {"instance", index_},      {"selected", selected_},
            {"weight", weight_},  {"annotations", ann_},     {"mask", mask_json(mask_)},
            {"step", step_},      {"done", done_},           {"outcome", to_json(outcome_)}};
}

void KnapsackEnv::restore(const nlohmann::json &st) {
    HQRL_REQUIRE(st.at("kind") == "knapsack", ConfigError, "state is not a knapsack state");
    index_ = st.at("instance").get<std::size_t>();
    HQRL_REQUIRE(index_ < instance_count(), IndexError, "instance index out of range");
    selected_ = st.at("selected").get<Bits>();
    weight_ = st.at("weight").get<double>();
    ann_ = st.at("annotations").get<ansatz::Annotations>();
    mask_ = st.at("mask").get<Mask>();
    step_ = st.at("step").get<std::size_t>();
    done_ = st.at("done").get<bool>();
    outcome_ = outcome_from_json(st.at("outcome"));
}

// ---------------------------------------------------------------- UCP

UcpEnv::UcpEnv(hm::Dataset ds, EnvConfig cfg) : ds_(std::move(ds)), cfg_(cfg) {
    require_dataset(ds_, ProblemKind::Ucp);
    HQRL_REQUIRE(cfg_.ucp_steps >= 1, ConfigError, "ucp_steps must be >= 1");
    for (const auto &u : ds_.ucps) {
        HQRL_REQUIRE(u.size() == ds_.size, DimensionError, "instance size differs from dataset");
    }
}

void UcpEnv::sample_powers() {
    const auto &inst = ds_.ucps[index_];
    p_.resize(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i) {
        p_[i] = uniform_real(rng_, inst.p_min[i], inst.p_max[i]);
    }
    qubo_ = hm::ucp_qubo(inst, p_, demands_[step_], lambda_);
    ham_ = prepare(hm::qubo_to_ising(qubo_), cfg_);
}

StepResult UcpEnv::reset_to(std::size_t index, Rng &rng) {
    HQRL_REQUIRE(index < instance_count(), IndexError, "instance index out of range");
    index_ = index;
    const auto &inst = ds_.ucps[index_];
    rng_ = Rng(rng());
    lambda_ = cfg_.lambda_eq > 0.0 ? cfg_.lambda_eq : hm::default_ucp_penalty(inst);
    const double lo = *std::min_element(inst.p_min.begin(), inst.p_min.end());
    double hi = 0.0;
    for (double p : inst.p_max) {
        hi += p;
    }
    demands_.resize(cfg_.ucp_steps);
    for (auto &d : demands_) {
        d = uniform_real(rng_, lo, hi);
    }
    step_ = 0;
    done_ = false;
    outcome_ = {};
    sample_powers();
    return observe(0.0);
}

StepResult UcpEnv::step(Action action) {
    HQRL_REQUIRE(!done_, ContractViolation, "step on a finished episode");
    HQRL_REQUIRE(ds_.size == 64 || (action >> ds_.size) == 0, DimensionError,
                 "action has bits beyond the generator count");
    const double reward = -qubo_.value(action);
    outcome_.total_reward += reward;
    outcome_.valid =
        outcome_.valid && hm::evaluate_ucp(ds_.ucps[index_], p_, demands_[step_], action).valid;
    outcome_.selection = action;
    ++step_;
    if (step_ == cfg_.ucp_steps) {
        done_ = true;
    } else {
        sample_powers();
    }
    return observe(reward);
}

double UcpEnv::optimal_reward() const { return -hm::brute_force(qubo_).value; }

StepResult UcpEnv::observe(double reward) const {
    StepResult r;
    r.observation.ham = ham_;
    r.reward = reward;
    r.done = done_;
    r.action_mask.assign(ds_.size, 1);
    return r;
}

nlohmann::json UcpEnv::state_json() const {
    return {{"kind", "ucp"},        {"instance", index_}, {"demands", demands_},
            {"powers", p_},         {"penalty", lambda_}, {"step", step_},
            {"done", done_},        {"rng", serialize_rng(rng_)},
            {"outcome", to_json(outcome_)}};
}

void UcpEnv::restore(const nlohmann::json &st) {
    HQRL_REQUIRE(st.at("kind") == "ucp", ConfigError, "state is not a ucp state");
    index_ = st.at("instance").get<std::size_t>();
    HQRL_REQUIRE(index_ < instance_count(), IndexError, "instance index out of range");
    demands_ = st.at("demands").get<std::vector<double>>();
    p_ = st.at("powers").get<std::vector<double>>();
    lambda_ = st.at("penalty").get<double>();
    step_ = st.at("step").get<std::size_t>();
    done_ = st.at("done").get<bool>();
    rng_ = deserialize_rng(st.at("rng").get<std::string>());
    outcome_ = outcome_from_json(st.at("outcome"));
    if (!done_) {
        qubo_ = hm::ucp_qubo(ds_.ucps[index_], p_, demands_[step_], lambda_);
        ham_ = prepare(hm::qubo_to_ising(qubo_), cfg_);
    }
}

// ---------------------------------------------------------------- misc

nlohmann::json to_json(const Observation &obs) {
    auto J = nlohmann::json::array();
    for (const auto &[ij, c] : obs.ham.J) {
        J.push_back({ij.first, ij.second, c});
    }
    auto h = nlohmann::json::array();
    for (const auto &[i, c] : obs.ham.h) {
        h.push_back({i, c});
    }
    nlohmann::json j{{"n", obs.ham.n}, {"J", J}, {"h", h}, {"constant", obs.ham.constant}};
    if (obs.annotations) {
        j["annotations"] = *obs.annotations;
    }
    return j;
}

Observation observation_from_json(const nlohmann::json &j) {
    Observation obs;
    obs.ham.n = j.at("n").get<std::size_t>();
    for (const auto &t : j.at("J")) {
        obs.ham.J[{t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>()}] = t.at(2).get<double>();
    }
    for (const auto &t : j.at("h")) {
        obs.ham.h[t.at(0).get<std::size_t>()] = t.at(1).get<double>();
    }
    obs.ham.constant = j.at("constant").get<double>();
    if (j.contains("annotations")) {
        obs.annotations = j.at("annotations").get<ansatz::Annotations>();
    }
    return obs;
}

nlohmann::json to_json(const EpisodeOutcome &o) {
    return {{"total_reward", o.total_reward},
            {"approximation_ratio", o.approximation_ratio},
            {"optimal", o.optimal},
            {"valid", o.valid},
            {"selection", o.selection}};
}

EpisodeOutcome outcome_from_json(const nlohmann::json &j) {
    EpisodeOutcome o;
    o.total_reward = j.at("total_reward").get<double>();
    o.approximation_ratio = j.at("approximation_ratio").get<double>();
    o.optimal = j.at("optimal").get<bool>();
    o.valid = j.at("valid").get<bool>();
    o.selection = j.at("selection").get<Bits>();
    return o;
}

std::unique_ptr<Environment> make_environment(const hm::Dataset &ds, const EnvConfig &cfg) {
    switch (ds.kind) {
    case ProblemKind::MaxCut:
        return std::make_unique<MaxCutEnv>(ds, cfg);
    case ProblemKind::Knapsack:
        return std::make_unique<KnapsackEnv>(ds, cfg);
    case ProblemKind::Ucp:
        return std::make_unique<UcpEnv>(ds, cfg);
    }
    throw ConfigError("unknown problem kind");
}

TraceWriter::TraceWriter(const std::filesystem::path &path) : out_(path, std::ios::trunc) {
    if (!out_) {
        throw Error("cannot open trace file " + path.string());
    }
}

void TraceWriter::write(std::size_t episode, std::size_t step, Action action,
                        const StepResult &r) {
    nlohmann::json j{{"episode", episode}, {"step", step},     {"action", action},
                     {"reward", r.reward}, {"done", r.done},   {"mask", mask_json(r.action_mask)}};
    if (r.observation.annotations) {
        j["annotations"] = *r.observation.annotations;
    }
    out_ << j.dump() << '\n';
}

} // namespace hqrl::envs
