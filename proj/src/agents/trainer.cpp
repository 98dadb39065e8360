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
#include "hqrl/agents/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "hqrl/common/error.hpp"

namespace hqrl::agents {

using envs::ActionSpace;

std::string_view to_string(Algorithm a) { return a == Algorithm::Qpg ? "qpg" : "qdqn"; }

Algorithm algorithm_from_string(std::string_view name) {
    if (name == "qpg") {
        return Algorithm::Qpg;
    }
    if (name == "qdqn") {
        return Algorithm::Qdqn;
    }
    throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

nlohmann::json Model::to_json() const {
    return {{"algorithm", agents::to_string(algorithm)},
            {"ansatz", ansatz::to_string(spec.ansatz)},
            {"layers", spec.layers},
            {"head", agents::to_string(spec.head)},
            {"born", spec.born},
            {"theta", theta},
            {"scalings", scalings},
            {"beta", beta.to_json()}};
}

Model Model::from_json(const nlohmann::json &j) {
    Model m;
    m.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    m.spec.ansatz = ansatz::kind_from_string(j.at("ansatz").get<std::string>());
    m.spec.layers = j.at("layers").get<std::size_t>();
    m.spec.head = head_from_string(j.at("head").get<std::string>());
    m.spec.born = j.at("born").get<bool>();
    m.theta = j.at("theta").get<std::vector<double>>();
    m.scalings = j.at("scalings").get<std::vector<double>>();
    m.beta = Schedule::from_json(j.at("beta"));
    return m;
}

envs::Action choose_action(const Model &model, const envs::StepResult &state, double beta,
                           double eps, ActionMode mode, Rng &rng) {
    const auto hv = evaluate_head(model.spec, model.theta, state.observation);
    return choose_action(model, hv, state.action_mask, beta, eps, mode, rng);
}

envs::Action choose_action(const Model &model, const HeadValues &hv, const envs::Mask &mask,
                           double beta, double eps, ActionMode mode, Rng &rng) {
    if (model.algorithm == Algorithm::Qdqn) {
        return epsilon_greedy(hv.values, mask, mode == ActionMode::Greedy ? 0.0 : eps, rng);
    }
    if (model.spec.head == HeadKind::BernoulliZ) {
        const auto p = bernoulli_probs(hv.values, model.scalings, model.spec.born);
        envs::Action x = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const bool on = mode == ActionMode::Greedy ? p[i] > 0.5 : uniform_real(rng, 0.0, 1.0) < p[i];
            if (on) {
                x |= envs::Action{1} << i;
            }
        }
        return x;
    }
    const auto p = softmax_policy(hv.values, model.scalings, beta, mask);
    if (mode == ActionMode::Greedy) {
        return masked_argmax(p, mask);
    }
    const double u = uniform_real(rng, 0.0, 1.0);
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (mask[a] == 0) {
            continue;
        }
        acc += p[a];
        last = a;
        if (u < acc) {
            return a;
        }
    }
    return last; // rounding left u just above the running sum
}

// ------------------------------------------------------------------ Trainer

Trainer::Trainer(AgentConfig cfg, envs::Environment &env, std::uint64_t seed)
    : cfg_(std::move(cfg)), env_(env), rng_(derive_rng(seed, 0)), env_rng_(derive_rng(seed, 1)),
      replay_(cfg_.replay_capacity) {
    bandit_ = env_.action_space() == ActionSpace::MultiBinary;
    const bool bern = cfg_.model.head == HeadKind::BernoulliZ;
    HQRL_REQUIRE(bern == bandit_, ConfigError,
                 bandit_ ? "multi-binary environments need the bernoulli_z head"
                         : "the bernoulli_z head needs a multi-binary environment");
    HQRL_REQUIRE(!(cfg_.algorithm == Algorithm::Qdqn && bandit_), ConfigError,
                 "qdqn needs a discrete action space");
    HQRL_REQUIRE(!(cfg_.algorithm == Algorithm::Qdqn && cfg_.trainable_scalings), ConfigError,
                 "qdqn uses no output scaling");
    HQRL_REQUIRE(cfg_.gamma >= 0.0 && cfg_.gamma <= 1.0, ConfigError, "gamma must lie in [0, 1]");
    HQRL_REQUIRE(cfg_.batch_episodes >= 1 && cfg_.batch_size >= 1 && cfg_.target_sync >= 1 &&
                     cfg_.train_every >= 1,
                 ConfigError, "batch sizes and intervals must be >= 1");

    model_.algorithm = cfg_.algorithm;
    model_.spec = cfg_.model;
    model_.beta = cfg_.beta;
    current_ = env_.reset(env_rng_);
    const auto tmpl = model_template(cfg_.model, current_.observation);
    model_.theta = ansatz::init_params(tmpl.param_count, rng_, -cfg_.init_range, cfg_.init_range);
    if (cfg_.trainable_scalings) {
        model_.scalings.assign(env_.num_qubits(), 1.0);
        adam_scale_ = Adam(model_.scalings.size(), cfg_.lr_scaling);
    }
    adam_theta_ = Adam(model_.theta.size(), cfg_.lr_circuit);
    target_theta_ = model_.theta;
    batch_theta_.assign(model_.theta.size(), 0.0);
    batch_scale_.assign(model_.scalings.size(), 0.0);
}

double Trainer::epsilon() const {
    return cfg_.algorithm == Algorithm::Qdqn ? cfg_.epsilon.value(step_) : 0.0;
}

void Trainer::run(std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps; ++i) {
        step();
    }
}

void Trainer::step() {
    if (cfg_.algorithm == Algorithm::Qpg) {
        qpg_step();
    } else {
        qdqn_step();
    }
}

void Trainer::end_step(const envs::StepResult &res, std::size_t /*action*/) {
    ++step_;
    ++episode_length_;
    step_rewards_.push_back(res.reward);
    if (res.done) {
        episodes_.push_back({step_, episode_length_, env_.outcome()});
        episode_length_ = 0;
        current_ = env_.reset(env_rng_);
        // Episodes with nothing to decide (e.g. zero capacity) are skipped.
        while (current_.done) {
            episodes_.push_back({step_, 0, env_.outcome()});
            current_ = env_.reset(env_rng_);
        }
    } else {
        current_ = res;
    }
}

// ------------------------------------------------------------------ QPG

void Trainer::qpg_accumulate(const LogProbGradient &g, double ret) {
    double adv = ret;
    if (cfg_.baseline) {
        if (!baseline_set_) {
            baseline_ = ret;
            baseline_set_ = true;
        }
        adv = ret - baseline_;
        baseline_ = cfg_.baseline_decay * baseline_ + (1.0 - cfg_.baseline_decay) * ret;
    }
    for (std::size_t i = 0; i < g.theta.size(); ++i) {
        batch_theta_[i] += adv * g.theta[i];
    }
    for (std::size_t i = 0; i < g.scalings.size(); ++i) {
        batch_scale_[i] += adv * g.scalings[i];
    }
}

void Trainer::qpg_maybe_update(bool episode_ended) {
    if (!episode_ended) {
        return;
    }
    ++batch_count_;
    if (batch_count_ < cfg_.batch_episodes) {
        return;
    }
    // Ascent on J: hand Adam the negated mean gradient.
    const double norm = -1.0 / static_cast<double>(std::max<std::size_t>(batch_samples_, 1));
    for (auto &g : batch_theta_) {
        g *= norm;
    }
    for (auto &g : batch_scale_) {
        g *= norm;
    }
    adam_theta_.step(model_.theta, batch_theta_);
    if (!model_.scalings.empty()) {
        adam_scale_.step(model_.scalings, batch_scale_);
    }
    ++updates_;
    std::fill(batch_theta_.begin(), batch_theta_.end(), 0.0);
    std::fill(batch_scale_.begin(), batch_scale_.end(), 0.0);
    batch_count_ = 0;
    batch_samples_ = 0;
}

void Trainer::qpg_step() {
    const double b = beta();
    const auto hv = evaluate_head(model_.spec, model_.theta, current_.observation);
    const auto action =
        choose_action(model_, hv, current_.action_mask, b, 0.0, ActionMode::Sample, rng_);
    const auto g = bandit_ ? bernoulli_log_prob_gradient(hv, model_.theta, model_.scalings,
                                                         model_.spec.born, action)
                           : softmax_log_prob_gradient(hv, model_.theta, model_.scalings, b,
                                                       current_.action_mask, action);
    const auto res = env_.step(action);
    if (bandit_) {
        // Contextual bandit: every step is a complete one-step episode.
        qpg_accumulate(g, res.reward);
        ++batch_samples_;
    } else {
        ep_grads_.push_back(g);
        ep_rewards_.push_back(res.reward);
        if (res.done) {
            double ret = 0.0;
            for (std::size_t t = ep_rewards_.size(); t-- > 0;) {
                ret = ep_rewards_[t] + cfg_.gamma * ret;
                qpg_accumulate(ep_grads_[t], ret);
            }
            ++batch_samples_;
            ep_grads_.clear();
            ep_rewards_.clear();
        }
    }
    end_step(res, action);
    qpg_maybe_update(res.done);
}

// ------------------------------------------------------------------ QDQN

void Trainer::qdqn_step() {
    const auto hv = evaluate_head(model_.spec, model_.theta, current_.observation);
    const auto action = epsilon_greedy(hv.values, current_.action_mask, epsilon(), rng_);
    const auto res = env_.step(action);
    replay_.push({current_.observation, action, res.reward, res.observation, res.action_mask,
                  res.done});
    end_step(res, action);
    if (replay_.size() >= std::max(cfg_.batch_size, cfg_.learning_starts) &&
        step_ % cfg_.train_every == 0) {
        qdqn_learn();
    }
}

void Trainer::qdqn_learn() {
    const auto idx = replay_.sample(cfg_.batch_size, rng_);
    std::vector<double> grad(model_.theta.size(), 0.0);
    const double inv = 1.0 / static_cast<double>(idx.size());
    for (std::size_t k : idx) {
        const auto &t = replay_.at(k);
        double y = t.reward;
        if (!t.done) {
            const auto next = evaluate_head(model_.spec, target_theta_, t.next_obs);
            y += cfg_.gamma * next.values[masked_argmax(next.values, t.next_mask)];
        }
        const auto q = q_value_gradient(model_.spec, model_.theta, t.obs, t.action);
        // d/dtheta (y - Q)^2 = -2 (y - Q) dQ/dtheta
        const double c = -2.0 * (y - q.value) * inv;
        for (std::size_t i = 0; i < grad.size(); ++i) {
            grad[i] += c * q.gradient[i];
        }
    }
    adam_theta_.step(model_.theta, grad);
    ++updates_;
    if (updates_ % cfg_.target_sync == 0) {
        target_theta_ = model_.theta;
    }
}

// ------------------------------------------------------------------ checkpoints

namespace {

nlohmann::json grads_json(const std::vector<LogProbGradient> &gs) {
    auto out = nlohmann::json::array();
    for (const auto &g : gs) {
        out.push_back({{"log_prob", g.log_prob}, {"theta", g.theta}, {"scalings", g.scalings}});
    }
    return out;
}

} // namespace

nlohmann::json Trainer::checkpoint() const {
    auto eps = nlohmann::json::array();
    for (const auto &e : episodes_) {
        eps.push_back({{"end_step", e.end_step}, {"length", e.length},
                       {"outcome", envs::to_json(e.outcome)}});
    }
    nlohmann::json j{{"format", "hqrl-checkpoint-1"},
                     {"step", step_},
                     {"updates", updates_},
                     {"episode_length", episode_length_},
                     {"model", model_.to_json()},
                     {"target_theta", target_theta_},
                     {"adam_theta", adam_theta_.to_json()},
                     {"rng", serialize_rng(rng_)},
                     {"env_rng", serialize_rng(env_rng_)},
                     {"env", env_.state_json()},
                     {"qpg",
                      {{"episode_grads", grads_json(ep_grads_)},
                       {"episode_rewards", ep_rewards_},
                       {"batch_theta", batch_theta_},
                       {"batch_scale", batch_scale_},
                       {"batch_count", batch_count_},
                       {"batch_samples", batch_samples_},
                       {"baseline", baseline_},
                       {"baseline_set", baseline_set_}}},
                     {"step_rewards", step_rewards_},
                     {"episodes", eps}};
    if (!model_.scalings.empty()) {
        j["adam_scale"] = adam_scale_.to_json();
    }
    if (cfg_.algorithm == Algorithm::Qdqn) {
        j["replay"] = replay_.to_json();
    }
    return j;
}

void Trainer::restore(const nlohmann::json &j) {
    HQRL_REQUIRE(j.value("format", "") == "hqrl-checkpoint-1", ConfigError,
                 "not a checkpoint file");
    auto model = Model::from_json(j.at("model"));
    HQRL_REQUIRE(model.algorithm == cfg_.algorithm && model.spec.ansatz == cfg_.model.ansatz &&
                     model.spec.layers == cfg_.model.layers && model.spec.head == cfg_.model.head &&
                     model.theta.size() == model_.theta.size() &&
                     model.scalings.size() == model_.scalings.size(),
                 ConfigError, "checkpoint does not match the trainer configuration");
    model_ = std::move(model);
    step_ = j.at("step").get<std::uint64_t>();
    updates_ = j.at("updates").get<std::uint64_t>();
    episode_length_ = j.at("episode_length").get<std::size_t>();
    target_theta_ = j.at("target_theta").get<std::vector<double>>();
    adam_theta_ = Adam::from_json(j.at("adam_theta"));
    if (j.contains("adam_scale")) {
        adam_scale_ = Adam::from_json(j.at("adam_scale"));
    }
    rng_ = deserialize_rng(j.at("rng").get<std::string>());
    env_rng_ = deserialize_rng(j.at("env_rng").get<std::string>());
    env_.restore(j.at("env"));
    current_ = env_.current();
    const auto &q = j.at("qpg");
    ep_grads_.clear();
    for (const auto &g : q.at("episode_grads")) {
        ep_grads_.push_back({g.at("log_prob").get<double>(), g.at("theta").get<std::vector<double>>(),
                             g.at("scalings").get<std::vector<double>>()});
    }
    ep_rewards_ = q.at("episode_rewards").get<std::vector<double>>();
    batch_theta_ = q.at("batch_theta").get<std::vector<double>>();
    batch_scale_ = q.at("batch_scale").get<std::vector<double>>();
    batch_count_ = q.at("batch_count").get<std::size_t>();
    batch_samples_ = q.at("batch_samples").get<std::size_t>();
    baseline_ = q.at("baseline").get<double>();
    baseline_set_ = q.at("baseline_set").get<bool>();
    if (j.contains("replay")) {
        replay_ = ReplayBuffer::from_json(j.at("replay"));
    }
    step_rewards_ = j.at("step_rewards").get<std::vector<double>>();
    episodes_.clear();
    for (const auto &e : j.at("episodes")) {
        episodes_.push_back({e.at("end_step").get<std::uint64_t>(), e.at("length").get<std::size_t>(),
                             envs::outcome_from_json(e.at("outcome"))});
    }
}

// ------------------------------------------------------------------ evaluation

EvalSummary evaluate_policy(const Model &model, envs::Environment &env,
                            std::size_t episodes_per_instance, std::uint64_t seed,
                            ActionMode mode) {
    HQRL_REQUIRE(episodes_per_instance >= 1, ConfigError, "episodes_per_instance must be >= 1");
    const double beta = model.beta.final_value();
    EvalSummary s;
    for (std::size_t i = 0; i < env.instance_count(); ++i) {
        for (std::size_t e = 0; e < episodes_per_instance; ++e) {
            Rng rng = derive_rng(seed, i * episodes_per_instance + e);
            auto r = env.reset_to(i, rng);
            while (!r.done) {
                r = env.step(choose_action(model, r, beta, 0.0, mode, rng));
            }
            const auto &o = env.outcome();
            ++s.episodes;
            s.mean_reward += o.total_reward;
            s.mean_ratio += o.approximation_ratio;
            s.p_optimal += o.optimal ? 1.0 : 0.0;
            s.p_valid += o.valid ? 1.0 : 0.0;
        }
    }
    const auto m = static_cast<double>(s.episodes);
    s.mean_reward /= m;
    s.mean_ratio /= m;
    s.p_optimal /= m;
    s.p_valid /= m;
    return s;
}

} // namespace hqrl::agents
