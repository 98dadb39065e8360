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
#include "hqrl/agents/optim.hpp"

#include <cmath>

#include "hqrl/common/error.hpp"

namespace hqrl::agents {

Adam::Adam(std::size_t size, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(size, 0.0), v_(size, 0.0) {
    HQRL_REQUIRE(lr > 0.0, ConfigError, "learning rate must be positive");
}

void Adam::step(std::vector<double> &params, std::span<const double> grad) {
    HQRL_REQUIRE(params.size() == m_.size() && grad.size() == m_.size(), DimensionError,
                 "Adam: parameter, gradient and moment sizes differ");
    for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!std::isfinite(grad[i])) {
            throw NumericalError("non-finite gradient component " + std::to_string(i) + " at Adam step " +
                                 std::to_string(t_ + 1));
        }
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < grad.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
}

nlohmann::json Adam::to_json() const {
    return {{"lr", lr_}, {"beta1", beta1_}, {"beta2", beta2_}, {"eps", eps_},
            {"t", t_},   {"m", m_},         {"v", v_}};
}

Adam Adam::from_json(const nlohmann::json &j) {
    Adam a;
    a.lr_ = j.at("lr").get<double>();
    a.beta1_ = j.at("beta1").get<double>();
    a.beta2_ = j.at("beta2").get<double>();
    a.eps_ = j.at("eps").get<double>();
    a.t_ = j.at("t").get<std::uint64_t>();
    a.m_ = j.at("m").get<std::vector<double>>();
    a.v_ = j.at("v").get<std::vector<double>>();
    HQRL_REQUIRE(a.m_.size() == a.v_.size(), DimensionError, "Adam moments differ in size");
    return a;
}

double Schedule::value(std::uint64_t step) const {
    if (kind == Kind::Constant) {
        return start;
    }
    if (end_step == 0 || step >= end_step) {
        return end;
    }
    const double f = static_cast<double>(step) / static_cast<double>(end_step);
    return start + (end - start) * f;
}

nlohmann::json Schedule::to_json() const {
    return {{"kind", kind == Kind::Linear ? "linear" : "constant"},
            {"start", start},
            {"end", end},
            {"end_step", end_step}};
}

Schedule Schedule::from_json(const nlohmann::json &j) {
    Schedule s;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "linear") {
        s.kind = Kind::Linear;
    } else if (kind == "constant") {
        s.kind = Kind::Constant;
    } else {
        throw ConfigError("unknown schedule kind '" + kind + "'");
    }
    s.start = j.at("start").get<double>();
    s.end = j.value("end", s.start);
    s.end_step = j.value("end_step", std::uint64_t{0});
    return s;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    HQRL_REQUIRE(capacity >= 1, ConfigError, "replay capacity must be >= 1");
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
    } else {
        data_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample(std::size_t batch, Rng &rng) const {
    HQRL_REQUIRE(!data_.empty(), ContractViolation, "sampling an empty replay buffer");
    std::vector<std::size_t> idx(batch);
    for (auto &i : idx) {
        i = static_cast<std::size_t>(uniform_index(rng, data_.size()));
    }
    return idx;
}

nlohmann::json ReplayBuffer::to_json() const {
    auto items = nlohmann::json::array();
    for (const auto &t : data_) {
        auto mask = nlohmann::json::array();
        for (auto b : t.next_mask) {
            mask.push_back(static_cast<int>(b));
        }
        items.push_back({{"obs", envs::to_json(t.obs)},
                         {"action", t.action},
                         {"reward", t.reward},
                         {"next_obs", envs::to_json(t.next_obs)},
                         {"next_mask", mask},
                         {"done", t.done}});
    }
    return {{"capacity", capacity_}, {"next", next_}, {"items", items}};
}

ReplayBuffer ReplayBuffer::from_json(const nlohmann::json &j) {
    ReplayBuffer b(j.at("capacity").get<std::size_t>());
    b.next_ = j.at("next").get<std::size_t>();
    for (const auto &it : j.at("items")) {
        Transition t;
        t.obs = envs::observation_from_json(it.at("obs"));
        t.action = it.at("action").get<std::size_t>();
        t.reward = it.at("reward").get<double>();
        t.next_obs = envs::observation_from_json(it.at("next_obs"));
        t.next_mask = it.at("next_mask").get<envs::Mask>();
        t.done = it.at("done").get<bool>();
        b.data_.push_back(std::move(t));
    }
    HQRL_REQUIRE(b.data_.size() <= b.capacity_, DimensionError, "replay buffer over capacity");
    return b;
}

} // namespace hqrl::agents
