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
 * @file optim.hpp
 * Adam, scalar schedules and the experience replay ring.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hqrl/common/random.hpp"
#include "hqrl/envs/environment.hpp"

namespace hqrl::agents {

/// Bias-corrected Adam minimizing a loss. Ascent callers pass -gradient.
class Adam {
  public:
    Adam() = default;
    Adam(std::size_t size, double lr, double beta1 = 0.9, double beta2 = 0.999,
         double eps = 1e-8);

    /// Throws NumericalError on a non-finite gradient entry, leaving the
    /// parameters and moments untouched.
    void step(std::vector<double> &params, std::span<const double> grad);

    [[nodiscard]] double learning_rate() const { return lr_; }
    [[nodiscard]] std::uint64_t steps() const { return t_; }
    [[nodiscard]] std::size_t size() const { return m_.size(); }

    [[nodiscard]] nlohmann::json to_json() const;
    static Adam from_json(const nlohmann::json &j);

  private:
    double lr_ = 1e-3;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    std::uint64_t t_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

/// Linear ramp from `start` to `end` over [0, end_step], flat afterwards.
struct Schedule {
    enum class Kind { Linear, Constant };
    Kind kind = Kind::Constant;
    double start = 1.0;
    double end = 1.0;
    std::uint64_t end_step = 0;

    static Schedule constant(double v) { return {Kind::Constant, v, v, 0}; }
    static Schedule linear(double a, double b, std::uint64_t steps) {
        return {Kind::Linear, a, b, steps};
    }
    [[nodiscard]] double value(std::uint64_t step) const;
    /// Value once the ramp is over.
    [[nodiscard]] double final_value() const { return kind == Kind::Constant ? start : end; }

    [[nodiscard]] nlohmann::json to_json() const;
    static Schedule from_json(const nlohmann::json &j);
};

struct Transition {
    envs::Observation obs;
    std::size_t action = 0;
    double reward = 0.0;
    envs::Observation next_obs;
    envs::Mask next_mask;
    bool done = false;
};

/// Fixed-capacity ring; the oldest transition is overwritten when full.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity = 10000);

    void push(Transition t);
    [[nodiscard]] std::size_t size() const { return data_.size(); }
    [[nodiscard]] std::size_t capacity() const { return capacity_; }
    [[nodiscard]] const Transition &at(std::size_t i) const { return data_.at(i); }
    /// Uniform with replacement.
    [[nodiscard]] std::vector<std::size_t> sample(std::size_t batch, Rng &rng) const;

    [[nodiscard]] nlohmann::json to_json() const;
    static ReplayBuffer from_json(const nlohmann::json &j);

  private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> data_;
};

} // namespace hqrl::agents
