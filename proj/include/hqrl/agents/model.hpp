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
 * @file model.hpp
 * Circuit function approximators: per-action observables, softmax and
 * Bernoulli policies, Q values, and their exact parameter gradients.
 *
 * Every head output is linear in expectation values, so the gradient of any
 * head quantity is the circuit gradient of one combined observable. One
 * reverse sweep per state suffices.
 */
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hqrl/ansatz/ansatz.hpp"
#include "hqrl/envs/environment.hpp"
#include "hqrl/statesim/circuit.hpp"

namespace hqrl::agents {

enum class HeadKind {
    /// O_v = X_v, one action per node.
    NodeX,
    /// O_v = sum_u J_uv Z_u Z_v, the weighted incident-edge sum.
    EdgeZZ,
    /// O_i = -Z_i, one action per item. The sign makes a large value mean
    /// "qubit leans to |1>", i.e. towards x_i = 1.
    ItemZ,
    /// O_i = -Z_i, one Bernoulli variable per qubit.
    BernoulliZ,
};

std::string_view to_string(HeadKind h);
HeadKind head_from_string(std::string_view name);

struct ModelSpec {
    ansatz::AnsatzKind ansatz = ansatz::AnsatzKind::SgeSgv;
    std::size_t layers = 5;
    HeadKind head = HeadKind::NodeX;
    /// Bernoulli head only: P(x_i = 1) = (1 + <O_i>) / 2 instead of the
    /// logistic of the scaled value.
    bool born = false;
};

std::vector<statesim::Observable> head_observables(HeadKind head, const envs::Observation &obs);

statesim::CircuitTemplate model_template(const ModelSpec &spec, const envs::Observation &obs);

/// Circuit evaluated on one observation.
struct HeadValues {
    statesim::CircuitTemplate tmpl;
    std::vector<statesim::Observable> observables;
    std::vector<double> values;
};

HeadValues evaluate_head(const ModelSpec &spec, std::span<const double> theta,
                         const envs::Observation &obs);

/// Masked softmax of beta * w_a * values_a; w = 1 when `scalings` is empty.
/// Masked entries get probability exactly 0. Throws on an all-zero mask.
std::vector<double> softmax_policy(std::span<const double> values,
                                   std::span<const double> scalings, double beta,
                                   const envs::Mask &mask);

/// P(x_i = 1) per qubit.
std::vector<double> bernoulli_probs(std::span<const double> values,
                                    std::span<const double> scalings, bool born);

struct LogProbGradient {
    double log_prob = 0.0;
    std::vector<double> theta;
    std::vector<double> scalings; ///< empty when the head has none
};

LogProbGradient softmax_log_prob_gradient(const HeadValues &hv, std::span<const double> theta,
                                          std::span<const double> scalings, double beta,
                                          const envs::Mask &mask, std::size_t action);

LogProbGradient bernoulli_log_prob_gradient(const HeadValues &hv, std::span<const double> theta,
                                            std::span<const double> scalings, bool born,
                                            hamiltonians::Bits x);

/// Largest masked value, ties to the lowest index.
std::size_t masked_argmax(std::span<const double> values, const envs::Mask &mask);

/// With probability eps a uniform unmasked action, otherwise masked_argmax.
/// Draws one uniform number always and one index only when exploring.
std::size_t epsilon_greedy(std::span<const double> q, const envs::Mask &mask, double eps,
                           Rng &rng);

/// Q(s, a) = <O_a> and its gradient.
statesim::ValueAndGradient q_value_gradient(const ModelSpec &spec,
                                            std::span<const double> theta,
                                            const envs::Observation &obs, std::size_t action);

} // namespace hqrl::agents
