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
 * @file circuit.hpp
 * Parameterised circuit templates, their evaluation and exact gradients.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hqrl/statesim/state_vector.hpp"

namespace hqrl::statesim {

/// Register preparation performed before the first template gate.
enum class InitialState {
    Plus, ///< H^{⊗n}|0..0>
    Zero, ///< |0..0>
};

/**
 * @brief Where a gate's rotation angle comes from.
 *
 * A trainable gate resolves to `scale * params[param]`; a fixed gate
 * (`param < 0`) always uses `fixed_angle`. Several gates may bind the same
 * parameter with different scales, which is how shared (correlated)
 * parameters are realised.
 */
struct AngleBinding {
    std::int64_t param = -1;
    double scale = 1.0;
    double fixed_angle = 0.0;

    [[nodiscard]] bool trainable() const { return param >= 0; }
};

struct TemplateGate {
    GateKind kind = GateKind::H;
    std::size_t qubit0 = 0;
    std::size_t qubit1 = 0;
    AngleBinding binding{};
};

struct CircuitTemplate {
    std::size_t num_qubits = 1;
    InitialState initial_state = InitialState::Plus;
    std::vector<TemplateGate> gates;
    std::size_t param_count = 0;
    /// First gate index of each layer.
    std::vector<std::size_t> layer_starts;
    /// Parameter indices introduced by each layer, in creation order.
    std::vector<std::vector<std::size_t>> layer_params;

    [[nodiscard]] double resolve_angle(const TemplateGate &gate,
                                       std::span<const double> params) const;
    [[nodiscard]] GateOp resolve(const TemplateGate &gate,
                                 std::span<const double> params) const;

    /// Throws when a binding points past param_count, a parameter is never
    /// referenced, or a gate touches a qubit outside the register.
    void validate() const;
};

/// Prepares the initial state and applies every gate of `tmpl`.
StateVector run_circuit(const CircuitTemplate &tmpl,
                        std::span<const double> params);

struct ValueAndGradient {
    double value = 0.0;
    std::vector<double> gradient;
};

/**
 * @brief <O>(params) and its exact gradient by one reverse sweep.
 *
 * For a gate exp(-i a/2 P) the angle derivative is Im <lambda|P|phi>, where
 * phi is the state right after the gate and lambda the back-propagated
 * O|psi>. Parameter derivatives accumulate scale * d<O>/d(angle) over every
 * gate bound to the parameter.
 */
ValueAndGradient value_and_gradient(const CircuitTemplate &tmpl,
                                    std::span<const double> params,
                                    const Observable &obs);

std::vector<double> gradient(const CircuitTemplate &tmpl,
                             std::span<const double> params,
                             const Observable &obs);

} // namespace hqrl::statesim
