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
#include "hqrl/statesim/circuit.hpp"

#include <string>

#include "hqrl/common/error.hpp"

namespace hqrl::statesim {

double CircuitTemplate::resolve_angle(const TemplateGate &gate,
                                      std::span<const double> params) const {
    if (!gate.binding.trainable()) {
        return gate.binding.fixed_angle;
    }
    return gate.binding.scale *
           params[static_cast<std::size_t>(gate.binding.param)];
}

GateOp CircuitTemplate::resolve(const TemplateGate &gate,
                                std::span<const double> params) const {
    return {gate.kind, gate.qubit0, gate.qubit1, resolve_angle(gate, params)};
}

void CircuitTemplate::validate() const {
    HQRL_REQUIRE(num_qubits >= 1 && num_qubits <= kMaxQubits, CapacityError,
                 "template register size out of range");
    std::vector<bool> referenced(param_count, false);
    for (const auto &g : gates) {
        HQRL_REQUIRE(g.qubit0 < num_qubits, IndexError,
                     "template gate qubit out of range");
        if (g.kind == GateKind::RZZ) {
            HQRL_REQUIRE(g.qubit1 < num_qubits && g.qubit1 != g.qubit0,
                         IndexError, "template RZZ qubits invalid");
        }
        if (g.binding.trainable()) {
            const auto p = static_cast<std::size_t>(g.binding.param);
            HQRL_REQUIRE(p < param_count, IndexError,
                         "binding refers to parameter " + std::to_string(p) +
                             " >= param_count");
            referenced[p] = true;
        }
    }
    for (std::size_t p = 0; p < param_count; ++p) {
        HQRL_REQUIRE(referenced[p], ContractViolation,
                     "parameter " + std::to_string(p) + " bound to no gate");
    }
}

namespace {

void check_params(const CircuitTemplate &tmpl, std::span<const double> params) {
    if (params.size() != tmpl.param_count) {
        throw DimensionError("circuit expects " +
                             std::to_string(tmpl.param_count) +
                             " parameters, got " +
                             std::to_string(params.size()));
    }
}

StateVector prepare(const CircuitTemplate &tmpl) {
    return tmpl.initial_state == InitialState::Plus
               ? StateVector::plus(tmpl.num_qubits)
               : StateVector(tmpl.num_qubits);
}

/// d<O>/d(angle) of the gate whose output state is `phi`.
double angle_derivative(const KernelTable &k, const StateVector &lambda,
                        const StateVector &phi, const TemplateGate &g) {
    const std::uint64_t m0 = std::uint64_t{1} << g.qubit0;
    const Complex *l = lambda.amplitudes().data();
    const Complex *f = phi.amplitudes().data();
    const std::size_t n = phi.num_qubits();
    switch (g.kind) {
    case GateKind::RX:
        return k.pauli_inner(l, f, n, m0, 0).imag();
    case GateKind::RY:
        // Y = -i Z X, so Im<l|Y|f> = -Re<l|ZX|f>.
        return -k.pauli_inner(l, f, n, m0, m0).real();
    case GateKind::RZ:
        return k.pauli_inner(l, f, n, 0, m0).imag();
    case GateKind::RZZ:
        return k.pauli_inner(l, f, n, 0, m0 | (std::uint64_t{1} << g.qubit1))
            .imag();
    case GateKind::H:
        break;
    }
    return 0.0;
}

} // namespace

StateVector run_circuit(const CircuitTemplate &tmpl,
                        std::span<const double> params) {
    check_params(tmpl, params);
    StateVector state = prepare(tmpl);
    for (const auto &g : tmpl.gates) {
        state.apply(tmpl.resolve(g, params));
    }
    return state;
}

ValueAndGradient value_and_gradient(const CircuitTemplate &tmpl,
                                    std::span<const double> params,
                                    const Observable &obs) {
    StateVector phi = run_circuit(tmpl, params);
    ValueAndGradient out;
    out.value = expectation(phi, obs);
    out.gradient.assign(tmpl.param_count, 0.0);

    StateVector lambda = apply_observable(phi, obs);
    const auto &k = active_kernels();
    for (auto it = tmpl.gates.rbegin(); it != tmpl.gates.rend(); ++it) {
        const GateOp op = tmpl.resolve(*it, params);
        if (it->binding.trainable()) {
            const double d = angle_derivative(k, lambda, phi, *it);
            out.gradient[static_cast<std::size_t>(it->binding.param)] +=
                it->binding.scale * d;
        }
        phi.apply_adjoint(op);
        lambda.apply_adjoint(op);
    }
    return out;
}

std::vector<double> gradient(const CircuitTemplate &tmpl,
                             std::span<const double> params,
                             const Observable &obs) {
    return value_and_gradient(tmpl, params, obs).gradient;
}

} // namespace hqrl::statesim
