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
#include "hqrl/statesim/state_vector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "hqrl/common/error.hpp"

namespace hqrl::statesim {

std::string_view to_string(GateKind kind) {
    switch (kind) {
    case GateKind::H:
        return "H";
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::RZZ:
        return "RZZ";
    }
    return "?";
}

// ---------------------------------------------------------------- Observable

Observable Observable::x(std::size_t q, double coeff) {
    return Observable{}.add_x(q, coeff);
}
Observable Observable::z(std::size_t q, double coeff) {
    return Observable{}.add_z(q, coeff);
}
Observable Observable::zz(std::size_t a, std::size_t b, double coeff) {
    return Observable{}.add_zz(a, b, coeff);
}
Observable Observable::identity(double coeff) {
    return Observable{}.add(PauliTerm{coeff, 0, 0});
}

Observable &Observable::add(const PauliTerm &term) {
    HQRL_REQUIRE((term.x_mask & term.z_mask) == 0, ContractViolation,
                 "observable terms are over {I, X, Z}; Y factors unsupported");
    HQRL_REQUIRE(std::popcount(term.x_mask | term.z_mask) <= 2,
                 ContractViolation,
                 "observable terms carry at most two non-identity factors");
    terms_.push_back(term);
    return *this;
}

Observable &Observable::add(const Observable &other, double scale) {
    for (const auto &t : other.terms_) {
        terms_.push_back({t.coeff * scale, t.x_mask, t.z_mask});
    }
    return *this;
}

Observable &Observable::add_x(std::size_t q, double coeff) {
    HQRL_REQUIRE(q < 64, IndexError, "qubit index out of range");
    return add({coeff, std::uint64_t{1} << q, 0});
}

Observable &Observable::add_z(std::size_t q, double coeff) {
    HQRL_REQUIRE(q < 64, IndexError, "qubit index out of range");
    return add({coeff, 0, std::uint64_t{1} << q});
}

Observable &Observable::add_zz(std::size_t a, std::size_t b, double coeff) {
    HQRL_REQUIRE(a < 64 && b < 64 && a != b, IndexError,
                 "ZZ term needs two distinct valid qubits");
    return add({coeff, 0, (std::uint64_t{1} << a) | (std::uint64_t{1} << b)});
}

double Observable::coefficient_l1() const {
    return std::accumulate(terms_.begin(), terms_.end(), 0.0,
                           [](double acc, const PauliTerm &t) {
                               return acc + std::abs(t.coeff);
                           });
}

std::size_t Observable::min_qubits() const {
    std::uint64_t support = 0;
    for (const auto &t : terms_) {
        support |= t.x_mask | t.z_mask;
    }
    return static_cast<std::size_t>(std::bit_width(support));
}

// --------------------------------------------------------------- StateVector

namespace {

void check_capacity(std::size_t n) {
    if (n < 1 || n > kMaxQubits) {
        throw CapacityError("statevector supports 1.." +
                            std::to_string(kMaxQubits) + " qubits, got " +
                            std::to_string(n));
    }
}

Matrix2 rotation_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
    case GateKind::RX:
        return {{c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0}};
    case GateKind::RY:
        return {{c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0}};
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        return {{r, 0.0}, {r, 0.0}, {r, 0.0}, {-r, 0.0}};
    }
    default:
        break;
    }
    throw ContractViolation("not a dense single-qubit gate");
}

void apply_with_angle(const KernelTable &k, std::span<Complex> amps,
                      std::size_t n, const GateOp &gate, double angle) {
    switch (gate.kind) {
    case GateKind::H:
    case GateKind::RX:
    case GateKind::RY:
        k.apply_1q(amps.data(), n, gate.qubit0,
                   rotation_matrix(gate.kind, angle));
        return;
    case GateKind::RZ:
    case GateKind::RZZ: {
        std::uint64_t mask = std::uint64_t{1} << gate.qubit0;
        if (gate.kind == GateKind::RZZ) {
            mask |= std::uint64_t{1} << gate.qubit1;
        }
        const Complex even = std::polar(1.0, -angle / 2.0);
        const Complex odd = std::polar(1.0, angle / 2.0);
        k.apply_parity_phase(amps.data(), n, mask, even, odd);
        return;
    }
    }
}

} // namespace

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    check_capacity(num_qubits);
    amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t num_qubits,
                         std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    check_capacity(num_qubits);
    HQRL_REQUIRE(amps_.size() == (std::size_t{1} << num_qubits),
                 DimensionError, "amplitude vector length must be 2^n");
}

StateVector StateVector::plus(std::size_t num_qubits) {
    check_capacity(num_qubits);
    const double a = std::pow(2.0, -0.5 * static_cast<double>(num_qubits));
    return StateVector(num_qubits,
                       std::vector<Complex>(std::size_t{1} << num_qubits,
                                            Complex{a, 0.0}));
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    HQRL_REQUIRE(index < s.size(), IndexError, "basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    return std::sqrt(active_kernels().norm_squared(amps_.data(), num_qubits_));
}

void StateVector::check_gate(const GateOp &gate) const {
    HQRL_REQUIRE(gate.qubit0 < num_qubits_, IndexError,
                 std::string(to_string(gate.kind)) + ": qubit " +
                     std::to_string(gate.qubit0) + " out of range");
    if (gate.kind == GateKind::RZZ) {
        HQRL_REQUIRE(gate.qubit1 < num_qubits_, IndexError,
                     "RZZ: second qubit out of range");
        HQRL_REQUIRE(gate.qubit0 != gate.qubit1, IndexError,
                     "RZZ: qubits must differ");
    }
}

void StateVector::apply(const GateOp &gate) {
    check_gate(gate);
    apply_with_angle(active_kernels(), amps_, num_qubits_, gate, gate.angle);
}

void StateVector::apply_adjoint(const GateOp &gate) {
    check_gate(gate);
    apply_with_angle(active_kernels(), amps_, num_qubits_, gate, -gate.angle);
}

void StateVector::apply_pauli(const PauliTerm &term) {
    HQRL_REQUIRE(static_cast<std::size_t>(std::bit_width(
                     term.x_mask | term.z_mask)) <= num_qubits_,
                 IndexError, "Pauli word acts outside the register");
    std::vector<Complex> out(amps_.size(), Complex{0.0, 0.0});
    active_kernels().pauli_axpy(out.data(), amps_.data(), num_qubits_,
                                term.x_mask, term.z_mask, term.coeff);
    amps_ = std::move(out);
}

// ------------------------------------------------------------ free functions

StateVector init_plus_state(std::size_t num_qubits) {
    return StateVector::plus(num_qubits);
}

StateVector apply_gate(StateVector state, const GateOp &gate) {
    state.apply(gate);
    return state;
}

double expectation(const StateVector &state, const Observable &obs) {
    HQRL_REQUIRE(obs.min_qubits() <= state.num_qubits(), IndexError,
                 "observable acts outside the register");
    const auto &k = active_kernels();
    const auto amps = state.amplitudes();
    double value = 0.0;
    for (const auto &t : obs.terms()) {
        if (t.x_mask == 0 && t.z_mask == 0) {
            value += t.coeff * k.norm_squared(amps.data(), state.num_qubits());
            continue;
        }
        const Complex e = k.pauli_inner(amps.data(), amps.data(),
                                        state.num_qubits(), t.x_mask, t.z_mask);
        if (std::abs(e.imag()) >= 1e-10) {
            throw NumericalError("expectation of a Hermitian Pauli word has "
                                 "imaginary part " +
                                 std::to_string(e.imag()));
        }
        value += t.coeff * e.real();
    }
    return value;
}

StateVector apply_observable(const StateVector &state, const Observable &obs) {
    HQRL_REQUIRE(obs.min_qubits() <= state.num_qubits(), IndexError,
                 "observable acts outside the register");
    std::vector<Complex> out(state.size(), Complex{0.0, 0.0});
    const auto &k = active_kernels();
    for (const auto &t : obs.terms()) {
        k.pauli_axpy(out.data(), state.amplitudes().data(), state.num_qubits(),
                     t.x_mask, t.z_mask, t.coeff);
    }
    return StateVector(state.num_qubits(), std::move(out));
}

Complex inner_product(const StateVector &lhs, const StateVector &rhs) {
    HQRL_REQUIRE(lhs.num_qubits() == rhs.num_qubits(), DimensionError,
                 "inner product of registers of different size");
    return active_kernels().pauli_inner(lhs.amplitudes().data(),
                                        rhs.amplitudes().data(),
                                        lhs.num_qubits(), 0, 0);
}

std::vector<double> probabilities(const StateVector &state) {
    std::vector<double> p(state.size());
    std::transform(state.amplitudes().begin(), state.amplitudes().end(),
                   p.begin(), [](const Complex &a) { return std::norm(a); });
    return p;
}

std::vector<std::uint64_t> sample_bitstrings(const StateVector &state,
                                             std::size_t shots, Rng &rng) {
    HQRL_REQUIRE(shots >= 1, ContractViolation, "shots must be >= 1");
    std::vector<double> cdf = probabilities(state);
    std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
    const double total = cdf.back();
    std::vector<std::uint64_t> out;
    out.reserve(shots);
    for (std::size_t s = 0; s < shots; ++s) {
        const double u = uniform_real(rng, 0.0, total);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        // upper_bound lands on the first strictly larger CDF entry, so
        // zero-probability outcomes are never drawn.
        out.push_back(static_cast<std::uint64_t>(it - cdf.begin()));
    }
    return out;
}

std::string to_bitstring(std::uint64_t index, std::size_t num_qubits) {
    std::string s(num_qubits, '0');
    for (std::size_t q = 0; q < num_qubits; ++q) {
        if (((index >> q) & 1U) != 0) {
            s[q] = '1';
        }
    }
    return s;
}

} // namespace hqrl::statesim
