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
 * @file state_vector.hpp
 * Dense statevector, the gate alphabet and Pauli observables.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hqrl/common/random.hpp"
#include "hqrl/statesim/kernels.hpp"

namespace hqrl::statesim {

/// Largest register the simulator accepts (16 MiB of amplitudes).
inline constexpr std::size_t kMaxQubits = 20;

enum class GateKind { H, RX, RY, RZ, RZZ };

std::string_view to_string(GateKind kind);

/**
 * @brief One gate of the restricted alphabet.
 *
 * Rotations follow R_P(t) = exp(-i t/2 P); RZZ(t) = exp(-i t/2 Z_a Z_b).
 */
struct GateOp {
    GateKind kind = GateKind::H;
    std::size_t qubit0 = 0;
    std::size_t qubit1 = 0; ///< second qubit, RZZ only
    double angle = 0.0;

    static GateOp h(std::size_t q) { return {GateKind::H, q, 0, 0.0}; }
    static GateOp rx(std::size_t q, double t) { return {GateKind::RX, q, 0, t}; }
    static GateOp ry(std::size_t q, double t) { return {GateKind::RY, q, 0, t}; }
    static GateOp rz(std::size_t q, double t) { return {GateKind::RZ, q, 0, t}; }
    static GateOp rzz(std::size_t a, std::size_t b, double t) {
        return {GateKind::RZZ, a, b, t};
    }
};

/// A Pauli word Z^z X^x with at most two non-identity factors, times a
/// real coefficient. Y factors are not part of the observable alphabet.
struct PauliTerm {
    double coeff = 1.0;
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;
};

/// Weighted sum of Pauli words over {I, X, Z}.
class Observable {
  public:
    Observable() = default;

    static Observable x(std::size_t q, double coeff = 1.0);
    static Observable z(std::size_t q, double coeff = 1.0);
    static Observable zz(std::size_t a, std::size_t b, double coeff = 1.0);
    static Observable identity(double coeff = 1.0);

    Observable &add(const PauliTerm &term);
    Observable &add(const Observable &other, double scale = 1.0);
    Observable &add_x(std::size_t q, double coeff);
    Observable &add_z(std::size_t q, double coeff);
    Observable &add_zz(std::size_t a, std::size_t b, double coeff);

    [[nodiscard]] std::span<const PauliTerm> terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    /// Sum of |coefficients|; bounds |<O>|.
    [[nodiscard]] double coefficient_l1() const;
    /// Highest qubit index touched plus one (0 for pure identity).
    [[nodiscard]] std::size_t min_qubits() const;

  private:
    std::vector<PauliTerm> terms_;
};

class StateVector {
  public:
    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(std::size_t num_qubits);
    StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes);

    /// H^{⊗n}|0...0>: every amplitude equals 2^{-n/2}.
    static StateVector plus(std::size_t num_qubits);
    /// Computational basis state |index>.
    static StateVector basis(std::size_t num_qubits, std::uint64_t index);

    [[nodiscard]] std::size_t num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t size() const { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
    [[nodiscard]] std::span<Complex> amplitudes() { return amps_; }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const;

    void apply(const GateOp &gate);
    /// Applies the inverse of `gate`.
    void apply_adjoint(const GateOp &gate);
    /// psi <- P psi for a single Pauli word.
    void apply_pauli(const PauliTerm &term);

  private:
    void check_gate(const GateOp &gate) const;

    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

/// The `init_plus_state` entry point.
StateVector init_plus_state(std::size_t num_qubits);

StateVector apply_gate(StateVector state, const GateOp &gate);

/// Sum_k c_k <psi|P_k|psi>.
double expectation(const StateVector &state, const Observable &obs);

/// O|psi> (not normalised).
StateVector apply_observable(const StateVector &state, const Observable &obs);

/// <lhs|rhs>
Complex inner_product(const StateVector &lhs, const StateVector &rhs);

/// |amplitude|^2 for every basis state.
std::vector<double> probabilities(const StateVector &state);

/// Basis indices drawn i.i.d. from the Born distribution.
std::vector<std::uint64_t> sample_bitstrings(const StateVector &state,
                                             std::size_t shots, Rng &rng);

/// Ket label with qubit 0 first: basis index 1 on two qubits is "10".
std::string to_bitstring(std::uint64_t index, std::size_t num_qubits);

} // namespace hqrl::statesim
