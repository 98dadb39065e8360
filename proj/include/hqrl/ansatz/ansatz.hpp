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
 * @file ansatz.hpp
 * Hamiltonian-derived circuit templates.
 *
 * One layer = encoding block (RZZ per J term, RZ per h term) followed by a
 * mixer block of RX on every qubit, optionally followed by RY and RZ on
 * every qubit. The Hadamard layer is not emitted as gates; templates start
 * from InitialState::Plus.
 *
 * Parameters of a layer are created in this order:
 *
 *   sge_sgv       [enc, mix]
 *   mge_sgv       [term_0 .. term_{T-1}, mix]
 *   mge_mgv       [term_0 .. term_{T-1}, mix_0 .. mix_{n-1}]
 *   sge_sgv_hea   [enc, mix, ry_0 .. ry_{n-1}, rz_0 .. rz_{n-1}]
 *   encoding_hea  [ry_0 .. ry_{n-1}, rz_0 .. rz_{n-1}]
 *
 * Terms are J sorted by (i, j), then h by i.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hqrl/common/random.hpp"
#include "hqrl/hamiltonians/problems.hpp"
#include "hqrl/statesim/circuit.hpp"

namespace hqrl::ansatz {

enum class AnsatzKind { SgeSgv, MgeSgv, MgeMgv, SgeSgvHea, EncodingHea };

inline constexpr AnsatzKind kAllKinds[] = {AnsatzKind::SgeSgv, AnsatzKind::MgeSgv,
                                           AnsatzKind::MgeMgv, AnsatzKind::SgeSgvHea,
                                           AnsatzKind::EncodingHea};

std::string_view to_string(AnsatzKind kind);
AnsatzKind kind_from_string(std::string_view name);

/// Per-qubit annotation angles, each 0 or pi.
using Annotations = std::vector<double>;

Annotations all_unassigned(std::size_t n);
void validate_annotations(const Annotations &ann);

std::size_t param_count(AnsatzKind kind, const hamiltonians::IsingHamiltonian &ham,
                        std::size_t layers);

/**
 * @brief Builds the template for `kind`.
 *
 * Encoding gates scale their parameter by the Ising coefficient. With
 * annotations, mixer RX gates on qubit i carry an extra factor alpha_i / pi,
 * so assigned qubits (alpha = 0) get an identity mixer. The HEA rotations
 * are not annotated.
 */
statesim::CircuitTemplate build(AnsatzKind kind,
                                const hamiltonians::IsingHamiltonian &ham,
                                const std::optional<Annotations> &ann,
                                std::size_t layers);

/// Max-abs normalization of J and h; the constant is kept.
hamiltonians::IsingHamiltonian
normalize_coefficients(const hamiltonians::IsingHamiltonian &ham);

/// Uniform draw on [lo, hi] for every parameter.
std::vector<double> init_params(std::size_t count, Rng &rng, double lo, double hi);

/// Default initializer, uniform on [-pi/8, pi/8].
std::vector<double> init_params(std::size_t count, Rng &rng);

/**
 * @brief Index of the `slot`-th (1-based) parameter created in `layer`
 * (1-based). Throws ContractViolation when the layer has fewer parameters.
 */
std::size_t param_slot(const statesim::CircuitTemplate &tmpl, std::size_t layer,
                       std::size_t slot);

/// Position, within each layer's parameter list, of the first parameter of
/// the variational block (the mixer, or the first RY for encoding_hea).
std::size_t variational_offset(AnsatzKind kind, const hamiltonians::IsingHamiltonian &ham);

/// Replaces the mixer scales of an existing template for new annotations.
/// Cheaper than rebuilding when only alpha changes between steps.
void set_annotations(statesim::CircuitTemplate &tmpl, AnsatzKind kind,
                     const Annotations &ann);

} // namespace hqrl::ansatz
