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
 * @file kernels.hpp
 * Inner loops of the statevector simulator.
 *
 * Every kernel exists as a portable scalar reference and, on x86-64, as an
 * AVX2 variant. The active table is chosen once at runtime from the CPU
 * features and the `HQRL_KERNELS` environment variable (`scalar`, `avx2`,
 * `auto`). Both tables must agree to rounding; tests/unit/test_kernels.cpp
 * checks that on random states.
 *
 * Bit `i` of a basis index is qubit `i`. Pauli words are given as an X mask
 * and a Z mask and denote the operator Z^z X^x (X applied first), so that
 * (Z^z X^x psi)_b = (-1)^{|b & z|} psi_{b ^ x}.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace hqrl::statesim {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Matrix2 {
    Complex m00, m01, m10, m11;
};

enum class KernelBackend { Scalar, Avx2 };

struct KernelTable {
    KernelBackend backend;
    std::string_view name;

    /// psi <- (I ⊗ .. ⊗ M_q ⊗ .. ⊗ I) psi
    void (*apply_1q)(Complex *psi, std::size_t num_qubits, std::size_t qubit,
                     const Matrix2 &m);

    /// psi_b <- psi_b * (parity(b & mask) ? odd : even)
    void (*apply_parity_phase)(Complex *psi, std::size_t num_qubits,
                               std::uint64_t mask, Complex even, Complex odd);

    /// Returns <lhs| Z^z X^x |rhs>.
    Complex (*pauli_inner)(const Complex *lhs, const Complex *rhs,
                           std::size_t num_qubits, std::uint64_t x_mask,
                           std::uint64_t z_mask);

    /// out <- out + coeff * Z^z X^x in
    void (*pauli_axpy)(Complex *out, const Complex *in, std::size_t num_qubits,
                       std::uint64_t x_mask, std::uint64_t z_mask,
                       Complex coeff);

    /// Sum of |psi_b|^2.
    double (*norm_squared)(const Complex *psi, std::size_t num_qubits);
};

const KernelTable &scalar_kernels();

/// True when the AVX2 table was compiled in and the CPU supports it.
bool avx2_available();

/// AVX2 table; throws hqrl::CapacityError when unavailable.
const KernelTable &avx2_kernels();

/// Table used by the simulator.
const KernelTable &active_kernels();

/// Override the runtime selection (tests, benchmarks). Throws when the
/// requested backend is not available on this machine.
void select_kernels(KernelBackend backend);

} // namespace hqrl::statesim
