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
#include <bit>

#include "hqrl/statesim/kernels.hpp"

namespace hqrl::statesim {
namespace {

inline bool parity(std::uint64_t v) { return (std::popcount(v) & 1) != 0; }

void apply_1q(Complex *psi, std::size_t num_qubits, std::size_t qubit,
              const Matrix2 &m) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    const std::uint64_t stride = std::uint64_t{1} << qubit;
    for (std::uint64_t block = 0; block < dim; block += 2 * stride) {
        for (std::uint64_t k = block; k < block + stride; ++k) {
            const Complex a0 = psi[k];
            const Complex a1 = psi[k + stride];
            psi[k] = m.m00 * a0 + m.m01 * a1;
            psi[k + stride] = m.m10 * a0 + m.m11 * a1;
        }
    }
}

void apply_parity_phase(Complex *psi, std::size_t num_qubits,
                        std::uint64_t mask, Complex even, Complex odd) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    for (std::uint64_t b = 0; b < dim; ++b) {
        psi[b] *= parity(b & mask) ? odd : even;
    }
}

Complex pauli_inner(const Complex *lhs, const Complex *rhs,
                    std::size_t num_qubits, std::uint64_t x_mask,
                    std::uint64_t z_mask) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    double re = 0.0;
    double im = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b) {
        const Complex l = lhs[b];
        const Complex r = rhs[b ^ x_mask];
        const double s = parity(b & z_mask) ? -1.0 : 1.0;
        re += s * (l.real() * r.real() + l.imag() * r.imag());
        im += s * (l.real() * r.imag() - l.imag() * r.real());
    }
    return {re, im};
}

void pauli_axpy(Complex *out, const Complex *in, std::size_t num_qubits,
                std::uint64_t x_mask, std::uint64_t z_mask, Complex coeff) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    for (std::uint64_t b = 0; b < dim; ++b) {
        const Complex c = parity(b & z_mask) ? -coeff : coeff;
        out[b] += c * in[b ^ x_mask];
    }
}

double norm_squared(const Complex *psi, std::size_t num_qubits) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    double acc = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b) {
        acc += std::norm(psi[b]);
    }
    return acc;
}

} // namespace

const KernelTable &scalar_kernels() {
    static const KernelTable table{KernelBackend::Scalar, "scalar",
                                   &apply_1q,             &apply_parity_phase,
                                   &pauli_inner,          &pauli_axpy,
                                   &norm_squared};
    return table;
}

} // namespace hqrl::statesim
