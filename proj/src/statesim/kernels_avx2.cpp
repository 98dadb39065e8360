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
//
// AVX2/FMA variants of the statevector kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; nothing here may run before
// avx2_available() has confirmed CPU support.
//
// Register layout: one __m256d holds two consecutive amplitudes
// [re(b), im(b), re(b+1), im(b+1)]. All loops therefore walk even base
// indices b and handle qubit 0 with in-register lane swaps.

#include <immintrin.h>

#include <bit>

#include "hqrl/statesim/kernels.hpp"

namespace hqrl::statesim::detail {
namespace {

inline __m256d load2(const Complex *p) {
    return _mm256_loadu_pd(reinterpret_cast<const double *>(p));
}
inline void store2(Complex *p, __m256d v) {
    _mm256_storeu_pd(reinterpret_cast<double *>(p), v);
}

/// (a0, a1) -> (a1, a0)
inline __m256d swap_lanes(__m256d v) { return _mm256_permute2f128_pd(v, v, 1); }

/// Complex product of packed amplitudes with a packed multiplier whose real
/// and imaginary parts are given duplicated per lane.
inline __m256d cmul_split(__m256d a, __m256d m_re, __m256d m_im) {
    const __m256d a_swapped = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, m_re, _mm256_mul_pd(a_swapped, m_im));
}

struct SplitComplex {
    __m256d re;
    __m256d im;
};

inline SplitComplex broadcast(Complex c) {
    return {_mm256_set1_pd(c.real()), _mm256_set1_pd(c.imag())};
}

/// Lane 0 multiplier c0, lane 1 multiplier c1.
inline SplitComplex per_lane(Complex c0, Complex c1) {
    return {_mm256_setr_pd(c0.real(), c0.real(), c1.real(), c1.real()),
            _mm256_setr_pd(c0.imag(), c0.imag(), c1.imag(), c1.imag())};
}

inline __m256d cmul(__m256d a, const SplitComplex &m) {
    return cmul_split(a, m.re, m.im);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline bool parity(std::uint64_t v) { return (std::popcount(v) & 1) != 0; }

void apply_1q(Complex *psi, std::size_t num_qubits, std::size_t qubit,
              const Matrix2 &m) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    if (qubit == 0) {
        const SplitComplex diag = per_lane(m.m00, m.m11);
        const SplitComplex off = per_lane(m.m01, m.m10);
        for (std::uint64_t b = 0; b < dim; b += 2) {
            const __m256d v = load2(psi + b);
            const __m256d out =
                _mm256_add_pd(cmul(v, diag), cmul(swap_lanes(v), off));
            store2(psi + b, out);
        }
        return;
    }
    const std::uint64_t stride = std::uint64_t{1} << qubit;
    const SplitComplex m00 = broadcast(m.m00);
    const SplitComplex m01 = broadcast(m.m01);
    const SplitComplex m10 = broadcast(m.m10);
    const SplitComplex m11 = broadcast(m.m11);
    for (std::uint64_t block = 0; block < dim; block += 2 * stride) {
        for (std::uint64_t k = block; k < block + stride; k += 2) {
            const __m256d a0 = load2(psi + k);
            const __m256d a1 = load2(psi + k + stride);
            store2(psi + k, _mm256_add_pd(cmul(a0, m00), cmul(a1, m01)));
            store2(psi + k + stride,
                   _mm256_add_pd(cmul(a0, m10), cmul(a1, m11)));
        }
    }
}

void apply_parity_phase(Complex *psi, std::size_t num_qubits,
                        std::uint64_t mask, Complex even, Complex odd) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    const bool flips_in_pair = (mask & 1U) != 0;
    const SplitComplex by_base[2] = {
        flips_in_pair ? per_lane(even, odd) : broadcast(even),
        flips_in_pair ? per_lane(odd, even) : broadcast(odd)};
    for (std::uint64_t b = 0; b < dim; b += 2) {
        const SplitComplex &ph = by_base[parity(b & mask) ? 1 : 0];
        store2(psi + b, cmul(load2(psi + b), ph));
    }
}

/// Partner amplitudes (rhs[b ^ x], rhs[(b + 1) ^ x]) for even b.
inline __m256d load_partner(const Complex *rhs, std::uint64_t b,
                            std::uint64_t x_mask) {
    if ((x_mask & 1U) != 0) {
        return swap_lanes(load2(rhs + (b ^ (x_mask & ~std::uint64_t{1}))));
    }
    return load2(rhs + (b ^ x_mask));
}

inline void sign_registers(std::uint64_t z_mask, __m256d out[2]) {
    const double lane1 = (z_mask & 1U) != 0 ? -1.0 : 1.0;
    out[0] = _mm256_setr_pd(1.0, 1.0, lane1, lane1);
    out[1] = _mm256_setr_pd(-1.0, -1.0, -lane1, -lane1);
}

Complex pauli_inner(const Complex *lhs, const Complex *rhs,
                    std::size_t num_qubits, std::uint64_t x_mask,
                    std::uint64_t z_mask) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    __m256d signs[2];
    sign_registers(z_mask, signs);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::uint64_t b = 0; b < dim; b += 2) {
        const __m256d l = _mm256_mul_pd(load2(lhs + b),
                                        signs[parity(b & z_mask) ? 1 : 0]);
        const __m256d r = load_partner(rhs, b, x_mask);
        acc_re = _mm256_fmadd_pd(l, r, acc_re);
        acc_im = _mm256_fmadd_pd(l, _mm256_permute_pd(r, 0x5), acc_im);
    }
    // acc_im lanes hold (lr*ri, li*rr); Im(conj(l) r) = lr*ri - li*rr.
    const __m256d alt = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    return {hsum(acc_re), hsum(_mm256_mul_pd(acc_im, alt))};
}

void pauli_axpy(Complex *out, const Complex *in, std::size_t num_qubits,
                std::uint64_t x_mask, std::uint64_t z_mask, Complex coeff) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    __m256d signs[2];
    sign_registers(z_mask, signs);
    const SplitComplex c = broadcast(coeff);
    for (std::uint64_t b = 0; b < dim; b += 2) {
        const __m256d term = cmul(load_partner(in, b, x_mask), c);
        const __m256d acc = _mm256_fmadd_pd(
            term, signs[parity(b & z_mask) ? 1 : 0], load2(out + b));
        store2(out + b, acc);
    }
}

double norm_squared(const Complex *psi, std::size_t num_qubits) {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    __m256d acc = _mm256_setzero_pd();
    for (std::uint64_t b = 0; b < dim; b += 2) {
        const __m256d v = load2(psi + b);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    return hsum(acc);
}

} // namespace

const KernelTable &avx2_table() {
    static const KernelTable table{KernelBackend::Avx2, "avx2",
                                   &apply_1q,           &apply_parity_phase,
                                   &pauli_inner,        &pauli_axpy,
                                   &norm_squared};
    return table;
}

} // namespace hqrl::statesim::detail
