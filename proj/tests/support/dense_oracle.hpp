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
 * @file dense_oracle.hpp
 * Test-only reference evaluator: full 2^n x 2^n matrices built from
 * Kronecker products and gate unitaries from Eigen's matrix exponential.
 * Shares no code with the statevector kernels.
 */
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstddef>
#include <vector>

#include "hqrl/statesim/circuit.hpp"

namespace hqrl::testing {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline CMat pauli(char p) {
    CMat m(2, 2);
    using C = std::complex<double>;
    switch (p) {
    case 'X':
        m << C(0, 0), C(1, 0), C(1, 0), C(0, 0);
        break;
    case 'Y':
        m << C(0, 0), C(0, -1), C(0, 1), C(0, 0);
        break;
    case 'Z':
        m << C(1, 0), C(0, 0), C(0, 0), C(-1, 0);
        break;
    case 'H':
        m << C(1, 0), C(1, 0), C(1, 0), C(-1, 0);
        m /= std::sqrt(2.0);
        break;
    default:
        m = CMat::Identity(2, 2);
    }
    return m;
}

/// Operator acting with `ops[q]` on qubit q. Little-endian: qubit 0 is the
/// least significant bit, i.e. the rightmost Kronecker factor.
inline CMat embed(const std::vector<char> &ops) {
    CMat out = CMat::Identity(1, 1);
    for (std::size_t q = 0; q < ops.size(); ++q) {
        CMat next = Eigen::kroneckerProduct(pauli(ops[q]), out).eval();
        out = next;
    }
    return out;
}

inline CMat single(std::size_t n, std::size_t q, char p) {
    std::vector<char> ops(n, 'I');
    ops[q] = p;
    return embed(ops);
}

inline CMat pair(std::size_t n, std::size_t a, char pa, std::size_t b,
                 char pb) {
    std::vector<char> ops(n, 'I');
    ops[a] = pa;
    ops[b] = pb;
    return embed(ops);
}

/// exp(-i t/2 G) by the matrix exponential.
inline CMat rotation(const CMat &generator, double t) {
    const CMat arg = (std::complex<double>(0.0, -t / 2.0) * generator).eval();
    return arg.exp();
}

inline CMat gate_unitary(std::size_t n, const statesim::GateOp &g) {
    using statesim::GateKind;
    switch (g.kind) {
    case GateKind::H:
        return single(n, g.qubit0, 'H');
    case GateKind::RX:
        return rotation(single(n, g.qubit0, 'X'), g.angle);
    case GateKind::RY:
        return rotation(single(n, g.qubit0, 'Y'), g.angle);
    case GateKind::RZ:
        return rotation(single(n, g.qubit0, 'Z'), g.angle);
    case GateKind::RZZ:
        return rotation(pair(n, g.qubit0, 'Z', g.qubit1, 'Z'), g.angle);
    }
    return CMat::Identity(1 << n, 1 << n);
}

inline CMat observable_matrix(std::size_t n, const statesim::Observable &obs) {
    const std::size_t dim = std::size_t{1} << n;
    CMat out = CMat::Zero(dim, dim);
    for (const auto &t : obs.terms()) {
        std::vector<char> ops(n, 'I');
        for (std::size_t q = 0; q < n; ++q) {
            if ((t.x_mask >> q) & 1U) {
                ops[q] = 'X';
            }
            if ((t.z_mask >> q) & 1U) {
                ops[q] = 'Z';
            }
        }
        out += t.coeff * embed(ops);
    }
    return out;
}

inline CVec initial_vector(const statesim::CircuitTemplate &tmpl) {
    const std::size_t dim = std::size_t{1} << tmpl.num_qubits;
    CVec v = CVec::Zero(dim);
    v(0) = 1.0;
    if (tmpl.initial_state == statesim::InitialState::Plus) {
        for (std::size_t q = 0; q < tmpl.num_qubits; ++q) {
            v = single(tmpl.num_qubits, q, 'H') * v;
        }
    }
    return v;
}

inline CVec run_dense(const statesim::CircuitTemplate &tmpl,
                      const std::vector<double> &params) {
    CVec v = initial_vector(tmpl);
    for (const auto &g : tmpl.gates) {
        v = gate_unitary(tmpl.num_qubits, tmpl.resolve(g, params)) * v;
    }
    return v;
}

inline double expectation_dense(const CVec &v, const CMat &obs) {
    return (v.adjoint() * obs * v)(0, 0).real();
}

inline CVec to_eigen(const statesim::StateVector &s) {
    CVec v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s[i];
    }
    return v;
}

/// Central finite differences of <O>(params), evaluated with the simulator.
inline std::vector<double>
finite_difference_gradient(const statesim::CircuitTemplate &tmpl,
                           std::vector<double> params,
                           const statesim::Observable &obs, double h = 1e-5) {
    std::vector<double> g(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double keep = params[k];
        params[k] = keep + h;
        const double up =
            statesim::expectation(statesim::run_circuit(tmpl, params), obs);
        params[k] = keep - h;
        const double down =
            statesim::expectation(statesim::run_circuit(tmpl, params), obs);
        params[k] = keep;
        g[k] = (up - down) / (2.0 * h);
    }
    return g;
}

} // namespace hqrl::testing
