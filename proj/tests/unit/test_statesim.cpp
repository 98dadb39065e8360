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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "dense_oracle.hpp"
#include "hqrl/common/error.hpp"
#include "hqrl/statesim/circuit.hpp"
#include "hqrl/statesim/state_vector.hpp"
#include "test_helpers.hpp"

using namespace hqrl;
using namespace hqrl::statesim;
using Catch::Approx;
using std::numbers::pi;

namespace {

/// Runs the section body once per available kernel backend.
std::vector<KernelBackend> backends() {
    std::vector<KernelBackend> out{KernelBackend::Scalar};
    if (avx2_available()) {
        out.push_back(KernelBackend::Avx2);
    }
    return out;
}

struct BackendGuard {
    KernelBackend saved = active_kernels().backend;
    explicit BackendGuard(KernelBackend b) { select_kernels(b); }
    ~BackendGuard() { select_kernels(saved); }
};

GateOp random_gate(std::size_t n, Rng &rng) {
    const auto kind = static_cast<int>(uniform_index(rng, n >= 2 ? 5 : 4));
    const auto q = static_cast<std::size_t>(uniform_index(rng, n));
    const double t = uniform_real(rng, -2 * pi, 2 * pi);
    switch (kind) {
    case 0:
        return GateOp::h(q);
    case 1:
        return GateOp::rx(q, t);
    case 2:
        return GateOp::ry(q, t);
    case 3:
        return GateOp::rz(q, t);
    default: {
        auto r = static_cast<std::size_t>(uniform_index(rng, n - 1));
        if (r >= q) {
            ++r;
        }
        return GateOp::rzz(q, r, t);
    }
    }
}

/// Template with every gate kind and shared bindings, for gradient checks.
CircuitTemplate random_template(std::size_t n, std::size_t gates,
                                std::size_t params, Rng &rng) {
    CircuitTemplate t;
    t.num_qubits = n;
    t.param_count = params;
    for (std::size_t g = 0; g < gates; ++g) {
        GateOp op = random_gate(n, rng);
        TemplateGate tg{op.kind, op.qubit0, op.qubit1, {}};
        if (op.kind != GateKind::H) {
            tg.binding.param = static_cast<std::int64_t>(g < params ? g : uniform_index(rng, params));
            tg.binding.scale = uniform_real(rng, -1.5, 1.5);
        }
        t.gates.push_back(tg);
    }
    // Guarantee every parameter is referenced.
    for (std::size_t p = 0; p < params; ++p) {
        t.gates.push_back({GateKind::RX, p % n, 0, {static_cast<std::int64_t>(p), 0.7, 0.0}});
    }
    t.validate();
    return t;
}

} // namespace

TEST_CASE("init_plus_state", "[statesim]") {
    const auto s1 = init_plus_state(1);
    CHECK(s1[0].real() == Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(s1[1].real() == Approx(0.7071067811865476).epsilon(1e-15));
    const auto s2 = init_plus_state(2);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s2[i] == std::complex<double>(0.5, 0.0));
    }
    CHECK_THROWS_AS(init_plus_state(0), CapacityError);
    CHECK_THROWS_AS(init_plus_state(kMaxQubits + 1), CapacityError);
}

TEST_CASE("apply_gate examples", "[statesim]") {
    for (auto b : backends()) {
        BackendGuard guard(b);
        SECTION("RX(pi) flips |0>") {
            auto s = apply_gate(StateVector(1), GateOp::rx(0, pi));
            CHECK(expectation(s, Observable::z(0)) == Approx(-1.0).margin(1e-12));
        }
        SECTION("RZZ(pi) on |00> is a global phase -i") {
            auto s = apply_gate(StateVector(2), GateOp::rzz(0, 1, pi));
            CHECK(std::abs(s[0] - std::complex<double>(0.0, -1.0)) < 1e-12);
            CHECK(expectation(s, Observable::zz(0, 1)) == Approx(1.0).margin(1e-12));
        }
        SECTION("RZZ(0.7) on |++> then <X_0> agrees with matrix exponential") {
            auto s = apply_gate(init_plus_state(2), GateOp::rzz(0, 1, 0.7));
            const testing::CVec dense = testing::rotation(testing::pair(2, 0, 'Z', 1, 'Z'), 0.7) *
                               testing::to_eigen(init_plus_state(2));
            const double oracle = testing::expectation_dense(dense, testing::single(2, 0, 'X'));
            // Frozen oracle value: cos(0.7).
            CHECK(oracle == Approx(0.7648421872844885).epsilon(1e-13));
            CHECK(expectation(s, Observable::x(0)) == Approx(oracle).epsilon(1e-13));
        }
        SECTION("index errors") {
            StateVector s(2);
            CHECK_THROWS_AS(s.apply(GateOp::rx(2, 0.1)), IndexError);
            CHECK_THROWS_AS(s.apply(GateOp::rzz(0, 0, 0.1)), IndexError);
            CHECK_THROWS_AS(s.apply(GateOp::rzz(0, 5, 0.1)), IndexError);
        }
    }
}

TEST_CASE("every gate matches its dense unitary", "[statesim]") {
    Rng rng = derive_rng(3, 0);
    for (auto b : backends()) {
        BackendGuard guard(b);
        for (std::size_t n = 1; n <= 4; ++n) {
            for (int rep = 0; rep < 40; ++rep) {
                const auto psi = testing::random_state(n, rng);
                const GateOp g = random_gate(n, rng);
                const testing::CVec want = testing::gate_unitary(n, g) * testing::to_eigen(psi);
                const testing::CVec got = testing::to_eigen(apply_gate(psi, g));
                CHECK((want - got).norm() < 1e-12);

                auto back = apply_gate(psi, g);
                back.apply_adjoint(g);
                CHECK((testing::to_eigen(back) - testing::to_eigen(psi)).norm() < 1e-12);
            }
        }
    }
}

TEST_CASE("expectation examples", "[statesim]") {
    CHECK(expectation(StateVector(1), Observable::z(0)) == Approx(1.0));
    CHECK(expectation(apply_gate(StateVector(1), GateOp::h(0)), Observable::x(0)) ==
          Approx(1.0));

    // |01>: qubit 1 set, basis index 2.
    const auto s = StateVector::basis(2, 2);
    Observable obs;
    obs.add_zz(0, 1, 0.5).add_z(1, -2.0);
    CHECK(expectation(s, obs) == Approx(1.5));
    const double dense = testing::expectation_dense(testing::to_eigen(s),
                                                    testing::observable_matrix(2, obs));
    CHECK(dense == Approx(1.5));

    CHECK_THROWS_AS(expectation(StateVector(1), Observable::z(3)), IndexError);
    CHECK_THROWS_AS(Observable{}.add({1.0, 1, 1}), ContractViolation);
}

TEST_CASE("expectation bounds and dense agreement on random states", "[statesim][property]") {
    Rng rng = derive_rng(5, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + uniform_index(rng, 4);
        const auto psi = testing::random_state(n, rng);
        Observable obs;
        const std::size_t a = uniform_index(rng, n);
        std::size_t b = uniform_index(rng, n - 1);
        if (b >= a) {
            ++b;
        }
        obs.add_x(a, uniform_real(rng, -2, 2))
            .add_z(b, uniform_real(rng, -2, 2))
            .add_zz(a, b, uniform_real(rng, -2, 2))
            .add({uniform_real(rng, -2, 2), std::uint64_t{1} << a, std::uint64_t{1} << b});
        const double e = expectation(psi, obs);
        CHECK(std::abs(e) <= obs.coefficient_l1() + 1e-12);
        CHECK(e == Approx(testing::expectation_dense(testing::to_eigen(psi),
                                                     testing::observable_matrix(n, obs)))
                       .margin(1e-12));
        for (const auto &t : obs.terms()) {
            Observable single;
            single.add({1.0, t.x_mask, t.z_mask});
            const double v = expectation(psi, single);
            CHECK(v >= -1.0 - 1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("sample_bitstrings", "[statesim]") {
    SECTION("deterministic state") {
        Rng rng = derive_rng(1, 0);
        const auto s = StateVector::basis(2, 1);
        const auto draws = sample_bitstrings(s, 100, rng);
        REQUIRE(draws.size() == 100);
        for (auto d : draws) {
            CHECK(to_bitstring(d, 2) == "10");
        }
    }
    SECTION("uniform frequencies within 4 sigma") {
        Rng rng = derive_rng(2, 0);
        const std::size_t shots = 100000;
        const auto draws = sample_bitstrings(init_plus_state(2), shots, rng);
        std::map<std::uint64_t, std::size_t> counts;
        for (auto d : draws) {
            ++counts[d];
        }
        const double sigma = std::sqrt(shots * 0.25 * 0.75);
        for (std::uint64_t k = 0; k < 4; ++k) {
            CHECK(std::abs(static_cast<double>(counts[k]) - shots * 0.25) < 4 * sigma);
        }
    }
    SECTION("fixed seed reproduces the multiset") {
        Rng a = derive_rng(9, 0);
        Rng b = derive_rng(9, 0);
        const auto psi = apply_gate(init_plus_state(3), GateOp::ry(1, 0.4));
        CHECK(sample_bitstrings(psi, 500, a) == sample_bitstrings(psi, 500, b));
    }
    SECTION("probabilities sum to one") {
        Rng rng = derive_rng(4, 0);
        for (std::size_t n = 1; n <= 10; ++n) {
            const auto p = probabilities(testing::random_state(n, rng));
            CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS(
        [] {
            Rng rng = derive_rng(0, 0);
            (void)sample_bitstrings(StateVector(1), 0, rng);
        }(),
        ContractViolation);
}

TEST_CASE("norm preservation over long random gate sequences", "[statesim][property]") {
    Rng rng = derive_rng(6, 0);
    for (auto b : backends()) {
        BackendGuard guard(b);
        for (std::size_t n = 1; n <= 8; ++n) {
            StateVector s = init_plus_state(n);
            for (int g = 0; g < 1000; ++g) {
                s.apply(random_gate(n, rng));
            }
            CHECK(std::abs(s.norm() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("diagonal gates leave probabilities unchanged", "[statesim][property]") {
    Rng rng = derive_rng(7, 0);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + uniform_index(rng, 5);
        const auto psi = testing::random_state(n, rng);
        const auto before = probabilities(psi);
        const std::size_t a = uniform_index(rng, n);
        const std::size_t c = (a + 1 + uniform_index(rng, n - 1)) % n;
        for (const auto &g : {GateOp::rz(a, uniform_real(rng, -7, 7)),
                              GateOp::rzz(a, c, uniform_real(rng, -7, 7))}) {
            const auto after = probabilities(apply_gate(psi, g));
            for (std::size_t i = 0; i < before.size(); ++i) {
                CHECK(after[i] == Approx(before[i]).margin(1e-14));
            }
        }
    }
}

TEST_CASE("run_circuit", "[statesim]") {
    CircuitTemplate empty;
    empty.num_qubits = 2;
    const auto s = run_circuit(empty, {});
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(s[i] - std::complex<double>(0.5, 0.0)) < 1e-15);
    }

    CircuitTemplate one;
    one.num_qubits = 1;
    one.param_count = 1;
    one.gates.push_back({GateKind::RX, 0, 0, {0, 1.0, 0.0}});
    CHECK_THROWS_AS(run_circuit(one, std::vector<double>{}), DimensionError);
    CHECK_THROWS_AS(run_circuit(one, std::vector<double>{1.0, 2.0}), DimensionError);

    CircuitTemplate bad = one;
    bad.param_count = 2;
    CHECK_THROWS_AS(bad.validate(), ContractViolation);
    bad.gates.push_back({GateKind::RY, 0, 0, {5, 1.0, 0.0}});
    CHECK_THROWS_AS(bad.validate(), IndexError);
}

TEST_CASE("gradient examples", "[statesim]") {
    CircuitTemplate t;
    t.num_qubits = 1;
    t.initial_state = InitialState::Zero;
    t.param_count = 1;
    t.gates.push_back({GateKind::RX, 0, 0, {0, 1.0, 0.0}});
    const auto obs = Observable::z(0);
    CHECK(gradient(t, std::vector<double>{0.0}, obs)[0] == Approx(0.0).margin(1e-15));
    CHECK(gradient(t, std::vector<double>{pi / 2}, obs)[0] == Approx(-1.0).epsilon(1e-14));
    const auto vg = value_and_gradient(t, std::vector<double>{0.3}, obs);
    CHECK(vg.value == Approx(std::cos(0.3)));
    CHECK(vg.gradient[0] == Approx(-std::sin(0.3)));
}

TEST_CASE("adjoint gradient agrees with finite differences", "[statesim][property]") {
    Rng rng = derive_rng(8, 0);
    for (auto b : backends()) {
        BackendGuard guard(b);
        for (int rep = 0; rep < 25; ++rep) {
            const std::size_t n = 1 + uniform_index(rng, 5);
            const std::size_t params = 1 + uniform_index(rng, 6);
            auto tmpl = random_template(n, 20, params, rng);
            tmpl.initial_state = rep % 2 == 0 ? InitialState::Plus : InitialState::Zero;
            Observable obs;
            for (std::size_t q = 0; q < n; ++q) {
                obs.add_x(q, uniform_real(rng, -1, 1)).add_z(q, uniform_real(rng, -1, 1));
                if (q + 1 < n) {
                    obs.add_zz(q, q + 1, uniform_real(rng, -1, 1));
                }
            }
            const auto theta = testing::random_params(params, rng);
            const auto vg = value_and_gradient(tmpl, theta, obs);
            const auto fd = testing::finite_difference_gradient(tmpl, theta, obs);
            for (std::size_t k = 0; k < params; ++k) {
                CHECK(testing::within_rel_abs(vg.gradient[k], fd[k]));
            }
            const auto dense = testing::run_dense(tmpl, theta);
            CHECK(vg.value == Approx(testing::expectation_dense(
                                         dense, testing::observable_matrix(n, obs)))
                                  .margin(1e-12));
        }
    }
}
