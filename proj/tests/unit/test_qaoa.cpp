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
#include <fstream>
#include <numbers>

#include "dense_oracle.hpp"
#include "hqrl/common/error.hpp"
#include "hqrl/qaoa/qaoa.hpp"
#include "test_helpers.hpp"

using namespace hqrl;
using namespace hqrl::qaoa;
using hamiltonians::IsingHamiltonian;
using hamiltonians::KnapsackInstance;
using Catch::Approx;
using testing::CMat;
using testing::CVec;

namespace {

IsingHamiltonian single_z() {
    IsingHamiltonian h;
    h.n = 1;
    h.h[0] = 1.0;
    return h;
}

IsingHamiltonian random_ising(std::size_t n, Rng &rng) {
    IsingHamiltonian h;
    h.n = n;
    for (std::size_t i = 0; i < n; ++i) {
        h.h[i] = uniform_real(rng, -1.0, 1.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            h.J[{i, j}] = uniform_real(rng, -1.0, 1.0);
        }
    }
    return h;
}

// exp(-i b sum X) exp(-i g H) ... |+>, built from dense exponentials.
CVec dense_qaoa(const IsingHamiltonian &ham, const std::vector<double> &g,
                const std::vector<double> &b) {
    const std::size_t n = ham.n;
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    CMat hc = CMat::Zero(dim, dim);
    for (const auto &[ij, c] : ham.J) {
        hc += c * testing::pair(n, ij.first, 'Z', ij.second, 'Z');
    }
    for (const auto &[i, c] : ham.h) {
        hc += c * testing::single(n, i, 'Z');
    }
    CMat mixer = CMat::Zero(dim, dim);
    for (std::size_t q = 0; q < n; ++q) {
        mixer += testing::single(n, q, 'X');
    }
    CVec v = CVec::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    for (std::size_t l = 0; l < g.size(); ++l) {
        const CMat uc = testing::rotation(hc, 2.0 * g[l]);
        const CMat um = testing::rotation(mixer, 2.0 * b[l]);
        v = (um * uc * v).eval();
    }
    return v;
}

} // namespace

TEST_CASE("zero angles leave the uniform state", "[qaoa]") {
    Rng rng(1);
    const auto psi = qaoa_circuit(random_ising(3, rng), {0.0, 0.0}, {0.0, 0.0});
    for (double p : statesim::probabilities(psi)) {
        CHECK(p == Approx(0.125).margin(1e-14));
    }
}

TEST_CASE("single qubit landscape matches the dense oracle", "[qaoa]") {
    const auto ham = single_z();
    const CMat z = testing::pauli('Z');
    for (int a = 0; a < 20; ++a) {
        for (int c = 0; c < 20; ++c) {
            const double g = -std::numbers::pi + 2.0 * std::numbers::pi * a / 19.0;
            const double b = -std::numbers::pi + 2.0 * std::numbers::pi * c / 19.0;
            const auto psi = qaoa_circuit(ham, {g}, {b});
            const double got = statesim::expectation(psi, ham.to_observable());
            const double want = testing::expectation_dense(dense_qaoa(ham, {g}, {b}), z);
            CHECK(std::abs(got - want) < 1e-10);
        }
    }
}

TEST_CASE("multi-qubit multi-layer circuit matches the dense oracle", "[qaoa]") {
    Rng rng(7);
    for (std::size_t n : {2, 3, 4}) {
        const auto ham = random_ising(n, rng);
        const std::vector<double> g{0.3, -0.7, 1.1};
        const std::vector<double> b{-0.4, 0.2, 0.9};
        const CVec want = dense_qaoa(ham, g, b);
        const CVec got = testing::to_eigen(qaoa_circuit(ham, g, b));
        CHECK((got - want).norm() < 1e-10);
    }
}

TEST_CASE("optimizers solve a single Z", "[qaoa]") {
    QaoaConfig cfg;
    cfg.p = 1;
    Rng rng(3);
    const auto adam = qaoa_optimize(single_z(), cfg, rng);
    CHECK(adam.trace.size() <= 100);
    CHECK(adam.final_energy <= -0.99);

    cfg.optimizer = Optimizer::NelderMead;
    Rng rng2(3);
    const auto nm = qaoa_optimize(single_z(), cfg, rng2);
    CHECK(nm.trace.size() <= 100);
    CHECK(nm.final_energy <= -0.99);
    for (std::size_t i = 1; i < nm.trace.size(); ++i) {
        CHECK(nm.trace[i] <= nm.trace[i - 1]);
    }
}

TEST_CASE("trace is reproducible and usually descends", "[qaoa]") {
    QaoaConfig cfg;
    Rng gen(11);
    const auto ham = random_ising(4, gen);
    Rng a(5);
    Rng b(5);
    CHECK(qaoa_optimize(ham, cfg, a).trace == qaoa_optimize(ham, cfg, b).trace);

    int descended = 0;
    const int seeds = 40;
    for (int s = 0; s < seeds; ++s) {
        Rng r = derive_rng(99, static_cast<std::uint64_t>(s));
        const auto h = random_ising(3, r);
        const auto res = qaoa_optimize(h, cfg, r);
        CHECK(res.trace.size() <= cfg.max_iterations);
        descended += res.trace.back() <= res.trace.front() ? 1 : 0;
    }
    CHECK(descended >= 38);
}

TEST_CASE("flat landscape stops on the gradient norm", "[qaoa]") {
    IsingHamiltonian h;
    h.n = 2;
    h.constant = 0.5;
    Rng rng(1);
    const auto res = qaoa_optimize(h, {}, rng);
    CHECK(res.trace.size() == 1);
    CHECK(res.final_energy == Approx(0.5));
}

TEST_CASE("config validation", "[qaoa]") {
    QaoaConfig cfg;
    cfg.p = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.p = 1;
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(qaoa_circuit(single_z(), {0.1}, {}), DimensionError);
    CHECK(optimizer_from_string("nelder_mead") == Optimizer::NelderMead);
    CHECK_THROWS_AS(encoding_from_string("dense"), ConfigError);
}

TEST_CASE("knapsack metrics", "[qaoa]") {
    KnapsackInstance one{{1.0}, {1.0}, 0.0};
    const auto uniform = statesim::StateVector::plus(1);
    const auto m = knapsack_metrics(uniform, one);
    CHECK(m.p_valid == Approx(0.5));
    CHECK(m.p_optimal == Approx(0.5)); // x = 0 is the only feasible choice

    KnapsackInstance inst{{4.0, 2.0, 3.0}, {3.0, 3.0, 2.0}, 5.0};
    const auto opt = hamiltonians::knapsack_optimum(inst);
    const auto ground = knapsack_metrics(statesim::StateVector::basis(3, opt.x), inst);
    CHECK(ground.p_optimal == 1.0);
    CHECK(ground.p_valid == 1.0);

    // Slack bits are ignored when decoding.
    const auto padded = knapsack_metrics(statesim::StateVector::basis(6, opt.x | 0b101000), inst);
    CHECK(padded.p_optimal == 1.0);

    Rng rng(2);
    const auto mixed = knapsack_metrics(testing::random_state(5, rng), inst);
    CHECK(mixed.p_optimal <= mixed.p_valid + 1e-15);
}

TEST_CASE("knapsack runs and CSV", "[qaoa]") {
    KnapsackInstance inst{{4.0, 2.0, 3.0}, {3.0, 3.0, 2.0}, 5.0};
    KnapsackQaoaOptions opt;
    opt.restarts = 2;
    opt.qaoa.max_iterations = 10;
    const auto un = run_knapsack_qaoa(inst, 4, Encoding::Unbalanced, opt, 17);
    const auto sl = run_knapsack_qaoa(inst, 4, Encoding::Slack, opt, 17);
    REQUIRE(un.size() == 2);
    REQUIRE(sl.size() == 2);
    for (const auto &r : un) {
        CHECK(r.instance_id == 4);
        CHECK(r.p_optimal >= 0.0);
        CHECK(r.p_optimal <= r.p_valid + 1e-12);
    }
    CHECK(sl[1].restart == 1);
    CHECK(run_knapsack_qaoa(inst, 4, Encoding::Slack, opt, 17)[1].p_valid == sl[1].p_valid);

    const auto dir = testing::scratch_dir("qaoa_csv");
    write_qaoa_csv(dir / "q.csv", {un[0]});
    std::ifstream in(dir / "q.csv");
    std::string header;
    std::string row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "instance_id,encoding,restart,p_optimal,p_valid,final_energy");
    CHECK(row.rfind("4,unbalanced,0,", 0) == 0);
}
