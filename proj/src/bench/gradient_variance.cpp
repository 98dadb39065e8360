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
#include "hqrl/bench/gradient_variance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <thread>

#include "hqrl/common/error.hpp"
#include "hqrl/hamiltonians/instance_io.hpp"

namespace hqrl::bench {

using ansatz::AnsatzKind;

hamiltonians::IsingHamiltonian benchmark_hamiltonian(std::size_t n) {
    hamiltonians::IsingHamiltonian ham;
    ham.n = n;
    for (std::size_t i = 0; i < n; ++i) {
        ham.h[i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            ham.J[{i, j}] = 1.0;
        }
    }
    return ham;
}

hamiltonians::IsingHamiltonian random_benchmark_hamiltonian(std::size_t n, Rng &rng) {
    hamiltonians::IsingHamiltonian ham;
    ham.n = n;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ham.J[{i, j}] = 1.0 - uniform_real(rng, 0.0, 1.0);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        ham.h[i] = 1.0 - uniform_real(rng, 0.0, 1.0);
    }
    return ham;
}

std::size_t target_param(AnsatzKind kind, const hamiltonians::IsingHamiltonian &ham,
                         const statesim::CircuitTemplate &tmpl, const VarianceOptions &opt) {
    const std::size_t layer = (opt.layers + 1) / 2;
    const std::size_t slot = opt.slot == SlotRule::VariationalBlock
                                 ? ansatz::variational_offset(kind, ham) + 1
                                 : 2;
    return ansatz::param_slot(tmpl, layer, slot);
}

namespace {

double one_sample(AnsatzKind kind, std::size_t n, const VarianceOptions &opt,
                  std::size_t s) {
    Rng rng = derive_rng(opt.seed, s);
    const auto raw = opt.coefficients == Coefficients::Random
                         ? random_benchmark_hamiltonian(n, rng)
                         : benchmark_hamiltonian(n);
    const auto ham = ansatz::normalize_coefficients(raw);
    const auto tmpl = ansatz::build(kind, ham, std::nullopt, opt.layers);
    const std::size_t index = target_param(kind, ham, tmpl, opt);
    statesim::Observable cost;
    const auto h_obs = ham.to_observable();
    cost.add(h_obs, 1.0 / h_obs.coefficient_l1());
    const auto theta =
        ansatz::init_params(tmpl.param_count, rng, -std::numbers::pi, std::numbers::pi);
    return statesim::gradient(tmpl, theta, cost)[index];
}

} // namespace

std::vector<double> gradient_samples(AnsatzKind kind, std::size_t n,
                                     const VarianceOptions &opt) {
    HQRL_REQUIRE(opt.samples >= 2, ContractViolation, "variance needs >= 2 samples");
    // Fail early on a missing slot rather than inside a worker.
    {
        const auto ham = benchmark_hamiltonian(n);
        (void)target_param(kind, ham, ansatz::build(kind, ham, std::nullopt, opt.layers), opt);
    }
    std::vector<double> out(opt.samples);
    auto run = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t s = begin; s < opt.samples; s += stride) {
            out[s] = one_sample(kind, n, opt, s);
        }
    };

    std::size_t workers = opt.workers == 0 ? std::thread::hardware_concurrency() : opt.workers;
    workers = std::clamp<std::size_t>(workers, 1, opt.samples);
    if (workers == 1) {
        run(0, 1);
        return out;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(run, w, workers);
    }
    pool.clear(); // joins
    return out;
}

MomentSummary summarize(const std::vector<double> &xs) {
    const auto m = static_cast<double>(xs.size());
    HQRL_REQUIRE(xs.size() >= 2, ContractViolation, "need >= 2 samples");
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= m;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        const double d = (x - mean) * (x - mean);
        m2 += d;
        m4 += d * d;
    }
    const double var = m2 / (m - 1.0);
    const double mu4 = m4 / m;
    const double sigma2 = m2 / m;
    // Var(s^2) = (mu4 - (m-3)/(m-1) sigma^4) / m
    const double v = (mu4 - (m - 3.0) / (m - 1.0) * sigma2 * sigma2) / m;
    return {mean, var, std::sqrt(std::max(v, 0.0))};
}

VariancePoint gradient_variance(AnsatzKind kind, std::size_t n, const VarianceOptions &opt) {
    const auto xs = gradient_samples(kind, n, opt);
    const auto s = summarize(xs);
    VariancePoint p;
    p.kind = kind;
    p.n = n;
    p.layers = opt.layers;
    p.samples = opt.samples;
    p.seed = opt.seed;
    p.mean = s.mean;
    p.variance = s.variance;
    p.std_error = s.std_error;
    return p;
}

DecayFit decay_fit(const std::vector<double> &ns, const std::vector<double> &variances) {
    HQRL_REQUIRE(ns.size() == variances.size(), DimensionError,
                 "decay_fit: n and variance lengths differ");
    HQRL_REQUIRE(ns.size() >= 3, ContractViolation, "decay_fit needs >= 3 points");
    const auto k = static_cast<double>(ns.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        HQRL_REQUIRE(variances[i] > 0.0, NumericalError,
                     "decay_fit: variance must be positive");
        const double y = std::log(variances[i]);
        sx += ns[i];
        sy += y;
        sxx += ns[i] * ns[i];
        sxy += ns[i] * y;
    }
    const double denom = k * sxx - sx * sx;
    HQRL_REQUIRE(denom != 0.0, ContractViolation, "decay_fit needs distinct n values");
    DecayFit f;
    f.slope = (k * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / k;
    return f;
}

void write_variance_csv(const std::filesystem::path &path,
                        const std::vector<VariancePoint> &points) {
    std::ofstream out(path, std::ios::trunc);
    out << "kind,n,L,samples,variance,std_error,seed\n";
    for (const auto &p : points) {
        out << ansatz::to_string(p.kind) << ',' << p.n << ',' << p.layers << ','
            << p.samples << ',' << hamiltonians::format_double(p.variance) << ','
            << hamiltonians::format_double(p.std_error) << ',' << p.seed << '\n';
    }
    if (!out) {
        throw Error("cannot write " + path.string());
    }
}

} // namespace hqrl::bench
