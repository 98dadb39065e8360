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

#include "hqrl/qaoa/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "hqrl/agents/optim.hpp"
#include "hqrl/common/error.hpp"
#include "hqrl/hamiltonians/instance_io.hpp"

namespace hqrl::qaoa {

using hamiltonians::Bits;
using hamiltonians::IsingHamiltonian;
using statesim::GateKind;

std::string_view to_string(Optimizer o) {
    return o == Optimizer::Adam ? "adam" : "nelder_mead";
}

Optimizer optimizer_from_string(std::string_view name) {
    if (name == "adam") {
        return Optimizer::Adam;
    }
    if (name == "nelder_mead") {
        return Optimizer::NelderMead;
    }
    throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

std::string_view to_string(Encoding e) {
    return e == Encoding::Unbalanced ? "unbalanced" : "slack";
}

Encoding encoding_from_string(std::string_view name) {
    if (name == "unbalanced") {
        return Encoding::Unbalanced;
    }
    if (name == "slack") {
        return Encoding::Slack;
    }
    throw ConfigError("unknown encoding '" + std::string(name) + "'");
}

void QaoaConfig::validate() const {
    HQRL_REQUIRE(p >= 1, ConfigError, "qaoa p must be >= 1");
    HQRL_REQUIRE(max_iterations >= 1, ConfigError, "qaoa max_iterations must be >= 1");
    HQRL_REQUIRE(learning_rate > 0.0, ConfigError, "qaoa learning_rate must be > 0");
    HQRL_REQUIRE(init_range >= 0.0, ConfigError, "qaoa init_range must be >= 0");
}

statesim::CircuitTemplate qaoa_template(const IsingHamiltonian &ham, std::size_t p) {
    HQRL_REQUIRE(p >= 1, ContractViolation, "qaoa needs p >= 1");
    HQRL_REQUIRE(ham.n >= 1, DimensionError, "empty Hamiltonian");
    statesim::CircuitTemplate t;
    t.num_qubits = ham.n;
    t.initial_state = statesim::InitialState::Plus;
    t.param_count = 2 * p;
    auto gate = [&](GateKind k, std::size_t a, std::size_t b, std::size_t param, double scale) {
        statesim::TemplateGate g;
        g.kind = k;
        g.qubit0 = a;
        g.qubit1 = b;
        g.binding.param = static_cast<std::int64_t>(param);
        g.binding.scale = scale;
        t.gates.push_back(g);
    };
    for (std::size_t l = 0; l < p; ++l) {
        t.layer_starts.push_back(t.gates.size());
        t.layer_params.push_back({2 * l, 2 * l + 1});
        for (const auto &[ij, c] : ham.J) {
            gate(GateKind::RZZ, ij.first, ij.second, 2 * l, 2.0 * c);
        }
        for (const auto &[i, c] : ham.h) {
            gate(GateKind::RZ, i, i, 2 * l, 2.0 * c);
        }
        for (std::size_t q = 0; q < ham.n; ++q) {
            gate(GateKind::RX, q, q, 2 * l + 1, 2.0);
        }
    }
    return t;
}

namespace {

std::vector<double> interleave(const std::vector<double> &gamma, const std::vector<double> &beta) {
    std::vector<double> x;
    x.reserve(2 * gamma.size());
    for (std::size_t l = 0; l < gamma.size(); ++l) {
        x.push_back(gamma[l]);
        x.push_back(beta[l]);
    }
    return x;
}

// Nelder-Mead with the usual coefficients; trace holds the best vertex
// after each iteration.
template <typename F>
std::vector<double> nelder_mead(F &&f, std::vector<double> x0, std::size_t iters, double step,
                                std::vector<double> &trace) {
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> simplex(d + 1, x0);
    for (std::size_t i = 0; i < d; ++i) {
        simplex[i + 1][i] += step;
    }
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
        fv[i] = f(simplex[i]);
    }
    std::vector<std::size_t> order(d + 1);
    auto point = [&](const std::vector<double> &c, const std::vector<double> &w, double t) {
        std::vector<double> out(d);
        for (std::size_t k = 0; k < d; ++k) {
            out[k] = c[k] + t * (w[k] - c[k]);
        }
        return out;
    };
    for (std::size_t it = 0; it < iters; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[d - 1];

        std::vector<double> c(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t k = 0; k < d; ++k) {
                c[k] += simplex[i][k] / static_cast<double>(d);
            }
        }
        const auto xr = point(c, simplex[worst], -1.0);
        const double fr = f(xr);
        if (fr < fv[best]) {
            const auto xe = point(c, simplex[worst], -2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const auto xc = point(c, outside ? xr : simplex[worst], 0.5);
            const double fc = f(xc);
            if (fc < (outside ? fr : fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) {
                        continue;
                    }
                    simplex[i] = point(simplex[best], simplex[i], 0.5);
                    fv[i] = f(simplex[i]);
                }
            }
        }
        trace.push_back(*std::min_element(fv.begin(), fv.end()));
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    return simplex[static_cast<std::size_t>(it - fv.begin())];
}

} // namespace

statesim::StateVector qaoa_circuit(const IsingHamiltonian &ham, const std::vector<double> &gamma,
                                   const std::vector<double> &beta) {
    HQRL_REQUIRE(!gamma.empty() && gamma.size() == beta.size(), DimensionError,
                 "gamma and beta need the same nonzero length");
    const auto t = qaoa_template(ham, gamma.size());
    return statesim::run_circuit(t, interleave(gamma, beta));
}

IsingHamiltonian fitted_hamiltonian(const IsingHamiltonian &ham, const QaoaConfig &cfg) {
    return cfg.normalize ? ham.normalized() : ham;
}

QaoaResult qaoa_optimize(const IsingHamiltonian &ham, const QaoaConfig &cfg, Rng &rng) {
    cfg.validate();
    const IsingHamiltonian target = fitted_hamiltonian(ham, cfg);
    const auto t = qaoa_template(target, cfg.p);
    const auto obs = target.to_observable();

    std::vector<double> x(2 * cfg.p);
    for (auto &v : x) {
        v = uniform_real(rng, -cfg.init_range, cfg.init_range);
    }

    QaoaResult res;
    if (cfg.optimizer == Optimizer::Adam) {
        agents::Adam adam(x.size(), cfg.learning_rate);
        while (true) {
            const auto vg = statesim::value_and_gradient(t, x, obs);
            res.trace.push_back(vg.value);
            double norm2 = 0.0;
            for (double g : vg.gradient) {
                norm2 += g * g;
            }
            if (res.trace.size() >= cfg.max_iterations || std::sqrt(norm2) < cfg.grad_tol) {
                break;
            }
            adam.step(x, vg.gradient);
        }
    } else {
        auto f = [&](const std::vector<double> &p) {
            return statesim::expectation(statesim::run_circuit(t, p), obs);
        };
        x = nelder_mead(f, x, cfg.max_iterations, 0.25, res.trace);
    }

    for (std::size_t l = 0; l < cfg.p; ++l) {
        res.gamma.push_back(x[2 * l]);
        res.beta.push_back(x[2 * l + 1]);
    }
    res.final_energy = statesim::expectation(statesim::run_circuit(t, x), ham.to_observable());
    return res;
}

QaoaMetrics qaoa_metrics(const statesim::StateVector &state,
                         const std::function<bool(Bits)> &optimal,
                         const std::function<bool(Bits)> &valid) {
    const auto probs = statesim::probabilities(state);
    QaoaMetrics m;
    for (std::size_t x = 0; x < probs.size(); ++x) {
        if (optimal(x)) {
            m.p_optimal += probs[x];
        }
        if (valid(x)) {
            m.p_valid += probs[x];
        }
    }
    return m;
}

QaoaMetrics knapsack_metrics(const statesim::StateVector &state,
                             const hamiltonians::KnapsackInstance &inst) {
    const std::size_t n = inst.size();
    HQRL_REQUIRE(state.num_qubits() >= n, DimensionError,
                 "state has fewer qubits than knapsack items");
    const double best = hamiltonians::knapsack_optimum(inst).value;
    const Bits items = (Bits{1} << n) - 1;
    auto valid = [&](Bits x) { return hamiltonians::evaluate_knapsack(inst, x & items).valid; };
    auto optimal = [&](Bits x) {
        const auto e = hamiltonians::evaluate_knapsack(inst, x & items);
        return e.valid && e.objective >= best - 1e-9 * std::max(1.0, std::abs(best));
    };
    return qaoa_metrics(state, optimal, valid);
}

std::vector<KnapsackQaoaRow> run_knapsack_qaoa(const hamiltonians::KnapsackInstance &inst,
                                               std::size_t instance_id, Encoding enc,
                                               const KnapsackQaoaOptions &opt,
                                               std::uint64_t seed) {
    HQRL_REQUIRE(opt.restarts >= 1, ConfigError, "qaoa restarts must be >= 1");
    hamiltonians::QuboProblem qubo;
    if (enc == Encoding::Unbalanced) {
        qubo = hamiltonians::knapsack_qubo_unbalanced(inst, opt.lambda1, opt.lambda2);
    } else {
        double pen = opt.slack_penalty;
        if (pen <= 0.0) {
            pen = std::accumulate(inst.values.begin(), inst.values.end(), 0.0) + 1.0;
        }
        qubo = hamiltonians::knapsack_qubo_slack(inst, pen);
    }
    const auto ham = hamiltonians::qubo_to_ising(qubo);

    std::vector<KnapsackQaoaRow> rows;
    for (std::size_t r = 0; r < opt.restarts; ++r) {
        Rng rng = derive_rng(seed, r);
        const auto res = qaoa_optimize(ham, opt.qaoa, rng);
        const auto psi = qaoa_circuit(fitted_hamiltonian(ham, opt.qaoa), res.gamma, res.beta);
        const auto m = knapsack_metrics(psi, inst);
        rows.push_back({instance_id, enc, r, m.p_optimal, m.p_valid, res.final_energy});
    }
    return rows;
}

void write_qaoa_csv(const std::filesystem::path &path, const std::vector<KnapsackQaoaRow> &rows) {
    std::ofstream out(path, std::ios::trunc);
    out << "instance_id,encoding,restart,p_optimal,p_valid,final_energy\n";
    for (const auto &r : rows) {
        out << r.instance_id << ',' << to_string(r.encoding) << ',' << r.restart << ','
            << hamiltonians::format_double(r.p_optimal) << ','
            << hamiltonians::format_double(r.p_valid) << ','
            << hamiltonians::format_double(r.final_energy) << '\n';
    }
    if (!out) {
        throw Error("cannot write " + path.string());
    }
}

} // namespace hqrl::qaoa
