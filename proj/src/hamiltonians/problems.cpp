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
#include "hqrl/hamiltonians/problems.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hqrl/common/error.hpp"

namespace hqrl::hamiltonians {

namespace {

constexpr double kTieTol = 1e-9;

bool same_value(double a, double b) {
    return std::abs(a - b) <= kTieTol * std::max(1.0, std::abs(a));
}

/// Lexicographic order of the variable-0-first string.
bool lex_less(Bits a, Bits b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const int ba = bit(a, i);
        const int bb = bit(b, i);
        if (ba != bb) {
            return ba < bb;
        }
    }
    return false;
}

void check_capacity(std::size_t n) {
    if (n > kMaxBruteForceVars) {
        throw CapacityError("brute force limited to " +
                            std::to_string(kMaxBruteForceVars) +
                            " variables, got " + std::to_string(n));
    }
}

/// Dense upper-triangular copy for the enumeration loops.
struct DenseQubo {
    std::size_t n;
    std::vector<double> lin;
    std::vector<double> quad; // row-major n x n, only i < j used

    explicit DenseQubo(const QuboProblem &q)
        : n(q.n), lin(q.n, 0.0), quad(q.n * q.n, 0.0) {
        for (const auto &[i, c] : q.linear) {
            lin[i] += c;
        }
        for (const auto &[ij, c] : q.quadratic) {
            quad[ij.first * n + ij.second] += c;
        }
    }

    [[nodiscard]] double value(Bits x, double offset) const {
        double v = offset;
        for (Bits rest = x; rest != 0; rest &= rest - 1) {
            const auto i = static_cast<std::size_t>(__builtin_ctzll(rest));
            v += lin[i];
            for (Bits hi = rest & (rest - 1); hi != 0; hi &= hi - 1) {
                v += quad[i * n + static_cast<std::size_t>(__builtin_ctzll(hi))];
            }
        }
        return v;
    }
};

BruteForceResult argmin(const std::vector<double> &values, std::size_t n) {
    BruteForceResult best{0, values[0]};
    for (Bits x = 1; x < values.size(); ++x) {
        const double v = values[x];
        if (same_value(v, best.value)) {
            if (lex_less(x, best.x, n)) {
                best = {x, std::min(v, best.value)};
            }
        } else if (v < best.value) {
            best = {x, v};
        }
    }
    best.value = values[best.x];
    return best;
}

} // namespace

void WeightedGraph::add_edge(std::size_t i, std::size_t j, double weight) {
    HQRL_REQUIRE(i < num_nodes_ && j < num_nodes_, IndexError,
                 "edge endpoint out of range");
    HQRL_REQUIRE(i != j, ContractViolation, "self-loop");
    HQRL_REQUIRE(std::isfinite(weight), ContractViolation, "non-finite edge weight");
    if (i > j) {
        std::swap(i, j);
    }
    for (const auto &e : edges_) {
        HQRL_REQUIRE(!(e.i == i && e.j == j), ContractViolation, "duplicate edge");
    }
    edges_.push_back({i, j, weight});
}

double WeightedGraph::total_weight() const {
    double w = 0.0;
    for (const auto &e : edges_) {
        w += e.weight;
    }
    return w;
}

WeightedGraph WeightedGraph::complete(std::size_t n, double weight) {
    WeightedGraph g(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            g.add_edge(i, j, weight);
        }
    }
    return g;
}

double cut_value(const WeightedGraph &g, Bits x) {
    double c = 0.0;
    for (const auto &e : g.edges()) {
        if (bit(x, e.i) != bit(x, e.j)) {
            c += e.weight;
        }
    }
    return c;
}

void QuboProblem::add_quadratic(std::size_t i, std::size_t j, double c) {
    HQRL_REQUIRE(i < n && j < n, IndexError, "QUBO index out of range");
    if (i == j) {
        linear[i] += c;
        return;
    }
    quadratic[{std::min(i, j), std::max(i, j)}] += c;
}

void QuboProblem::add_linear(std::size_t i, double c) {
    HQRL_REQUIRE(i < n, IndexError, "QUBO index out of range");
    linear[i] += c;
}

double QuboProblem::value(Bits x) const {
    double v = offset;
    for (const auto &[i, c] : linear) {
        v += c * bit(x, i);
    }
    for (const auto &[ij, c] : quadratic) {
        v += c * (bit(x, ij.first) & bit(x, ij.second));
    }
    return v;
}

double IsingHamiltonian::energy(Bits x) const {
    auto z = [x](std::size_t i) { return 1.0 - 2.0 * bit(x, i); };
    double e = constant;
    for (const auto &[i, c] : h) {
        e += c * z(i);
    }
    for (const auto &[ij, c] : J) {
        e += c * z(ij.first) * z(ij.second);
    }
    return e;
}

double IsingHamiltonian::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto &[k, c] : J) {
        m = std::max(m, std::abs(c));
    }
    for (const auto &[k, c] : h) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

IsingHamiltonian IsingHamiltonian::normalized() const {
    const double m = max_abs_coefficient();
    IsingHamiltonian out = *this;
    if (m == 0.0) {
        return out;
    }
    for (auto &[k, c] : out.J) {
        c /= m;
    }
    for (auto &[k, c] : out.h) {
        c /= m;
    }
    return out;
}

statesim::Observable IsingHamiltonian::to_observable() const {
    statesim::Observable obs;
    for (const auto &[ij, c] : J) {
        obs.add_zz(ij.first, ij.second, c);
    }
    for (const auto &[i, c] : h) {
        obs.add_z(i, c);
    }
    if (constant != 0.0) {
        obs.add(statesim::Observable::identity(constant));
    }
    return obs;
}

void KnapsackInstance::validate() const {
    HQRL_REQUIRE(!values.empty() && values.size() == weights.size(), DimensionError,
                 "knapsack needs matching, non-empty values and weights");
    for (std::size_t i = 0; i < values.size(); ++i) {
        HQRL_REQUIRE(values[i] > 0 && weights[i] > 0, ContractViolation,
                     "knapsack values and weights must be positive");
    }
    HQRL_REQUIRE(capacity >= 0, ContractViolation, "negative knapsack capacity");
}

void UcpInstance::validate() const {
    const std::size_t n = A.size();
    HQRL_REQUIRE(n >= 1 && B.size() == n && C.size() == n && p_min.size() == n &&
                     p_max.size() == n,
                 DimensionError, "UCP columns differ in length");
    for (std::size_t i = 0; i < n; ++i) {
        HQRL_REQUIRE(p_min[i] > 0 && p_min[i] <= p_max[i], ContractViolation,
                     "UCP needs 0 < p_min <= p_max");
        HQRL_REQUIRE(C[i] >= 0, ContractViolation, "UCP quadratic cost must be >= 0");
    }
}

IsingHamiltonian maxcut_ising(const WeightedGraph &g) {
    IsingHamiltonian ham;
    ham.n = g.num_nodes();
    for (const auto &e : g.edges()) {
        ham.J[{e.i, e.j}] += e.weight;
    }
    return ham;
}

double default_ucp_penalty(const UcpInstance &inst) {
    inst.validate();
    double max_cost = 0.0;
    double min_p = inst.p_min[0];
    for (std::size_t i = 0; i < inst.size(); ++i) {
        max_cost = std::max(max_cost, inst.unit_cost(i, inst.p_max[i]));
        min_p = std::min(min_p, inst.p_min[i]);
    }
    return 2.0 * max_cost / min_p;
}

QuboProblem ucp_qubo(const UcpInstance &inst, const std::vector<double> &p,
                     double demand, double lambda_eq) {
    inst.validate();
    HQRL_REQUIRE(p.size() == inst.size(), DimensionError, "one power per generator");
    HQRL_REQUIRE(demand >= 0, ContractViolation, "negative demand");
    HQRL_REQUIRE(lambda_eq >= 0, ContractViolation, "negative penalty weight");
    QuboProblem q;
    q.n = inst.size();
    // lambda (sum p x - L)^2 with x^2 = x.
    for (std::size_t i = 0; i < q.n; ++i) {
        q.add_linear(i, inst.unit_cost(i, p[i]) +
                            lambda_eq * (p[i] * p[i] - 2.0 * demand * p[i]));
        for (std::size_t j = i + 1; j < q.n; ++j) {
            q.add_quadratic(i, j, 2.0 * lambda_eq * p[i] * p[j]);
        }
    }
    q.offset = lambda_eq * demand * demand;
    return q;
}

QuboProblem knapsack_qubo_unbalanced(const KnapsackInstance &inst,
                                     double lambda1, double lambda2) {
    inst.validate();
    HQRL_REQUIRE(inst.size() <= statesim::kMaxQubits, CapacityError,
                 "unbalanced knapsack limited to 20 items");
    HQRL_REQUIRE(lambda1 >= 0 && lambda2 >= 0, ContractViolation,
                 "penalty weights must be >= 0");
    const auto &w = inst.weights;
    const double M = inst.capacity;
    QuboProblem q;
    q.n = inst.size();
    // h(x) = M - sum w x; value = -v.x + l1 (1 - h) + l2/2 h^2.
    for (std::size_t i = 0; i < q.n; ++i) {
        q.add_linear(i, -inst.values[i] + lambda1 * w[i] +
                            0.5 * lambda2 * (w[i] * w[i] - 2.0 * M * w[i]));
        for (std::size_t j = i + 1; j < q.n; ++j) {
            q.add_quadratic(i, j, lambda2 * w[i] * w[j]);
        }
    }
    q.offset = lambda1 * (1.0 - M) + 0.5 * lambda2 * M * M;
    return q;
}

std::size_t slack_bit_count(double capacity) {
    HQRL_REQUIRE(capacity >= 0, ContractViolation, "negative capacity");
    std::size_t k = 0;
    while (std::ldexp(1.0, static_cast<int>(k)) - 1.0 < capacity) {
        ++k;
    }
    return k;
}

QuboProblem knapsack_qubo_slack(const KnapsackInstance &inst, double penalty) {
    inst.validate();
    HQRL_REQUIRE(penalty > 0, ContractViolation, "slack penalty must be > 0");
    const std::size_t N = inst.size();
    const std::size_t K = slack_bit_count(inst.capacity);
    const double M = inst.capacity;
    std::vector<double> a(inst.weights);
    for (std::size_t k = 0; k < K; ++k) {
        a.push_back(std::ldexp(1.0, static_cast<int>(k)));
    }
    QuboProblem q;
    q.n = N + K;
    // penalty (sum a y - M)^2 over items and slack bits alike.
    for (std::size_t i = 0; i < q.n; ++i) {
        const double reward = i < N ? -inst.values[i] : 0.0;
        q.add_linear(i, reward + penalty * (a[i] * a[i] - 2.0 * M * a[i]));
        for (std::size_t j = i + 1; j < q.n; ++j) {
            q.add_quadratic(i, j, 2.0 * penalty * a[i] * a[j]);
        }
    }
    q.offset = penalty * M * M;
    return q;
}

IsingHamiltonian qubo_to_ising(const QuboProblem &q) {
    IsingHamiltonian ham;
    ham.n = q.n;
    ham.constant = q.offset;
    // x_i = (1 - z_i) / 2
    for (const auto &[i, c] : q.linear) {
        ham.h[i] -= 0.5 * c;
        ham.constant += 0.5 * c;
    }
    for (const auto &[ij, c] : q.quadratic) {
        const double k = 0.25 * c;
        ham.J[ij] += k;
        ham.h[ij.first] -= k;
        ham.h[ij.second] -= k;
        ham.constant += k;
    }
    return ham;
}

std::vector<double> qubo_values(const QuboProblem &q) {
    check_capacity(q.n);
    const DenseQubo dense(q);
    std::vector<double> out(std::size_t{1} << q.n);
    for (Bits x = 0; x < out.size(); ++x) {
        out[x] = dense.value(x, q.offset);
    }
    return out;
}

BruteForceResult brute_force(const QuboProblem &q) {
    return argmin(qubo_values(q), q.n);
}

BruteForceResult brute_force(const IsingHamiltonian &ham) {
    check_capacity(ham.n);
    std::vector<double> values(std::size_t{1} << ham.n);
    for (Bits x = 0; x < values.size(); ++x) {
        values[x] = ham.energy(x);
    }
    return argmin(values, ham.n);
}

std::size_t value_rank(const QuboProblem &q, Bits x) {
    const auto values = qubo_values(q);
    HQRL_REQUIRE(x < values.size(), IndexError, "bitstring outside the QUBO");
    const double target = values[x];
    return static_cast<std::size_t>(std::count_if(
        values.begin(), values.end(), [target](double v) {
            return v < target && !same_value(v, target);
        }));
}

Evaluation evaluate_maxcut(const WeightedGraph &g, Bits x) {
    return {cut_value(g, x), true, 0.0};
}

Evaluation evaluate_knapsack(const KnapsackInstance &inst, Bits x) {
    Evaluation ev;
    double weight = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        if (bit(x, i)) {
            ev.objective += inst.values[i];
            weight += inst.weights[i];
        }
    }
    ev.residual = inst.capacity - weight;
    ev.valid = weight <= inst.capacity;
    return ev;
}

Evaluation evaluate_ucp(const UcpInstance &inst, const std::vector<double> &p,
                        double demand, Bits x) {
    HQRL_REQUIRE(p.size() == inst.size(), DimensionError, "one power per generator");
    Evaluation ev;
    double supplied = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        if (bit(x, i)) {
            ev.objective += inst.unit_cost(i, p[i]);
            supplied += p[i];
        }
    }
    ev.residual = supplied - demand;
    ev.valid = ev.residual >= 0.0;
    return ev;
}

BruteForceResult knapsack_optimum(const KnapsackInstance &inst) {
    inst.validate();
    check_capacity(inst.size());
    BruteForceResult best{0, 0.0};
    for (Bits x = 1; x < (Bits{1} << inst.size()); ++x) {
        const auto ev = evaluate_knapsack(inst, x);
        if (!ev.valid) {
            continue;
        }
        if (same_value(ev.objective, best.value)) {
            if (lex_less(x, best.x, inst.size())) {
                best.x = x;
            }
        } else if (ev.objective > best.value) {
            best = {x, ev.objective};
        }
    }
    best.value = evaluate_knapsack(inst, best.x).objective;
    return best;
}

} // namespace hqrl::hamiltonians
