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
 * @file problems.hpp
 * Problem instances, their QUBO / Ising encodings and exhaustive oracles.
 *
 * Bitstrings are uint64 masks: bit i is variable i (qubit i). Spins use
 * z_i = 1 - 2 x_i, so x_i = 1 <-> z_i = -1 <-> qubit i measured as |1>.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hqrl/statesim/state_vector.hpp"

namespace hqrl::hamiltonians {

using Bits = std::uint64_t;
using Pair = std::pair<std::size_t, std::size_t>;

/// Largest variable count accepted by the exhaustive oracles.
inline constexpr std::size_t kMaxBruteForceVars = 22;

inline int bit(Bits x, std::size_t i) { return static_cast<int>((x >> i) & 1U); }

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 1.0;
};

class WeightedGraph {
  public:
    WeightedGraph() = default;
    explicit WeightedGraph(std::size_t num_nodes) : num_nodes_(num_nodes) {}

    /// Stores the edge with i < j. Self-loops, duplicates and non-finite
    /// weights are rejected.
    void add_edge(std::size_t i, std::size_t j, double weight);

    [[nodiscard]] std::size_t num_nodes() const { return num_nodes_; }
    [[nodiscard]] const std::vector<Edge> &edges() const { return edges_; }
    [[nodiscard]] double total_weight() const;

    static WeightedGraph complete(std::size_t n, double weight = 1.0);

  private:
    std::size_t num_nodes_ = 0;
    std::vector<Edge> edges_;
};

/// Sum of weights of edges whose endpoints sit on different sides.
double cut_value(const WeightedGraph &g, Bits x);

struct QuboProblem {
    std::size_t n = 0;
    std::map<Pair, double> quadratic; ///< keys (i, j) with i < j
    std::map<std::size_t, double> linear;
    double offset = 0.0;

    /// Adds c * x_i x_j; i == j folds into the linear term since x^2 = x.
    void add_quadratic(std::size_t i, std::size_t j, double c);
    void add_linear(std::size_t i, double c);

    [[nodiscard]] double value(Bits x) const;
};

struct IsingHamiltonian {
    std::size_t n = 0;
    std::map<Pair, double> J; ///< Z_i Z_j coefficients, i < j
    std::map<std::size_t, double> h;
    double constant = 0.0;

    /// sum J z_i z_j + sum h z_i + const with z_i = 1 - 2 bit_i.
    [[nodiscard]] double energy(Bits x) const;

    /// Number of encoding terms |J| + |h|.
    [[nodiscard]] std::size_t term_count() const { return J.size() + h.size(); }
    [[nodiscard]] double max_abs_coefficient() const;

    /// Copy with J and h divided by their largest magnitude; the constant is
    /// left alone. An all-zero Hamiltonian comes back unchanged.
    [[nodiscard]] IsingHamiltonian normalized() const;

    /// Diagonal observable, including the constant as an identity term.
    [[nodiscard]] statesim::Observable to_observable() const;
};

struct KnapsackInstance {
    std::vector<double> values;
    std::vector<double> weights;
    double capacity = 0.0;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    void validate() const;
};

struct UcpInstance {
    std::vector<double> A, B, C;
    std::vector<double> p_min, p_max;

    [[nodiscard]] std::size_t size() const { return A.size(); }
    [[nodiscard]] double unit_cost(std::size_t i, double p) const {
        return A[i] + B[i] * p + C[i] * p * p;
    }
    void validate() const;
};

IsingHamiltonian maxcut_ising(const WeightedGraph &g);

/// Default equality penalty 2 max_i cost_i(p_max_i) / min_i p_min_i.
double default_ucp_penalty(const UcpInstance &inst);

QuboProblem ucp_qubo(const UcpInstance &inst, const std::vector<double> &p,
                     double demand, double lambda_eq);

/// Default unbalanced weights: 0.9603 h-slope and 0.0371 h^2, written in the
/// lambda1 (1 - h) + lambda2 / 2 h^2 form.
inline constexpr double kUnbalancedLambda1 = 0.9603;
inline constexpr double kUnbalancedLambda2 = 2.0 * 0.0371;

QuboProblem knapsack_qubo_unbalanced(const KnapsackInstance &inst,
                                     double lambda1, double lambda2);

/// Smallest K with 2^K - 1 >= capacity.
std::size_t slack_bit_count(double capacity);

/// Items occupy variables 0..N-1, slack bit k sits at N + k with weight 2^k.
QuboProblem knapsack_qubo_slack(const KnapsackInstance &inst, double penalty);

IsingHamiltonian qubo_to_ising(const QuboProblem &q);

struct BruteForceResult {
    Bits x = 0;
    double value = 0.0;
};

/// Every value(x), indexed by x. n <= kMaxBruteForceVars.
std::vector<double> qubo_values(const QuboProblem &q);

/// Exact argmin; ties (within 1e-9 relative) go to the lexicographically
/// smallest bitstring written variable 0 first.
BruteForceResult brute_force(const QuboProblem &q);
BruteForceResult brute_force(const IsingHamiltonian &ham);

/// Number of bitstrings whose value is strictly below value(x) by more than
/// the tie tolerance. 0 means x is a ground state.
std::size_t value_rank(const QuboProblem &q, Bits x);

enum class ProblemKind { MaxCut, Knapsack, Ucp };

struct Evaluation {
    double objective = 0.0;
    bool valid = true;
    double residual = 0.0; ///< UCP: sum p x - demand; knapsack: M - sum w x
};

Evaluation evaluate_maxcut(const WeightedGraph &g, Bits x);
Evaluation evaluate_knapsack(const KnapsackInstance &inst, Bits x);
/// Objective is the generation cost; valid when the demand is covered.
Evaluation evaluate_ucp(const UcpInstance &inst, const std::vector<double> &p,
                        double demand, Bits x);

/// Largest total value over feasible selections (lexicographic tie-break).
BruteForceResult knapsack_optimum(const KnapsackInstance &inst);

} // namespace hqrl::hamiltonians
