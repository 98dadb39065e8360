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
 * @file qaoa.hpp
 * p-layer QAOA over an Ising Hamiltonian and its knapsack metrics.
 *
 * Layer l applies exp(-i gamma_l H_C) as RZZ(2 gamma_l J_ij) and
 * RZ(2 gamma_l h_i), then exp(-i beta_l sum X) as RX(2 beta_l). Parameters
 * are stored per layer as [gamma_l, beta_l].
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "hqrl/common/random.hpp"
#include "hqrl/hamiltonians/problems.hpp"
#include "hqrl/statesim/circuit.hpp"

namespace hqrl::qaoa {

enum class Optimizer { Adam, NelderMead };
std::string_view to_string(Optimizer o);
Optimizer optimizer_from_string(std::string_view name);

struct QaoaConfig {
    std::size_t p = 3;
    std::size_t max_iterations = 100;
    Optimizer optimizer = Optimizer::Adam;
    double learning_rate = 0.05;
    double grad_tol = 1e-8;
    /// Initial angles uniform on [-init_range, init_range].
    double init_range = std::numbers::pi / 4.0;
    /// Optimize against the max-abs normalized Hamiltonian instead of the
    /// raw couplings.
    bool normalize = false;

    void validate() const;
};

statesim::CircuitTemplate qaoa_template(const hamiltonians::IsingHamiltonian &ham, std::size_t p);

/// |+>^n followed by the p layers.
statesim::StateVector qaoa_circuit(const hamiltonians::IsingHamiltonian &ham,
                                   const std::vector<double> &gamma,
                                   const std::vector<double> &beta);

/// The Hamiltonian whose couplings the optimized angles refer to.
hamiltonians::IsingHamiltonian fitted_hamiltonian(const hamiltonians::IsingHamiltonian &ham,
                                                  const QaoaConfig &cfg);

struct QaoaResult {
    std::vector<double> gamma;
    std::vector<double> beta;
    /// Energy per iteration: Adam records the current point, Nelder-Mead
    /// the best vertex so far. At most max_iterations entries.
    std::vector<double> trace;
    /// <H> of the original (unnormalized) Hamiltonian in the final state
    /// qaoa_circuit(fitted_hamiltonian(ham, cfg), gamma, beta).
    double final_energy = 0.0;
};

QaoaResult qaoa_optimize(const hamiltonians::IsingHamiltonian &ham, const QaoaConfig &cfg,
                         Rng &rng);

struct QaoaMetrics {
    double p_optimal = 0.0;
    double p_valid = 0.0;
};

/// Born mass on bitstrings accepted by each predicate.
QaoaMetrics qaoa_metrics(const statesim::StateVector &state,
                         const std::function<bool(hamiltonians::Bits)> &optimal,
                         const std::function<bool(hamiltonians::Bits)> &valid);

/// Decodes the first N bits as the item selection; slack bits are ignored.
QaoaMetrics knapsack_metrics(const statesim::StateVector &state,
                             const hamiltonians::KnapsackInstance &inst);

enum class Encoding { Unbalanced, Slack };
std::string_view to_string(Encoding e);
Encoding encoding_from_string(std::string_view name);

struct KnapsackQaoaOptions {
    QaoaConfig qaoa;
    std::size_t restarts = 5;
    double lambda1 = hamiltonians::kUnbalancedLambda1;
    double lambda2 = hamiltonians::kUnbalancedLambda2;
    /// Slack penalty; <= 0 picks sum(v) + 1.
    double slack_penalty = 0.0;
};

struct KnapsackQaoaRow {
    std::size_t instance_id = 0;
    Encoding encoding = Encoding::Unbalanced;
    std::size_t restart = 0;
    double p_optimal = 0.0;
    double p_valid = 0.0;
    double final_energy = 0.0;
};

/// Every restart of one instance; restart r uses derive_rng(seed, r).
std::vector<KnapsackQaoaRow> run_knapsack_qaoa(const hamiltonians::KnapsackInstance &inst,
                                               std::size_t instance_id, Encoding enc,
                                               const KnapsackQaoaOptions &opt,
                                               std::uint64_t seed);

/// Header: instance_id,encoding,restart,p_optimal,p_valid,final_energy
void write_qaoa_csv(const std::filesystem::path &path, const std::vector<KnapsackQaoaRow> &rows);

} // namespace hqrl::qaoa
