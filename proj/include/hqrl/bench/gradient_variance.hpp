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
 * @file gradient_variance.hpp
 * Sampled variance of one cost-gradient component over random parameters.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hqrl/ansatz/ansatz.hpp"
#include "hqrl/common/random.hpp"

namespace hqrl::bench {

/// Complete graph with every J_ij = 1 and every h_i = 1.
hamiltonians::IsingHamiltonian benchmark_hamiltonian(std::size_t n);

/// Complete graph with J_ij (ordered by (i, j)) then h_i drawn uniform on
/// (0, 1] from `rng`.
hamiltonians::IsingHamiltonian random_benchmark_hamiltonian(std::size_t n, Rng &rng);

enum class Coefficients {
    /// Fresh (0, 1] coefficients for every sample.
    Random,
    /// All coefficients 1. The sge_sgv circuit is then invariant under
    /// qubit permutations and never leaves the (n+1)-dimensional symmetric
    /// subspace, so its gradient variance cannot decay exponentially.
    Unit,
};

enum class SlotRule {
    /// First parameter of the variational block in layer ceil(L/2).
    VariationalBlock,
    /// Second parameter created in layer ceil(L/2). For the mge kinds this
    /// is an encoding-term angle.
    SecondCreated,
};

struct VarianceOptions {
    std::size_t layers = 5;
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    Coefficients coefficients = Coefficients::Random;
    SlotRule slot = SlotRule::VariationalBlock;
    /// Worker threads; 0 picks std::thread::hardware_concurrency(). The
    /// result does not depend on this value.
    std::size_t workers = 1;
};

struct VariancePoint {
    ansatz::AnsatzKind kind{};
    std::size_t n = 0;
    std::size_t layers = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
};

/// Index of the differentiated parameter.
std::size_t target_param(ansatz::AnsatzKind kind, const hamiltonians::IsingHamiltonian &ham,
                         const statesim::CircuitTemplate &tmpl, const VarianceOptions &opt);

/**
 * @brief The derivative samples, one per draw.
 *
 * Sample s uses derive_rng(seed, s): coefficients first (Random mode), then
 * parameters uniform on [-pi, pi]. The cost is <H> / sum|c| with H the
 * max-abs normalized encoding Hamiltonian, so it lies in [-1, 1].
 */
std::vector<double> gradient_samples(ansatz::AnsatzKind kind, std::size_t n,
                                     const VarianceOptions &opt);

/// Unbiased sample variance and its standard error from the fourth
/// central moment.
struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
};
MomentSummary summarize(const std::vector<double> &xs);

VariancePoint gradient_variance(ansatz::AnsatzKind kind, std::size_t n,
                                const VarianceOptions &opt);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (n, ln variance).
DecayFit decay_fit(const std::vector<double> &ns, const std::vector<double> &variances);

/// Header: kind,n,L,samples,variance,std_error,seed
void write_variance_csv(const std::filesystem::path &path,
                        const std::vector<VariancePoint> &points);

} // namespace hqrl::bench
