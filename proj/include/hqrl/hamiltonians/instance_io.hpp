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
 * @file instance_io.hpp
 * Instance file formats, random generators and dataset directories.
 *
 * Graphs:   {"n": 5, "edges": [[0, 1, 0.25], ...]}
 * Knapsack: {"values": [...], "weights": [...], "capacity": 12}
 * UCP:      CSV with header A,B,C,p_min,p_max, one generator per row.
 *
 * A dataset directory holds instance_0000.json (or .csv) ... and a
 * manifest.json with kind, count, size, seed, file list and cached optima.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hqrl/common/random.hpp"
#include "hqrl/hamiltonians/problems.hpp"

namespace hqrl::hamiltonians {

std::string_view to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(std::string_view name);

nlohmann::json graph_to_json(const WeightedGraph &g);
WeightedGraph graph_from_json(const nlohmann::json &j);

nlohmann::json knapsack_to_json(const KnapsackInstance &k);
KnapsackInstance knapsack_from_json(const nlohmann::json &j);

std::string ucp_to_csv(const UcpInstance &u);
UcpInstance ucp_from_csv(const std::string &text);

/// Complete graph on n nodes, weights uniform on (0, 1].
WeightedGraph random_maxcut_graph(std::size_t n, Rng &rng);

/// Integer values and weights uniform on 1..10, M = round(0.6 sum w).
KnapsackInstance random_knapsack(std::size_t items, Rng &rng);

/// A in [0,100], B in [0,10], C in [0,0.1], p_min in [10,50],
/// p_max in [p_min, 200], all uniform.
UcpInstance random_ucp(std::size_t generators, Rng &rng);

struct Dataset {
    ProblemKind kind = ProblemKind::MaxCut;
    std::size_t size = 0; ///< nodes, items or generators per instance
    std::uint64_t seed = 0;
    std::vector<WeightedGraph> graphs;
    std::vector<KnapsackInstance> knapsacks;
    std::vector<UcpInstance> ucps;
    /// Brute-force optimum per instance: max cut or best knapsack value.
    /// Empty for UCP, whose optimum depends on the sampled demand.
    std::vector<double> optima;

    [[nodiscard]] std::size_t count() const;
};

Dataset generate_dataset(ProblemKind kind, std::size_t count, std::size_t size,
                         std::uint64_t seed);

/// Writes instance files and manifest.json; throws Error when the
/// directory cannot be written.
void write_dataset(const Dataset &ds, const std::filesystem::path &dir);
Dataset load_dataset(const std::filesystem::path &dir);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

} // namespace hqrl::hamiltonians
