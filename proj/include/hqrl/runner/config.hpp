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
 * @file config.hpp
 * Layered experiment configuration.
 *
 * Resolution order: per-problem defaults < profile < JSON file < `key=value`
 * overrides. Keys use dotted paths into the JSON tree ("agent.lr_circuit").
 * Every problem found while resolving is reported in one ConfigError.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hqrl/agents/trainer.hpp"
#include "hqrl/bench/gradient_variance.hpp"
#include "hqrl/envs/environment.hpp"
#include "hqrl/qaoa/qaoa.hpp"

namespace hqrl::runner {

enum class Method { Qpg, Qdqn, Qaoa, BruteForce };
std::string_view to_string(Method m);

struct DataConfig {
    std::size_t count = 100;
    std::size_t validation_count = 100;
    std::uint64_t train_seed = 1;
    std::uint64_t validation_seed = 2;
    /// Dataset directories; empty means generate in memory from the seeds.
    std::string train_dir;
    std::string validation_dir;
};

struct ExperimentConfig {
    hamiltonians::ProblemKind problem = hamiltonians::ProblemKind::MaxCut;
    Method method = Method::Qdqn;
    std::size_t size = 5;
    std::uint64_t total_steps = 50000;
    std::uint64_t seed = 0;
    std::size_t num_seeds = 5;
    std::size_t workers = 1;
    std::uint64_t metrics_every = 100;
    std::uint64_t checkpoint_every = 10000;

    agents::AgentConfig agent;
    envs::EnvConfig env;
    DataConfig data;

    std::size_t eval_episodes = 100;
    agents::ActionMode eval_mode = agents::ActionMode::Sample;

    qaoa::KnapsackQaoaOptions qaoa;
    std::vector<qaoa::Encoding> qaoa_encodings{qaoa::Encoding::Unbalanced, qaoa::Encoding::Slack};

    std::vector<ansatz::AnsatzKind> bench_kinds;
    std::vector<std::size_t> bench_sizes{4, 6, 8, 10};
    bench::VarianceOptions bench;

    /// The fully resolved tree and its FNV-1a hash.
    nlohmann::json resolved;
    std::string hash;

    /// Seeds seed, seed + 1, ..., seed + num_seeds - 1.
    [[nodiscard]] std::vector<std::uint64_t> seeds() const;
};

/// Complete default tree for `problem`; every accepted key appears here.
nlohmann::json default_config(hamiltonians::ProblemKind problem);

/// Short runs for CI: 200 steps, one seed, four variables, ten instances.
nlohmann::json smoke_profile();

struct ConfigLayers {
    std::optional<std::filesystem::path> file;
    bool smoke = false;
    /// `dotted.key=value`; the value is parsed as JSON, falling back to a
    /// plain string.
    std::vector<std::string> overrides;
};

ExperimentConfig resolve_config(const ConfigLayers &layers);

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string config_hash(const nlohmann::json &resolved);

} // namespace hqrl::runner
