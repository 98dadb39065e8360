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
 * @file experiment.hpp
 * Experiment commands behind the `hqrl` executable.
 *
 * Every command writes into an output directory holding config.json (the
 * resolved configuration) and manifest.json (hash, git revision, times).
 * A directory whose manifest carries a different hash is refused.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hqrl/agents/trainer.hpp"
#include "hqrl/hamiltonians/instance_io.hpp"
#include "hqrl/runner/config.hpp"

namespace hqrl::runner {

/// One metrics.csv row. approximation_ratio is NaN (written empty) when no
/// episode ended in the window or the problem has no optimum.
struct RunRecord {
    std::uint64_t step = 0;
    std::uint64_t episode = 0;
    double mean_reward = 0.0;
    double approximation_ratio = 0.0;
    double epsilon = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
};

/// step,episode,mean_reward,approximation_ratio,epsilon,beta,seed
std::string metrics_header();
std::string format_record(const RunRecord &r);
/// Inverse of format_record; an empty ratio reads back as NaN.
RunRecord parse_record(const std::string &line);

std::string git_revision();

/// Creates `dir`, refuses a different config hash, writes config.json and
/// a manifest with status "running".
void open_output_dir(const std::filesystem::path &dir, const ExperimentConfig &cfg,
                     const std::string &command);
/// Marks the manifest finished.
void close_output_dir(const std::filesystem::path &dir);

hamiltonians::Dataset training_data(const ExperimentConfig &cfg);
hamiltonians::Dataset validation_data(const ExperimentConfig &cfg);

/// Writes out/train and out/validation.
void gen_data(const ExperimentConfig &cfg, const std::filesystem::path &out);

struct SeedRun {
    std::uint64_t seed = 0;
    agents::Model model;
    std::vector<RunRecord> records;
};

/**
 * @brief Trains every seed into out/seed_<s>/.
 *
 * Each seed directory gets metrics.csv, timing.csv (wall clock, kept apart
 * so metrics.csv is reproducible byte for byte), checkpoint.json and
 * model.json. An existing checkpoint is resumed.
 */
std::vector<SeedRun> train(const ExperimentConfig &cfg, const std::filesystem::path &out,
                           std::ostream *log = nullptr);

struct EvalRow {
    std::uint64_t seed = 0;
    std::string split;
    agents::EvalSummary summary;
};

/// Evaluates run/seed_<s>/model.json for every configured seed on `split`
/// ("train" or "validation"); writes out/evaluation.csv.
std::vector<EvalRow> evaluate(const ExperimentConfig &cfg, const std::filesystem::path &run,
                              const std::string &split, const std::filesystem::path &out);

/// Knapsack QAOA over the validation set; writes qaoa.csv.
std::vector<qaoa::KnapsackQaoaRow> run_qaoa(const ExperimentConfig &cfg,
                                            const std::filesystem::path &out);

/// Exact optimum of every training and validation instance; writes
/// brute_force.csv (split,instance_id,optimum,bitstring).
void run_brute_force(const ExperimentConfig &cfg, const std::filesystem::path &out);

/// Variance points for every kind and size; writes variance.csv and
/// fit.csv (kind,slope,intercept).
std::vector<bench::VariancePoint> run_bench(const ExperimentConfig &cfg,
                                            const std::filesystem::path &out);

} // namespace hqrl::runner
