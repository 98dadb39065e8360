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

// hqrl: dataset generation, training, evaluation and baselines.
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hqrl/common/error.hpp"
#include "hqrl/runner/experiment.hpp"

namespace {

using namespace hqrl;
using namespace hqrl::runner;

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::string> set;
    std::string problem;
    bool smoke = false;
};

void add_common(CLI::App *cmd, Common &c, bool out_required = true) {
    cmd->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "Base seed");
    auto *out = cmd->add_option("--out", c.out, "Output directory");
    if (out_required) {
        out->required();
    }
    cmd->add_option("--set", c.set, "Override, e.g. --set agent.layers=4 (repeatable)");
    cmd->add_option("--problem", c.problem, "maxcut, knapsack or ucp");
    cmd->add_flag("--smoke", c.smoke, "Tiny profile for quick checks");
}

ConfigLayers layers(const Common &c, std::vector<std::string> extra) {
    ConfigLayers l;
    if (!c.config.empty()) {
        l.file = c.config;
    }
    l.smoke = c.smoke;
    if (!c.problem.empty()) {
        l.overrides.push_back("problem=\"" + c.problem + "\"");
    }
    if (c.seed) {
        l.overrides.push_back("seed=" + std::to_string(*c.seed));
    }
    l.overrides.insert(l.overrides.end(), extra.begin(), extra.end());
    l.overrides.insert(l.overrides.end(), c.set.begin(), c.set.end());
    return l;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hamiltonian-based quantum reinforcement learning experiments"};
    app.require_subcommand(1);

    Common gen;
    std::optional<std::size_t> gen_count;
    std::optional<std::size_t> gen_size;
    auto *gen_cmd = app.add_subcommand("gen-data", "Write training and validation datasets");
    add_common(gen_cmd, gen);
    gen_cmd->add_option("--count", gen_count, "Instances per split");
    gen_cmd->add_option("--size", gen_size, "Nodes, items or generators per instance");

    Common tr;
    std::optional<std::uint64_t> tr_steps;
    auto *train_cmd = app.add_subcommand("train", "Train agents, one run per seed");
    add_common(train_cmd, tr);
    train_cmd->add_option("--steps", tr_steps, "Environment steps per seed");

    Common ev;
    std::string ev_run;
    std::string ev_split = "validation";
    auto *eval_cmd = app.add_subcommand("evaluate", "Evaluate trained models");
    add_common(eval_cmd, ev, false);
    eval_cmd->add_option("--run", ev_run, "Training output directory")->required();
    eval_cmd->add_option("--split", ev_split, "train or validation");

    Common bv;
    std::string bv_coefficients;
    std::string bv_slot;
    auto *bench_cmd = app.add_subcommand("bench-variance", "Gradient variance versus qubit count");
    add_common(bench_cmd, bv);
    bench_cmd->add_option("--coefficients", bv_coefficients, "random or unit");
    bench_cmd->add_option("--slot", bv_slot, "variational or second");

    Common qa;
    auto *qaoa_cmd = app.add_subcommand("qaoa", "QAOA baseline on knapsack validation instances");
    add_common(qaoa_cmd, qa);

    Common bf;
    auto *bf_cmd = app.add_subcommand("brute-force", "Exact optima of both dataset splits");
    add_common(bf_cmd, bf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (gen_cmd->parsed()) {
            std::vector<std::string> extra;
            if (gen_count) {
                extra.push_back("data.count=" + std::to_string(*gen_count));
                extra.push_back("data.validation_count=" + std::to_string(*gen_count));
            }
            if (gen_size) {
                extra.push_back("size=" + std::to_string(*gen_size));
            }
            const auto cfg = resolve_config(layers(gen, extra));
            open_output_dir(gen.out, cfg, "gen-data");
            gen_data(cfg, gen.out);
            close_output_dir(gen.out);
            std::cout << "wrote " << gen.out << "/train and " << gen.out << "/validation\n";
        } else if (train_cmd->parsed()) {
            std::vector<std::string> extra;
            if (tr_steps) {
                extra.push_back("total_steps=" + std::to_string(*tr_steps));
            }
            const auto cfg = resolve_config(layers(tr, extra));
            open_output_dir(tr.out, cfg, "train");
            const auto runs = train(cfg, tr.out, &std::cerr);
            close_output_dir(tr.out);
            for (const auto &r : runs) {
                if (r.records.empty()) {
                    continue;
                }
                const auto &last = r.records.back();
                std::cout << "seed " << r.seed << " step " << last.step << " mean_reward "
                          << last.mean_reward << " ratio " << last.approximation_ratio << '\n';
            }
        } else if (eval_cmd->parsed()) {
            Common c = ev;
            if (c.config.empty()) {
                c.config = (std::filesystem::path(ev_run) / "config.json").string();
            }
            const auto cfg = resolve_config(layers(c, {}));
            const std::filesystem::path out =
                ev.out.empty() ? std::filesystem::path(ev_run) / ("evaluation_" + ev_split)
                               : std::filesystem::path(ev.out);
            open_output_dir(out, cfg, "evaluate");
            const auto rows = evaluate(cfg, ev_run, ev_split, out);
            close_output_dir(out);
            for (const auto &r : rows) {
                std::cout << "seed " << r.seed << " " << r.split << " p_optimal "
                          << r.summary.p_optimal << " p_valid " << r.summary.p_valid
                          << " mean_ratio " << r.summary.mean_ratio << " mean_reward "
                          << r.summary.mean_reward << '\n';
            }
        } else if (bench_cmd->parsed()) {
            std::vector<std::string> extra;
            if (!bv_coefficients.empty()) {
                extra.push_back("bench.coefficients=\"" + bv_coefficients + "\"");
            }
            if (!bv_slot.empty()) {
                extra.push_back("bench.slot=\"" + bv_slot + "\"");
            }
            const auto cfg = resolve_config(layers(bv, extra));
            open_output_dir(bv.out, cfg, "bench-variance");
            for (const auto &p : run_bench(cfg, bv.out)) {
                std::cout << ansatz::to_string(p.kind) << " n=" << p.n << " variance "
                          << p.variance << " +- " << p.std_error << '\n';
            }
            close_output_dir(bv.out);
        } else if (qaoa_cmd->parsed()) {
            const auto cfg = resolve_config(layers(qa, {"problem=\"knapsack\"", "algorithm=\"qaoa\""}));
            open_output_dir(qa.out, cfg, "qaoa");
            const auto rows = run_qaoa(cfg, qa.out);
            close_output_dir(qa.out);
            std::map<std::string, std::pair<double, double>> sums;
            std::map<std::string, std::size_t> counts;
            for (const auto &r : rows) {
                const std::string enc(qaoa::to_string(r.encoding));
                sums[enc].first += r.p_optimal;
                sums[enc].second += r.p_valid;
                ++counts[enc];
            }
            for (const auto &[enc, s] : sums) {
                const auto n = static_cast<double>(counts[enc]);
                std::cout << enc << " p_optimal " << s.first / n << " p_valid " << s.second / n
                          << '\n';
            }
        } else if (bf_cmd->parsed()) {
            const auto cfg = resolve_config(layers(bf, {"algorithm=\"brute_force\""}));
            open_output_dir(bf.out, cfg, "brute-force");
            run_brute_force(cfg, bf.out);
            close_output_dir(bf.out);
            std::cout << "wrote " << bf.out << "/brute_force.csv\n";
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
