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

#include "hqrl/runner/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hqrl/common/error.hpp"

#ifndef HQRL_GIT_REVISION
#define HQRL_GIT_REVISION "unknown"
#endif

namespace hqrl::runner {

namespace fs = std::filesystem;
using nlohmann::json;
using hamiltonians::format_double;
using hamiltonians::ProblemKind;

namespace {

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json read_json(const fs::path &p) {
    std::ifstream in(p);
    HQRL_REQUIRE(in.good(), Error, "cannot read " + p.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw Error(p.string() + ": " + e.what());
    }
}

// Write-then-rename so an interrupted run never leaves half a file.
void write_atomic(const fs::path &p, const std::string &text) {
    const auto tmp = fs::path(p.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << text;
        HQRL_REQUIRE(out.good(), Error, "cannot write " + tmp.string());
    }
    fs::rename(tmp, p);
}

void ensure_dir(const fs::path &p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    HQRL_REQUIRE(!ec && fs::is_directory(p), Error,
                 "cannot create directory " + p.string() + (ec ? ": " + ec.message() : ""));
}

std::string fmt_or_empty(double v) {
    return std::isnan(v) ? std::string() : format_double(v);
}

hamiltonians::Dataset load_or_generate(const ExperimentConfig &cfg, const std::string &dir,
                                       std::size_t count, std::uint64_t seed) {
    if (dir.empty()) {
        return hamiltonians::generate_dataset(cfg.problem, count, cfg.size, seed);
    }
    auto ds = hamiltonians::load_dataset(dir);
    HQRL_REQUIRE(ds.kind == cfg.problem, ConfigError,
                 dir + " holds " + std::string(hamiltonians::to_string(ds.kind)) +
                     " instances, config asks for " +
                     std::string(hamiltonians::to_string(cfg.problem)));
    HQRL_REQUIRE(ds.size == cfg.size, ConfigError,
                 dir + " holds instances of size " + std::to_string(ds.size) +
                     ", config size is " + std::to_string(cfg.size));
    return ds;
}

// Keeps the header and every row whose leading step is <= `step`.
void truncate_csv(const fs::path &p, std::uint64_t step, const std::string &header) {
    std::vector<std::string> keep{header};
    std::ifstream in(p);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;
        }
        if (!line.empty() && std::stoull(line.substr(0, line.find(','))) <= step) {
            keep.push_back(line);
        }
    }
    in.close();
    std::string text;
    for (const auto &l : keep) {
        text += l + "\n";
    }
    write_atomic(p, text);
}

RunRecord make_record(const agents::Trainer &t, ProblemKind problem, std::uint64_t window,
                      std::uint64_t seed) {
    RunRecord r;
    r.step = t.steps_done();
    r.seed = seed;
    r.episode = t.episodes().size();
    r.epsilon = t.epsilon();
    r.beta = t.beta();
    const auto &rw = t.step_rewards();
    const std::size_t w = std::min<std::size_t>(window, rw.size());
    double s = 0.0;
    for (std::size_t i = rw.size() - w; i < rw.size(); ++i) {
        s += rw[i];
    }
    r.mean_reward = w > 0 ? s / static_cast<double>(w) : 0.0;

    r.approximation_ratio = std::nan("");
    if (problem != ProblemKind::Ucp) {
        const auto &eps = t.episodes();
        double total = 0.0;
        std::size_t n = 0;
        for (auto it = eps.rbegin(); it != eps.rend() && it->end_step + window > r.step; ++it) {
            total += it->outcome.approximation_ratio;
            ++n;
        }
        if (n > 0) {
            r.approximation_ratio = total / static_cast<double>(n);
        }
    }
    return r;
}

const std::string kTimingHeader = "step,wall_time_s,steps_per_s";

SeedRun train_seed(const ExperimentConfig &cfg, const hamiltonians::Dataset &ds,
                   std::uint64_t seed, const fs::path &dir, std::ostream *log,
                   std::mutex &log_mu) {
    ensure_dir(dir);
    auto env = envs::make_environment(ds, cfg.env);
    agents::Trainer trainer(cfg.agent, *env, seed);

    const auto ckpt_path = dir / "checkpoint.json";
    const auto metrics_path = dir / "metrics.csv";
    const auto timing_path = dir / "timing.csv";
    if (fs::exists(ckpt_path)) {
        trainer.restore(read_json(ckpt_path));
        truncate_csv(metrics_path, trainer.steps_done(), metrics_header());
        truncate_csv(timing_path, trainer.steps_done(), kTimingHeader);
    } else {
        write_atomic(metrics_path, metrics_header() + "\n");
        write_atomic(timing_path, kTimingHeader + "\n");
    }
    std::ofstream metrics(metrics_path, std::ios::app);
    std::ofstream timing(timing_path, std::ios::app);

    SeedRun run;
    run.seed = seed;
    {
        // rows kept from before a resume
        std::ifstream in(metrics_path);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (!line.empty()) {
                run.records.push_back(parse_record(line));
            }
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto last = t0;
    std::uint64_t last_step = trainer.steps_done();
    while (trainer.steps_done() < cfg.total_steps) {
        trainer.step();
        const auto step = trainer.steps_done();
        if (step % cfg.metrics_every == 0 || step == cfg.total_steps) {
            const auto rec = make_record(trainer, cfg.problem, cfg.metrics_every, seed);
            metrics << format_record(rec) << '\n' << std::flush;
            run.records.push_back(rec);

            const auto now = std::chrono::steady_clock::now();
            const double wall = std::chrono::duration<double>(now - t0).count();
            const double dt = std::chrono::duration<double>(now - last).count();
            const double rate = dt > 0.0 ? static_cast<double>(step - last_step) / dt : 0.0;
            timing << step << ',' << format_double(wall) << ',' << format_double(rate) << '\n'
                   << std::flush;
            last = now;
            last_step = step;
        }
        if (step % cfg.checkpoint_every == 0 || step == cfg.total_steps) {
            write_atomic(ckpt_path, trainer.checkpoint().dump());
            if (log != nullptr) {
                const std::lock_guard lock(log_mu);
                *log << "seed " << seed << ": step " << step << "/" << cfg.total_steps << '\n';
            }
        }
    }
    HQRL_REQUIRE(metrics.good() && timing.good(), Error, "cannot write metrics in " + dir.string());
    write_atomic(dir / "model.json", trainer.model().to_json().dump(2) + "\n");
    run.model = trainer.model();
    return run;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads; the first exception
// is rethrown after all threads join.
template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F &&fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = 0;
                {
                    const std::lock_guard lock(mu);
                    if (next >= n || err) {
                        return;
                    }
                    i = next++;
                }
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard lock(mu);
                    if (!err) {
                        err = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (err) {
        std::rethrow_exception(err);
    }
}

} // namespace

std::string metrics_header() {
    return "step,episode,mean_reward,approximation_ratio,epsilon,beta,seed";
}

std::string format_record(const RunRecord &r) {
    std::ostringstream os;
    os << r.step << ',' << r.episode << ',' << format_double(r.mean_reward) << ','
       << fmt_or_empty(r.approximation_ratio) << ',' << format_double(r.epsilon) << ','
       << format_double(r.beta) << ',' << r.seed;
    return os.str();
}

RunRecord parse_record(const std::string &line) {
    std::vector<std::string> f;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        f.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        f.emplace_back();
    }
    HQRL_REQUIRE(f.size() == 7, Error, "malformed metrics row: " + line);
    RunRecord r;
    r.step = std::stoull(f[0]);
    r.episode = std::stoull(f[1]);
    r.mean_reward = std::stod(f[2]);
    r.approximation_ratio = f[3].empty() ? std::nan("") : std::stod(f[3]);
    r.epsilon = std::stod(f[4]);
    r.beta = std::stod(f[5]);
    r.seed = std::stoull(f[6]);
    return r;
}

std::string git_revision() { return HQRL_GIT_REVISION; }

void open_output_dir(const fs::path &dir, const ExperimentConfig &cfg,
                     const std::string &command) {
    ensure_dir(dir);
    const auto manifest_path = dir / "manifest.json";
    json manifest;
    if (fs::exists(manifest_path)) {
        manifest = read_json(manifest_path);
        const auto old = manifest.value("config_hash", std::string());
        HQRL_REQUIRE(old == cfg.hash, ConfigError,
                     dir.string() + " holds results for config " + old +
                         "; this config hashes to " + cfg.hash + ", use another --out");
        HQRL_REQUIRE(manifest.value("command", command) == command, ConfigError,
                     dir.string() + " holds output of '" + manifest.value("command", "") + "'");
    } else {
        manifest = {{"command", command},
                    {"config_hash", cfg.hash},
                    {"started_at", utc_now()}};
    }
    manifest["git_revision"] = git_revision();
    manifest["status"] = "running";
    manifest["updated_at"] = utc_now();
    json seeds = json::array();
    for (auto s : cfg.seeds()) {
        seeds.push_back(s);
    }
    manifest["seeds"] = seeds;
    write_atomic(dir / "config.json", cfg.resolved.dump(2) + "\n");
    write_atomic(manifest_path, manifest.dump(2) + "\n");
}

void close_output_dir(const fs::path &dir) {
    const auto p = dir / "manifest.json";
    auto manifest = read_json(p);
    manifest["status"] = "finished";
    manifest["finished_at"] = utc_now();
    write_atomic(p, manifest.dump(2) + "\n");
}

hamiltonians::Dataset training_data(const ExperimentConfig &cfg) {
    return load_or_generate(cfg, cfg.data.train_dir, cfg.data.count, cfg.data.train_seed);
}

hamiltonians::Dataset validation_data(const ExperimentConfig &cfg) {
    return load_or_generate(cfg, cfg.data.validation_dir, cfg.data.validation_count,
                            cfg.data.validation_seed);
}

void gen_data(const ExperimentConfig &cfg, const fs::path &out) {
    HQRL_REQUIRE(cfg.data.train_seed != cfg.data.validation_seed, ConfigError,
                 "data.train_seed and data.validation_seed must differ");
    hamiltonians::write_dataset(
        hamiltonians::generate_dataset(cfg.problem, cfg.data.count, cfg.size, cfg.data.train_seed),
        out / "train");
    hamiltonians::write_dataset(hamiltonians::generate_dataset(cfg.problem,
                                                               cfg.data.validation_count,
                                                               cfg.size, cfg.data.validation_seed),
                                out / "validation");
}

std::vector<SeedRun> train(const ExperimentConfig &cfg, const fs::path &out, std::ostream *log) {
    HQRL_REQUIRE(cfg.method == Method::Qpg || cfg.method == Method::Qdqn, ConfigError,
                 "train needs algorithm qpg or qdqn");
    const auto ds = training_data(cfg);
    const auto seeds = cfg.seeds();
    std::vector<SeedRun> runs(seeds.size());
    std::mutex log_mu;
    parallel_for(seeds.size(), cfg.workers, [&](std::size_t i) {
        runs[i] = train_seed(cfg, ds, seeds[i], out / ("seed_" + std::to_string(seeds[i])), log,
                             log_mu);
    });
    return runs;
}

std::vector<EvalRow> evaluate(const ExperimentConfig &cfg, const fs::path &run,
                              const std::string &split, const fs::path &out) {
    HQRL_REQUIRE(split == "train" || split == "validation", ConfigError,
                 "split must be train or validation");
    ensure_dir(out);
    const auto ds = split == "train" ? training_data(cfg) : validation_data(cfg);
    const auto seeds = cfg.seeds();
    std::vector<EvalRow> rows(seeds.size());
    parallel_for(seeds.size(), cfg.workers, [&](std::size_t i) {
        const auto path = run / ("seed_" + std::to_string(seeds[i])) / "model.json";
        const auto model = agents::Model::from_json(read_json(path));
        auto env = envs::make_environment(ds, cfg.env);
        Rng probe(0);
        const auto obs = env->reset_to(0, probe).observation;
        const auto need = agents::model_template(model.spec, obs).param_count;
        HQRL_REQUIRE(model.theta.size() == need, ConfigError,
                     path.string() + " has " + std::to_string(model.theta.size()) +
                         " parameters; instances of size " + std::to_string(ds.size) +
                         " need " + std::to_string(need));
        rows[i] = {seeds[i], split,
                   agents::evaluate_policy(model, *env, cfg.eval_episodes, seeds[i], cfg.eval_mode)};
    });

    std::ostringstream os;
    os << "seed,split,episodes,mean_reward,mean_ratio,p_optimal,p_valid\n";
    for (const auto &r : rows) {
        os << r.seed << ',' << r.split << ',' << r.summary.episodes << ','
           << format_double(r.summary.mean_reward) << ',' << format_double(r.summary.mean_ratio)
           << ',' << format_double(r.summary.p_optimal) << ','
           << format_double(r.summary.p_valid) << '\n';
    }
    write_atomic(out / "evaluation.csv", os.str());
    return rows;
}

std::vector<qaoa::KnapsackQaoaRow> run_qaoa(const ExperimentConfig &cfg, const fs::path &out) {
    HQRL_REQUIRE(cfg.problem == ProblemKind::Knapsack, ConfigError,
                 "the qaoa command runs on knapsack datasets");
    const auto ds = validation_data(cfg);
    const std::size_t jobs = ds.knapsacks.size() * cfg.qaoa_encodings.size();
    std::vector<std::vector<qaoa::KnapsackQaoaRow>> parts(jobs);
    parallel_for(jobs, cfg.workers, [&](std::size_t j) {
        const std::size_t i = j / cfg.qaoa_encodings.size();
        const auto enc = cfg.qaoa_encodings[j % cfg.qaoa_encodings.size()];
        parts[j] = qaoa::run_knapsack_qaoa(ds.knapsacks[i], i, enc, cfg.qaoa,
                                           derive_rng(cfg.seed, i)());
    });
    std::vector<qaoa::KnapsackQaoaRow> rows;
    for (auto &p : parts) {
        rows.insert(rows.end(), p.begin(), p.end());
    }
    qaoa::write_qaoa_csv(out / "qaoa.csv", rows);
    return rows;
}

void run_brute_force(const ExperimentConfig &cfg, const fs::path &out) {
    HQRL_REQUIRE(cfg.problem != ProblemKind::Ucp, ConfigError,
                 "brute-force covers maxcut and knapsack; the ucp optimum depends on the "
                 "sampled demand");
    std::ostringstream os;
    os << "split,instance_id,optimum,bitstring\n";
    for (const std::string split : {"train", "validation"}) {
        const auto ds = split == "train" ? training_data(cfg) : validation_data(cfg);
        for (std::size_t i = 0; i < ds.count(); ++i) {
            hamiltonians::BruteForceResult best;
            if (cfg.problem == ProblemKind::MaxCut) {
                best = hamiltonians::brute_force(hamiltonians::maxcut_ising(ds.graphs[i]));
                best.value = hamiltonians::cut_value(ds.graphs[i], best.x);
            } else {
                best = hamiltonians::knapsack_optimum(ds.knapsacks[i]);
            }
            os << split << ',' << i << ',' << format_double(best.value) << ','
               << statesim::to_bitstring(best.x, ds.size) << '\n';
        }
    }
    write_atomic(out / "brute_force.csv", os.str());
}

std::vector<bench::VariancePoint> run_bench(const ExperimentConfig &cfg, const fs::path &out) {
    std::vector<bench::VariancePoint> points;
    std::ostringstream fit;
    fit << "kind,slope,intercept\n";
    for (auto kind : cfg.bench_kinds) {
        std::vector<double> ns;
        std::vector<double> vs;
        for (auto n : cfg.bench_sizes) {
            points.push_back(bench::gradient_variance(kind, n, cfg.bench));
            ns.push_back(static_cast<double>(n));
            vs.push_back(points.back().variance);
        }
        if (ns.size() >= 3) {
            const auto f = bench::decay_fit(ns, vs);
            fit << ansatz::to_string(kind) << ',' << format_double(f.slope) << ','
                << format_double(f.intercept) << '\n';
        }
    }
    bench::write_variance_csv(out / "variance.csv", points);
    write_atomic(out / "fit.csv", fit.str());
    return points;
}

} // namespace hqrl::runner
