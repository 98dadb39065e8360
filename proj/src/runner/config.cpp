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

#include "hqrl/runner/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "hqrl/common/error.hpp"
#include "hqrl/hamiltonians/instance_io.hpp"

namespace hqrl::runner {

using nlohmann::json;
using hamiltonians::ProblemKind;

std::string_view to_string(Method m) {
    switch (m) {
    case Method::Qpg:
        return "qpg";
    case Method::Qdqn:
        return "qdqn";
    case Method::Qaoa:
        return "qaoa";
    case Method::BruteForce:
        return "brute_force";
    }
    return "?";
}

namespace {

Method method_from_string(std::string_view s) {
    for (auto m : {Method::Qpg, Method::Qdqn, Method::Qaoa, Method::BruteForce}) {
        if (to_string(m) == s) {
            return m;
        }
    }
    throw ConfigError("unknown algorithm '" + std::string(s) + "'");
}

json schedule(double start, double end, std::uint64_t end_step, bool linear) {
    return {{"kind", linear ? "linear" : "constant"},
            {"start", start},
            {"end", end},
            {"end_step", end_step}};
}

std::string type_name(const json &j) {
    if (j.is_number_unsigned()) {
        return "non-negative integer";
    }
    if (j.is_number_integer()) {
        return "integer";
    }
    return j.type_name();
}

// Compares `got` against the default tree; reports unknown keys and
// incompatible types.
void check_shape(const json &got, const json &want, const std::string &path,
                 std::vector<std::string> &errors) {
    if (want.is_object()) {
        if (!got.is_object()) {
            errors.push_back(path + ": expected an object");
            return;
        }
        for (const auto &[k, v] : got.items()) {
            const auto sub = path.empty() ? k : path + "." + k;
            if (!want.contains(k)) {
                errors.push_back(sub + ": unknown key");
                continue;
            }
            check_shape(v, want.at(k), sub, errors);
        }
        return;
    }
    if (want.is_array()) {
        if (!got.is_array()) {
            errors.push_back(path + ": expected an array");
            return;
        }
        if (!want.empty()) {
            for (std::size_t i = 0; i < got.size(); ++i) {
                check_shape(got[i], want[0], path + "[" + std::to_string(i) + "]", errors);
            }
        }
        return;
    }
    // Every integer setting is a count or a seed.
    if (want.is_number_integer()) {
        if (!got.is_number_unsigned()) {
            errors.push_back(path + ": expected non-negative integer, got " + type_name(got));
        }
        return;
    }
    const bool ok = want.is_number() ? got.is_number() : got.type() == want.type();
    if (!ok) {
        errors.push_back(path + ": expected " + type_name(want) + ", got " + type_name(got));
    }
}

json parse_value(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &) {
        return text;
    }
}

void apply_override(json &tree, const std::string &item, std::vector<std::string> &errors) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
        errors.push_back("override '" + item + "': expected key=value");
        return;
    }
    std::string pointer = "/" + item.substr(0, eq);
    for (auto &c : pointer) {
        if (c == '.') {
            c = '/';
        }
    }
    try {
        tree[json::json_pointer(pointer)] = parse_value(item.substr(eq + 1));
    } catch (const json::exception &e) {
        errors.push_back("override '" + item + "': " + e.what());
    }
}

json read_file(const std::filesystem::path &p, std::vector<std::string> &errors) {
    std::ifstream in(p);
    if (!in) {
        errors.push_back("cannot read config file " + p.string());
        return json::object();
    }
    try {
        auto j = json::parse(in);
        if (!j.is_object()) {
            errors.push_back(p.string() + ": top level must be an object");
            return json::object();
        }
        return j;
    } catch (const json::parse_error &e) {
        errors.push_back(p.string() + ": " + e.what());
        return json::object();
    }
}

// Runs `fn`, recording a ConfigError or JSON type error instead of throwing.
void collect(std::vector<std::string> &errors, const std::function<void()> &fn) {
    try {
        fn();
    } catch (const ConfigError &e) {
        errors.emplace_back(e.what());
    } catch (const json::exception &e) {
        errors.emplace_back(e.what());
    }
}

void require(std::vector<std::string> &errors, bool cond, const std::string &msg) {
    if (!cond) {
        errors.push_back(msg);
    }
}

} // namespace

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
    std::vector<std::uint64_t> s;
    for (std::size_t i = 0; i < num_seeds; ++i) {
        s.push_back(seed + i);
    }
    return s;
}

json default_config(ProblemKind problem) {
    json kinds = json::array();
    for (auto k : ansatz::kAllKinds) {
        kinds.push_back(ansatz::to_string(k));
    }
    const envs::EnvConfig env;
    json j{
        {"problem", hamiltonians::to_string(problem)},
        {"algorithm", "qdqn"},
        {"size", 5},
        {"total_steps", 50000},
        {"seed", 0},
        {"num_seeds", 5},
        {"workers", 1},
        {"metrics_every", 100},
        {"checkpoint_every", 10000},
        {"agent",
         {{"ansatz", "sge_sgv"},
          {"layers", 3},
          {"head", "node_x"},
          {"born", false},
          {"trainable_scalings", false},
          {"beta", schedule(1.0, 1.0, 0, false)},
          {"lr_circuit", 0.01},
          {"lr_scaling", 0.1},
          {"gamma", 0.99},
          {"init_range", std::numbers::pi / 8.0},
          {"baseline", true},
          {"baseline_decay", 0.99},
          {"batch_episodes", 10},
          {"replay_capacity", 10000},
          {"batch_size", 32},
          {"target_sync", 100},
          {"learning_starts", 32},
          {"train_every", 1},
          {"epsilon", schedule(1.0, 0.01, 10000, true)}}},
        {"env",
         {{"lambda1", env.lambda1},
          {"lambda2", env.lambda2},
          {"soft_constraint", false},
          {"lambda_eq", 0.0},
          {"ucp_steps", 10},
          {"normalize", true}}},
        {"data",
         {{"count", 100},
          {"validation_count", 100},
          {"train_seed", 1},
          {"validation_seed", 2},
          {"train_dir", ""},
          {"validation_dir", ""}}},
        {"eval", {{"episodes_per_instance", 100}, {"mode", "sample"}}},
        {"qaoa",
         {{"p", 3},
          {"max_iterations", 100},
          {"optimizer", "adam"},
          {"learning_rate", 0.05},
          {"init_range", std::numbers::pi / 4.0},
          {"normalize", false},
          {"restarts", 5},
          {"slack_penalty", 0.0},
          {"encodings", {"unbalanced", "slack"}}}},
        {"bench",
         {{"kinds", kinds},
          {"sizes", {4, 6, 8, 10}},
          {"layers", 5},
          {"samples", 1000},
          {"coefficients", "random"},
          {"slot", "variational"}}},
    };
    switch (problem) {
    case ProblemKind::MaxCut:
        break;
    case ProblemKind::Knapsack:
        j["algorithm"] = "qpg";
        j["total_steps"] = 200000;
        j["num_seeds"] = 10;
        j["agent"]["layers"] = 5;
        j["agent"]["head"] = "item_z";
        // end_step 0: ramp over the whole run.
        j["agent"]["beta"] = schedule(1.0, 25.0, 0, true);
        break;
    case ProblemKind::Ucp:
        j["algorithm"] = "qpg";
        j["total_steps"] = 150000;
        j["agent"]["layers"] = 5;
        j["agent"]["head"] = "bernoulli_z";
        j["agent"]["trainable_scalings"] = true;
        j["agent"]["batch_episodes"] = 1;
        j["data"]["count"] = 1;
        j["data"]["validation_count"] = 1;
        break;
    }
    return j;
}

json smoke_profile() {
    return {{"size", 4},
            {"total_steps", 200},
            {"num_seeds", 1},
            {"checkpoint_every", 100},
            {"data", {{"count", 10}, {"validation_count", 10}}},
            {"eval", {{"episodes_per_instance", 2}}},
            {"qaoa", {{"restarts", 1}, {"max_iterations", 10}}},
            {"bench", {{"sizes", {2, 3}}, {"samples", 20}, {"layers", 2}}}};
}

std::string config_hash(const json &resolved) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : resolved.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig resolve_config(const ConfigLayers &layers) {
    std::vector<std::string> errors;

    // User layers first, only to learn which problem's defaults apply.
    json user = json::object();
    if (layers.file) {
        user = read_file(*layers.file, errors);
    }
    for (const auto &o : layers.overrides) {
        apply_override(user, o, errors);
    }
    ProblemKind problem = ProblemKind::MaxCut;
    if (user.contains("problem")) {
        collect(errors, [&] {
            problem = hamiltonians::problem_kind_from_string(user.at("problem").get<std::string>());
        });
    }

    json tree = default_config(problem);
    const json defaults = tree;
    if (layers.smoke) {
        tree.merge_patch(smoke_profile());
    }
    check_shape(user, defaults, "", errors);
    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto &e : errors) {
            msg += "\n  " + e;
        }
        throw ConfigError(msg);
    }
    tree.merge_patch(user);

    ExperimentConfig c;
    c.problem = problem;
    collect(errors, [&] { c.method = method_from_string(tree.at("algorithm").get<std::string>()); });
    c.size = tree.at("size").get<std::size_t>();
    c.total_steps = tree.at("total_steps").get<std::uint64_t>();
    c.seed = tree.at("seed").get<std::uint64_t>();
    c.num_seeds = tree.at("num_seeds").get<std::size_t>();
    c.workers = tree.at("workers").get<std::size_t>();
    c.metrics_every = tree.at("metrics_every").get<std::uint64_t>();
    c.checkpoint_every = tree.at("checkpoint_every").get<std::uint64_t>();

    const auto &a = tree.at("agent");
    auto &ag = c.agent;
    ag.algorithm = c.method == Method::Qdqn ? agents::Algorithm::Qdqn : agents::Algorithm::Qpg;
    collect(errors, [&] { ag.model.ansatz = ansatz::kind_from_string(a.at("ansatz").get<std::string>()); });
    collect(errors, [&] { ag.model.head = agents::head_from_string(a.at("head").get<std::string>()); });
    ag.model.layers = a.at("layers").get<std::size_t>();
    ag.model.born = a.at("born").get<bool>();
    ag.trainable_scalings = a.at("trainable_scalings").get<bool>();
    for (const char *key : {"beta", "epsilon"}) {
        collect(errors, [&] {
            auto s = agents::Schedule::from_json(a.at(key));
            if (s.kind == agents::Schedule::Kind::Linear && s.end_step == 0) {
                s.end_step = c.total_steps;
                tree["agent"][key]["end_step"] = c.total_steps;
            }
            (std::string(key) == "beta" ? ag.beta : ag.epsilon) = s;
        });
    }
    ag.lr_circuit = a.at("lr_circuit").get<double>();
    ag.lr_scaling = a.at("lr_scaling").get<double>();
    ag.gamma = a.at("gamma").get<double>();
    ag.init_range = a.at("init_range").get<double>();
    ag.baseline = a.at("baseline").get<bool>();
    ag.baseline_decay = a.at("baseline_decay").get<double>();
    ag.batch_episodes = a.at("batch_episodes").get<std::size_t>();
    ag.replay_capacity = a.at("replay_capacity").get<std::size_t>();
    ag.batch_size = a.at("batch_size").get<std::size_t>();
    ag.target_sync = a.at("target_sync").get<std::size_t>();
    ag.learning_starts = a.at("learning_starts").get<std::size_t>();
    ag.train_every = a.at("train_every").get<std::size_t>();

    const auto &e = tree.at("env");
    c.env.lambda1 = e.at("lambda1").get<double>();
    c.env.lambda2 = e.at("lambda2").get<double>();
    c.env.soft_constraint = e.at("soft_constraint").get<bool>();
    c.env.lambda_eq = e.at("lambda_eq").get<double>();
    c.env.ucp_steps = e.at("ucp_steps").get<std::size_t>();
    c.env.normalize = e.at("normalize").get<bool>();

    const auto &d = tree.at("data");
    c.data.count = d.at("count").get<std::size_t>();
    c.data.validation_count = d.at("validation_count").get<std::size_t>();
    c.data.train_seed = d.at("train_seed").get<std::uint64_t>();
    c.data.validation_seed = d.at("validation_seed").get<std::uint64_t>();
    c.data.train_dir = d.at("train_dir").get<std::string>();
    c.data.validation_dir = d.at("validation_dir").get<std::string>();

    c.eval_episodes = tree.at("eval").at("episodes_per_instance").get<std::size_t>();
    collect(errors, [&] {
        const auto mode = tree.at("eval").at("mode").get<std::string>();
        if (mode == "sample") {
            c.eval_mode = agents::ActionMode::Sample;
        } else if (mode == "greedy") {
            c.eval_mode = agents::ActionMode::Greedy;
        } else {
            throw ConfigError("eval.mode: expected sample or greedy, got '" + mode + "'");
        }
    });

    const auto &q = tree.at("qaoa");
    c.qaoa.qaoa.p = q.at("p").get<std::size_t>();
    c.qaoa.qaoa.max_iterations = q.at("max_iterations").get<std::size_t>();
    collect(errors, [&] { c.qaoa.qaoa.optimizer = qaoa::optimizer_from_string(q.at("optimizer").get<std::string>()); });
    c.qaoa.qaoa.learning_rate = q.at("learning_rate").get<double>();
    c.qaoa.qaoa.init_range = q.at("init_range").get<double>();
    c.qaoa.qaoa.normalize = q.at("normalize").get<bool>();
    c.qaoa.restarts = q.at("restarts").get<std::size_t>();
    c.qaoa.slack_penalty = q.at("slack_penalty").get<double>();
    c.qaoa.lambda1 = c.env.lambda1;
    c.qaoa.lambda2 = c.env.lambda2;
    c.qaoa_encodings.clear();
    for (const auto &enc : q.at("encodings")) {
        collect(errors, [&] { c.qaoa_encodings.push_back(qaoa::encoding_from_string(enc.get<std::string>())); });
    }

    const auto &b = tree.at("bench");
    for (const auto &k : b.at("kinds")) {
        collect(errors, [&] { c.bench_kinds.push_back(ansatz::kind_from_string(k.get<std::string>())); });
    }
    c.bench_sizes = b.at("sizes").get<std::vector<std::size_t>>();
    c.bench.layers = b.at("layers").get<std::size_t>();
    c.bench.samples = b.at("samples").get<std::size_t>();
    c.bench.seed = c.seed;
    c.bench.workers = c.workers;
    collect(errors, [&] {
        const auto co = b.at("coefficients").get<std::string>();
        if (co == "random") {
            c.bench.coefficients = bench::Coefficients::Random;
        } else if (co == "unit") {
            c.bench.coefficients = bench::Coefficients::Unit;
        } else {
            throw ConfigError("bench.coefficients: expected random or unit, got '" + co + "'");
        }
    });
    collect(errors, [&] {
        const auto sl = b.at("slot").get<std::string>();
        if (sl == "variational") {
            c.bench.slot = bench::SlotRule::VariationalBlock;
        } else if (sl == "second") {
            c.bench.slot = bench::SlotRule::SecondCreated;
        } else {
            throw ConfigError("bench.slot: expected variational or second, got '" + sl + "'");
        }
    });

    // Ranges and cross-field rules.
    require(errors, c.size >= (problem == ProblemKind::MaxCut ? 2U : 1U), "size too small");
    require(errors, c.size <= 20, "size must be <= 20");
    require(errors, c.total_steps >= 1, "total_steps must be >= 1");
    require(errors, c.num_seeds >= 1, "num_seeds must be >= 1");
    require(errors, c.workers >= 1, "workers must be >= 1");
    require(errors, c.metrics_every >= 1, "metrics_every must be >= 1");
    require(errors, c.checkpoint_every >= 1, "checkpoint_every must be >= 1");
    require(errors, ag.model.layers >= 1, "agent.layers must be >= 1");
    require(errors, ag.gamma >= 0.0 && ag.gamma <= 1.0, "agent.gamma must lie in [0, 1]");
    require(errors, ag.lr_circuit > 0.0 && ag.lr_scaling > 0.0, "learning rates must be > 0");
    require(errors, ag.baseline_decay >= 0.0 && ag.baseline_decay < 1.0,
            "agent.baseline_decay must lie in [0, 1)");
    require(errors, ag.batch_episodes >= 1 && ag.batch_size >= 1 && ag.target_sync >= 1 &&
                        ag.train_every >= 1 && ag.replay_capacity >= 1,
            "agent batch, sync and capacity settings must be >= 1");
    const bool bernoulli = ag.model.head == agents::HeadKind::BernoulliZ;
    require(errors, bernoulli == (problem == ProblemKind::Ucp),
            "agent.head: bernoulli_z is required for ucp and invalid elsewhere");
    require(errors, !(c.method == Method::Qdqn && problem == ProblemKind::Ucp),
            "algorithm qdqn does not support ucp");
    require(errors, !(c.method == Method::Qdqn && ag.trainable_scalings),
            "agent.trainable_scalings is a qpg option");
    require(errors, c.data.count >= 1 && c.data.validation_count >= 1, "data counts must be >= 1");
    require(errors, c.env.ucp_steps >= 1, "env.ucp_steps must be >= 1");
    require(errors, c.eval_episodes >= 1, "eval.episodes_per_instance must be >= 1");
    require(errors, c.qaoa.restarts >= 1, "qaoa.restarts must be >= 1");
    require(errors, !c.qaoa_encodings.empty(), "qaoa.encodings must not be empty");
    require(errors, c.bench.samples >= 2, "bench.samples must be >= 2");
    require(errors, c.bench.layers >= 1, "bench.layers must be >= 1");
    collect(errors, [&] { c.qaoa.qaoa.validate(); });

    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto &err : errors) {
            msg += "\n  " + err;
        }
        throw ConfigError(msg);
    }
    c.resolved = tree;
    c.hash = config_hash(tree);
    return c;
}

} // namespace hqrl::runner
