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
#include "hqrl/hamiltonians/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hqrl/common/error.hpp"

namespace hqrl::hamiltonians {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + p.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path &p, const std::string &text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
        throw Error("cannot write " + p.string());
    }
}

json parse_json(const fs::path &p) {
    try {
        return json::parse(read_file(p));
    } catch (const json::exception &e) {
        throw ConfigError(p.string() + ": " + e.what());
    }
}

std::string instance_name(std::size_t index, ProblemKind kind) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "instance_%04zu.%s", index,
                  kind == ProblemKind::Ucp ? "csv" : "json");
    return buf;
}

double integer_in(Rng &rng, int lo, int hi) {
    return static_cast<double>(lo) +
           static_cast<double>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::MaxCut:
        return "maxcut";
    case ProblemKind::Knapsack:
        return "knapsack";
    case ProblemKind::Ucp:
        return "ucp";
    }
    return "?";
}

ProblemKind problem_kind_from_string(std::string_view name) {
    if (name == "maxcut") {
        return ProblemKind::MaxCut;
    }
    if (name == "knapsack") {
        return ProblemKind::Knapsack;
    }
    if (name == "ucp") {
        return ProblemKind::Ucp;
    }
    throw ConfigError("unknown problem '" + std::string(name) +
                      "' (expected maxcut, knapsack or ucp)");
}

json graph_to_json(const WeightedGraph &g) {
    json edges = json::array();
    for (const auto &e : g.edges()) {
        edges.push_back(json::array({e.i, e.j, e.weight}));
    }
    return {{"n", g.num_nodes()}, {"edges", edges}};
}

WeightedGraph graph_from_json(const json &j) {
    try {
        WeightedGraph g(j.at("n").get<std::size_t>());
        for (const auto &e : j.at("edges")) {
            g.add_edge(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                       e.at(2).get<double>());
        }
        return g;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed graph: ") + e.what());
    }
}

json knapsack_to_json(const KnapsackInstance &k) {
    return {{"values", k.values}, {"weights", k.weights}, {"capacity", k.capacity}};
}

KnapsackInstance knapsack_from_json(const json &j) {
    KnapsackInstance k;
    try {
        k.values = j.at("values").get<std::vector<double>>();
        k.weights = j.at("weights").get<std::vector<double>>();
        k.capacity = j.at("capacity").get<double>();
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed knapsack: ") + e.what());
    }
    k.validate();
    return k;
}

std::string ucp_to_csv(const UcpInstance &u) {
    std::string out = "A,B,C,p_min,p_max\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
        out += format_double(u.A[i]) + ',' + format_double(u.B[i]) + ',' +
               format_double(u.C[i]) + ',' + format_double(u.p_min[i]) + ',' +
               format_double(u.p_max[i]) + '\n';
    }
    return out;
}

UcpInstance ucp_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (line.rfind("A,B,C,p_min,p_max", 0) != 0) {
        throw ConfigError("UCP CSV must start with header A,B,C,p_min,p_max");
    }
    UcpInstance u;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            continue;
        }
        std::vector<double> cols;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                cols.push_back(std::stod(cell));
            } catch (const std::exception &) {
                throw ConfigError("UCP CSV row " + std::to_string(row) +
                                  ": not a number '" + cell + "'");
            }
        }
        if (cols.size() != 5) {
            throw ConfigError("UCP CSV row " + std::to_string(row) +
                              ": expected 5 columns");
        }
        u.A.push_back(cols[0]);
        u.B.push_back(cols[1]);
        u.C.push_back(cols[2]);
        u.p_min.push_back(cols[3]);
        u.p_max.push_back(cols[4]);
    }
    u.validate();
    return u;
}

WeightedGraph random_maxcut_graph(std::size_t n, Rng &rng) {
    WeightedGraph g(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            g.add_edge(i, j, 1.0 - uniform_real(rng, 0.0, 1.0));
        }
    }
    return g;
}

KnapsackInstance random_knapsack(std::size_t items, Rng &rng) {
    KnapsackInstance k;
    double total = 0.0;
    for (std::size_t i = 0; i < items; ++i) {
        k.values.push_back(integer_in(rng, 1, 10));
        k.weights.push_back(integer_in(rng, 1, 10));
        total += k.weights.back();
    }
    k.capacity = std::round(0.6 * total);
    return k;
}

UcpInstance random_ucp(std::size_t generators, Rng &rng) {
    UcpInstance u;
    for (std::size_t i = 0; i < generators; ++i) {
        u.A.push_back(uniform_real(rng, 0.0, 100.0));
        u.B.push_back(uniform_real(rng, 0.0, 10.0));
        u.C.push_back(uniform_real(rng, 0.0, 0.1));
        const double lo = uniform_real(rng, 10.0, 50.0);
        u.p_min.push_back(lo);
        u.p_max.push_back(uniform_real(rng, lo, 200.0));
    }
    return u;
}

std::size_t Dataset::count() const {
    switch (kind) {
    case ProblemKind::MaxCut:
        return graphs.size();
    case ProblemKind::Knapsack:
        return knapsacks.size();
    case ProblemKind::Ucp:
        return ucps.size();
    }
    return 0;
}

Dataset generate_dataset(ProblemKind kind, std::size_t count, std::size_t size,
                         std::uint64_t seed) {
    HQRL_REQUIRE(count >= 1, ConfigError, "dataset count must be >= 1");
    HQRL_REQUIRE(size >= 1 && size <= statesim::kMaxQubits, ConfigError,
                 "instance size must lie in 1..20");
    Dataset ds;
    ds.kind = kind;
    ds.size = size;
    ds.seed = seed;
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = derive_rng(seed, i);
        switch (kind) {
        case ProblemKind::MaxCut: {
            ds.graphs.push_back(random_maxcut_graph(size, rng));
            const auto best = brute_force(maxcut_ising(ds.graphs.back()));
            ds.optima.push_back(cut_value(ds.graphs.back(), best.x));
            break;
        }
        case ProblemKind::Knapsack:
            ds.knapsacks.push_back(random_knapsack(size, rng));
            ds.optima.push_back(knapsack_optimum(ds.knapsacks.back()).value);
            break;
        case ProblemKind::Ucp:
            ds.ucps.push_back(random_ucp(size, rng));
            break;
        }
    }
    return ds;
}

void write_dataset(const Dataset &ds, const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create " + dir.string() + ": " + ec.message());
    }
    json files = json::array();
    for (std::size_t i = 0; i < ds.count(); ++i) {
        const std::string name = instance_name(i, ds.kind);
        std::string text;
        switch (ds.kind) {
        case ProblemKind::MaxCut:
            text = graph_to_json(ds.graphs[i]).dump(1) + "\n";
            break;
        case ProblemKind::Knapsack:
            text = knapsack_to_json(ds.knapsacks[i]).dump(1) + "\n";
            break;
        case ProblemKind::Ucp:
            text = ucp_to_csv(ds.ucps[i]);
            break;
        }
        write_file(dir / name, text);
        files.push_back(name);
    }
    const json manifest = {{"kind", to_string(ds.kind)},
                           {"count", ds.count()},
                           {"size", ds.size},
                           {"seed", ds.seed},
                           {"files", files},
                           {"optima", ds.optima}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Dataset load_dataset(const fs::path &dir) {
    const json m = parse_json(dir / "manifest.json");
    Dataset ds;
    try {
        ds.kind = problem_kind_from_string(m.at("kind").get<std::string>());
        ds.size = m.at("size").get<std::size_t>();
        ds.seed = m.at("seed").get<std::uint64_t>();
        ds.optima = m.at("optima").get<std::vector<double>>();
        for (const auto &f : m.at("files")) {
            const fs::path p = dir / f.get<std::string>();
            switch (ds.kind) {
            case ProblemKind::MaxCut:
                ds.graphs.push_back(graph_from_json(parse_json(p)));
                break;
            case ProblemKind::Knapsack:
                ds.knapsacks.push_back(knapsack_from_json(parse_json(p)));
                break;
            case ProblemKind::Ucp:
                ds.ucps.push_back(ucp_from_csv(read_file(p)));
                break;
            }
        }
        HQRL_REQUIRE(m.at("count").get<std::size_t>() == ds.count(), ConfigError,
                     "manifest count disagrees with its file list");
    } catch (const json::exception &e) {
        throw ConfigError(dir.string() + "/manifest.json: " + e.what());
    }
    if (ds.kind != ProblemKind::Ucp) {
        HQRL_REQUIRE(ds.optima.size() == ds.count(), ConfigError,
                     "manifest optima length disagrees with count");
    }
    return ds;
}

} // namespace hqrl::hamiltonians
