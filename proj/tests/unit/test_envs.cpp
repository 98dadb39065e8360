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

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <numbers>

#include "hqrl/common/error.hpp"
#include "hqrl/envs/environment.hpp"
#include "test_helpers.hpp"

using namespace hqrl;
using namespace hqrl::envs;
namespace hm = hqrl::hamiltonians;
using Catch::Approx;
using std::numbers::pi;

namespace {

hm::Dataset triangle_set() {
    hm::Dataset ds;
    ds.kind = ProblemKind::MaxCut;
    ds.size = 3;
    ds.graphs.push_back(hm::WeightedGraph::complete(3));
    return ds;
}

hm::Dataset knapsack_set(std::vector<double> v, std::vector<double> w, double M) {
    hm::Dataset ds;
    ds.kind = ProblemKind::Knapsack;
    ds.size = v.size();
    ds.knapsacks.push_back({std::move(v), std::move(w), M});
    return ds;
}

hm::Dataset one_generator(double p_min, double p_max) {
    hm::Dataset ds;
    ds.kind = ProblemKind::Ucp;
    ds.size = 1;
    ds.ucps.push_back({{5.0}, {1.0}, {0.0}, {p_min}, {p_max}});
    return ds;
}

std::size_t first_allowed(const Mask &m) { return allowed_actions(m).front(); }

} // namespace

TEST_CASE("maxcut reset", "[envs]") {
    MaxCutEnv env(triangle_set());
    Rng rng = derive_rng(1, 0);
    const auto r = env.reset(rng);
    CHECK(env.partition() == 0);
    CHECK(env.last_cut() == 0.0);
    CHECK_FALSE(r.done);
    REQUIRE(r.observation.annotations);
    for (double a : *r.observation.annotations) {
        CHECK(a == pi);
    }
    CHECK(r.action_mask == Mask{1, 1, 1});
    CHECK(r.observation.ham.J.size() == 3);
}

TEST_CASE("maxcut triangle episode", "[envs]") {
    MaxCutEnv env(triangle_set());
    Rng rng = derive_rng(1, 0);
    env.reset(rng);
    auto r = env.step(1);
    CHECK(r.reward == 2.0);
    CHECK_FALSE(r.done);
    CHECK(r.action_mask == Mask{1, 0, 1});
    CHECK((*r.observation.annotations)[1] == 0.0);
    CHECK((*r.observation.annotations)[0] == pi);
    CHECK_THROWS_AS(env.step(1), ContractViolation);
    r = env.step(0);
    CHECK(r.reward == 0.0);
    CHECK(r.done);
    CHECK(env.outcome().approximation_ratio == 1.0);
    CHECK(env.outcome().total_reward == 2.0);
    CHECK_THROWS_AS(env.step(2), ContractViolation);
}

TEST_CASE("maxcut rewards telescope and annotations track the partition", "[envs]") {
    const auto ds = hm::generate_dataset(ProblemKind::MaxCut, 20, 6, 3);
    MaxCutEnv env(ds);
    Rng rng = derive_rng(2, 0);
    for (int ep = 0; ep < 200; ++ep) {
        auto r = env.reset(rng);
        double sum = 0.0;
        while (!r.done) {
            const auto allowed = allowed_actions(r.action_mask);
            REQUIRE_FALSE(allowed.empty());
            r = env.step(allowed[uniform_index(rng, allowed.size())]);
            sum += r.reward;
            for (std::size_t i = 0; i < 6; ++i) {
                CHECK(((*r.observation.annotations)[i] == 0.0) == (hm::bit(env.partition(), i) == 1));
            }
        }
        CHECK(sum == Approx(hm::cut_value(env.graph(), env.partition())).margin(1e-12));
        CHECK(env.outcome().approximation_ratio <= 1.0 + 1e-9);
        CHECK(env.outcome().approximation_ratio > 0.0);
    }
}

TEST_CASE("maxcut episodes are seed-deterministic", "[envs]") {
    const auto ds = hm::generate_dataset(ProblemKind::MaxCut, 10, 5, 4);
    auto run = [&](std::uint64_t seed) {
        MaxCutEnv env(ds);
        Rng rng = derive_rng(seed, 0);
        std::vector<double> trace;
        for (int ep = 0; ep < 20; ++ep) {
            auto r = env.reset(rng);
            trace.push_back(static_cast<double>(env.state_json()["instance"].get<std::size_t>()));
            while (!r.done) {
                r = env.step(first_allowed(r.action_mask));
                trace.push_back(r.reward);
            }
        }
        return trace;
    };
    CHECK(run(7) == run(7));
    CHECK(run(7) != run(8));
}

TEST_CASE("knapsack hand example", "[envs]") {
    KnapsackEnv env(knapsack_set({4, 2}, {3, 3}, 3));
    Rng rng = derive_rng(1, 0);
    auto r = env.reset(rng);
    CHECK(r.action_mask == Mask{1, 1});
    r = env.step(0);
    CHECK(r.done);
    CHECK(r.reward == 4.0);
    CHECK(env.outcome().optimal);
    CHECK(env.outcome().valid);
}

TEST_CASE("knapsack zero capacity ends at reset", "[envs]") {
    KnapsackEnv env(knapsack_set({1, 1}, {1, 2}, 0));
    Rng rng = derive_rng(1, 0);
    const auto r = env.reset(rng);
    CHECK(r.done);
    CHECK(r.reward == 0.0);
    CHECK(r.action_mask == Mask{0, 0});
    CHECK(env.outcome().valid);
}

TEST_CASE("knapsack selections always fit", "[envs]") {
    const auto ds = hm::generate_dataset(ProblemKind::Knapsack, 30, 6, 5);
    KnapsackEnv env(ds);
    Rng rng = derive_rng(3, 0);
    std::size_t optimal = 0;
    for (int ep = 0; ep < 300; ++ep) {
        auto r = env.reset(rng);
        const auto &inst = ds.knapsacks[env.state_json()["instance"].get<std::size_t>()];
        while (!r.done) {
            const auto allowed = allowed_actions(r.action_mask);
            const auto a = allowed[uniform_index(rng, allowed.size())];
            CHECK_THROWS_AS(env.step(hm::bit(env.selected(), 0) ? 0 : 64), Error);
            r = env.step(a);
            const auto ev = hm::evaluate_knapsack(inst, env.selected());
            CHECK(ev.valid);
            if (!r.done) {
                CHECK(r.reward == 0.0);
            }
        }
        CHECK(r.reward == hm::evaluate_knapsack(inst, env.selected()).objective);
        optimal += env.outcome().optimal ? 1 : 0;
    }
    CHECK(optimal > 0);
}

TEST_CASE("knapsack soft constraint scores overweight as zero", "[envs]") {
    EnvConfig cfg;
    cfg.soft_constraint = true;
    KnapsackEnv env(knapsack_set({4, 2}, {3, 3}, 3), cfg);
    Rng rng = derive_rng(1, 0);
    env.reset(rng);
    auto r = env.step(0);
    CHECK_FALSE(r.done);
    CHECK(r.action_mask == Mask{0, 1});
    r = env.step(1);
    CHECK(r.done);
    CHECK(r.reward == 0.0);
    CHECK_FALSE(env.outcome().valid);
}

TEST_CASE("ucp rewards", "[envs]") {
    EnvConfig cfg;
    cfg.lambda_eq = 2.0;
    UcpEnv env(one_generator(10, 30), cfg);
    Rng rng = derive_rng(1, 0);
    env.reset(rng);
    const double L = env.demands()[0];
    CHECK(L >= 10.0);
    CHECK(L <= 30.0);
    // x = 0: pure demand violation.
    auto r = env.step(0);
    CHECK(r.reward == Approx(-2.0 * L * L));

    // A generator that meets demand exactly pays only its cost.
    const double p = env.powers()[0];
    hm::QuboProblem q = hm::ucp_qubo(hm::UcpInstance{{5.0}, {1.0}, {0.0}, {10}, {30}}, {p}, p, 2.0);
    CHECK(-q.value(1) == Approx(-(5.0 + p)));

    CHECK_THROWS_AS(env.step(0b10), DimensionError);
}

TEST_CASE("ucp episodes last ten steps", "[envs]") {
    const auto ds = hm::generate_dataset(ProblemKind::Ucp, 5, 4, 6);
    UcpEnv env(ds);
    Rng rng = derive_rng(4, 0);
    for (int ep = 0; ep < 5; ++ep) {
        auto r = env.reset(rng);
        const auto &inst = ds.ucps[env.state_json()["instance"].get<std::size_t>()];
        double lo = 1e300;
        double hi = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            lo = std::min(lo, inst.p_min[i]);
            hi += inst.p_max[i];
        }
        for (double d : env.demands()) {
            CHECK(d >= lo);
            CHECK(d <= hi);
        }
        std::size_t steps = 0;
        while (!r.done) {
            for (std::size_t i = 0; i < 4; ++i) {
                CHECK(env.powers()[i] >= inst.p_min[i]);
                CHECK(env.powers()[i] <= inst.p_max[i]);
            }
            const double best = env.optimal_reward();
            const Bits x = uniform_index(rng, 16);
            const double expect = -env.current_qubo().value(x);
            r = env.step(x);
            CHECK(r.reward == expect);
            CHECK(r.reward <= best + 1e-9 * std::abs(best));
            CHECK(r.action_mask == Mask{1, 1, 1, 1});
            ++steps;
        }
        CHECK(steps == 10);
        CHECK(r.observation.ham.max_abs_coefficient() == Approx(1.0));
    }
}

TEST_CASE("make_environment and traces", "[envs]") {
    auto env = make_environment(triangle_set());
    CHECK(env->kind() == ProblemKind::MaxCut);
    CHECK(env->action_space() == ActionSpace::Discrete);
    hm::Dataset empty;
    empty.kind = ProblemKind::Knapsack;
    CHECK_THROWS_AS(make_environment(empty), ConfigError);
    CHECK_THROWS_AS(KnapsackEnv(triangle_set()), ConfigError);

    const auto dir = testing::scratch_dir("env_trace");
    {
        TraceWriter tw(dir / "t.jsonl");
        Rng rng = derive_rng(1, 0);
        auto r = env->reset(rng);
        std::size_t t = 0;
        while (!r.done) {
            const auto a = first_allowed(r.action_mask);
            r = env->step(a);
            tw.write(0, t++, a, r);
        }
    }
    std::ifstream in(dir / "t.jsonl");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.contains("reward"));
        ++lines;
    }
    CHECK(lines == 2);
}

TEST_CASE("environment state round trip", "[envs]") {
    const hm::Dataset sets[] = {hm::generate_dataset(ProblemKind::MaxCut, 4, 5, 1),
                                hm::generate_dataset(ProblemKind::Knapsack, 4, 5, 2),
                                hm::generate_dataset(ProblemKind::Ucp, 4, 4, 3)};
    for (const auto &ds : sets) {
        auto a = make_environment(ds);
        auto b = make_environment(ds);
        Rng rng = derive_rng(9, 0);
        auto r = a->reset(rng);
        const auto pick = [&](const StepResult &s) -> Action {
            return a->action_space() == ActionSpace::Discrete ? first_allowed(s.action_mask) : 0b101;
        };
        r = a->step(pick(r));
        if (r.done) {
            continue;
        }
        const auto snapshot = nlohmann::json::parse(a->state_json().dump());
        b->restore(snapshot);
        CHECK(b->state_json() == a->state_json());
        CHECK(to_json(b->current().observation) == to_json(a->current().observation));
        while (!a->done()) {
            const auto act = pick(a->current());
            const auto ra = a->step(act);
            const auto rb = b->step(act);
            CHECK(ra.reward == rb.reward);
            CHECK(ra.done == rb.done);
        }
        const auto obs = a->current().observation;
        const auto back = observation_from_json(to_json(obs));
        CHECK(back.ham.J == obs.ham.J);
        CHECK(back.ham.h == obs.ham.h);
    }
}
