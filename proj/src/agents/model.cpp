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
#include "hqrl/agents/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hqrl/common/error.hpp"

namespace hqrl::agents {

using statesim::Observable;

namespace {

double scale_at(std::span<const double> scalings, std::size_t i) {
    return scalings.empty() ? 1.0 : scalings[i];
}

// log(sigmoid(z)) without overflow.
double log_sigmoid(double z) {
    return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

constexpr double kBornClip = 1e-12;

} // namespace

std::string_view to_string(HeadKind h) {
    switch (h) {
    case HeadKind::NodeX:
        return "node_x";
    case HeadKind::EdgeZZ:
        return "edge_zz";
    case HeadKind::ItemZ:
        return "item_z";
    case HeadKind::BernoulliZ:
        return "bernoulli_z";
    }
    return "?";
}

HeadKind head_from_string(std::string_view name) {
    for (auto h : {HeadKind::NodeX, HeadKind::EdgeZZ, HeadKind::ItemZ, HeadKind::BernoulliZ}) {
        if (to_string(h) == name) {
            return h;
        }
    }
    throw ConfigError("unknown head '" + std::string(name) + "'");
}

std::vector<Observable> head_observables(HeadKind head, const envs::Observation &obs) {
    const std::size_t n = obs.ham.n;
    std::vector<Observable> out(n);
    switch (head) {
    case HeadKind::NodeX:
        for (std::size_t v = 0; v < n; ++v) {
            out[v] = Observable::x(v);
        }
        break;
    case HeadKind::EdgeZZ:
        for (const auto &[ij, c] : obs.ham.J) {
            out[ij.first].add_zz(ij.first, ij.second, c);
            out[ij.second].add_zz(ij.first, ij.second, c);
        }
        break;
    case HeadKind::ItemZ:
    case HeadKind::BernoulliZ:
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = Observable::z(i, -1.0);
        }
        break;
    }
    return out;
}

statesim::CircuitTemplate model_template(const ModelSpec &spec, const envs::Observation &obs) {
    return ansatz::build(spec.ansatz, obs.ham, obs.annotations, spec.layers);
}

HeadValues evaluate_head(const ModelSpec &spec, std::span<const double> theta,
                         const envs::Observation &obs) {
    HeadValues hv;
    hv.tmpl = model_template(spec, obs);
    HQRL_REQUIRE(theta.size() == hv.tmpl.param_count, DimensionError,
                 "model has " + std::to_string(theta.size()) + " parameters, circuit needs " +
                     std::to_string(hv.tmpl.param_count));
    hv.observables = head_observables(spec.head, obs);
    const auto psi = statesim::run_circuit(hv.tmpl, theta);
    hv.values.reserve(hv.observables.size());
    for (const auto &o : hv.observables) {
        hv.values.push_back(o.empty() ? 0.0 : statesim::expectation(psi, o));
    }
    return hv;
}

std::vector<double> softmax_policy(std::span<const double> values,
                                   std::span<const double> scalings, double beta,
                                   const envs::Mask &mask) {
    HQRL_REQUIRE(mask.size() == values.size(), DimensionError, "mask and head sizes differ");
    HQRL_REQUIRE(scalings.empty() || scalings.size() == values.size(), DimensionError,
                 "scaling and head sizes differ");
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < values.size(); ++a) {
        if (mask[a] != 0) {
            top = std::max(top, beta * scale_at(scalings, a) * values[a]);
        }
    }
    HQRL_REQUIRE(std::isfinite(top), ContractViolation, "policy over an empty action mask");
    std::vector<double> p(values.size(), 0.0);
    double z = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a) {
        if (mask[a] != 0) {
            p[a] = std::exp(beta * scale_at(scalings, a) * values[a] - top);
            z += p[a];
        }
    }
    for (auto &x : p) {
        x /= z;
    }
    return p;
}

std::vector<double> bernoulli_probs(std::span<const double> values,
                                    std::span<const double> scalings, bool born) {
    std::vector<double> p(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        p[i] = born ? std::clamp(0.5 * (1.0 + values[i]), kBornClip, 1.0 - kBornClip)
                    : sigmoid(scale_at(scalings, i) * values[i]);
    }
    return p;
}

LogProbGradient softmax_log_prob_gradient(const HeadValues &hv, std::span<const double> theta,
                                          std::span<const double> scalings, double beta,
                                          const envs::Mask &mask, std::size_t action) {
    HQRL_REQUIRE(action < mask.size() && mask[action] != 0, ContractViolation,
                 "log-probability of a masked action");
    const auto p = softmax_policy(hv.values, scalings, beta, mask);
    LogProbGradient g;
    g.log_prob = std::log(p[action]);
    // d log pi(a) / d e_b = beta w_b (delta_ab - pi_b)
    Observable combined;
    if (!scalings.empty()) {
        g.scalings.assign(scalings.size(), 0.0);
    }
    for (std::size_t b = 0; b < hv.values.size(); ++b) {
        if (mask[b] == 0) {
            continue;
        }
        const double d = (b == action ? 1.0 : 0.0) - p[b];
        combined.add(hv.observables[b], beta * scale_at(scalings, b) * d);
        if (!scalings.empty()) {
            g.scalings[b] = beta * hv.values[b] * d;
        }
    }
    g.theta = combined.empty() ? std::vector<double>(theta.size(), 0.0)
                               : statesim::gradient(hv.tmpl, theta, combined);
    return g;
}

LogProbGradient bernoulli_log_prob_gradient(const HeadValues &hv, std::span<const double> theta,
                                            std::span<const double> scalings, bool born,
                                            hamiltonians::Bits x) {
    const std::size_t n = hv.values.size();
    HQRL_REQUIRE(n >= 64 || (x >> n) == 0, DimensionError, "action has bits beyond the head");
    LogProbGradient g;
    Observable combined;
    if (!scalings.empty() && !born) {
        g.scalings.assign(n, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const bool on = hamiltonians::bit(x, i) == 1;
        double d_value = 0.0;
        if (born) {
            const double p = std::clamp(0.5 * (1.0 + hv.values[i]), kBornClip, 1.0 - kBornClip);
            g.log_prob += on ? std::log(p) : std::log1p(-p);
            d_value = on ? 0.5 / p : -0.5 / (1.0 - p);
        } else {
            const double w = scale_at(scalings, i);
            const double z = w * hv.values[i];
            g.log_prob += on ? log_sigmoid(z) : log_sigmoid(-z);
            // d/dz log Bernoulli = x - sigmoid(z)
            const double r = (on ? 1.0 : 0.0) - sigmoid(z);
            d_value = w * r;
            if (!g.scalings.empty()) {
                g.scalings[i] = hv.values[i] * r;
            }
        }
        combined.add(hv.observables[i], d_value);
    }
    g.theta = statesim::gradient(hv.tmpl, theta, combined);
    return g;
}

std::size_t masked_argmax(std::span<const double> values, const envs::Mask &mask) {
    HQRL_REQUIRE(mask.size() == values.size(), DimensionError, "mask and head sizes differ");
    std::size_t best = values.size();
    for (std::size_t a = 0; a < values.size(); ++a) {
        if (mask[a] != 0 && (best == values.size() || values[a] > values[best])) {
            best = a;
        }
    }
    HQRL_REQUIRE(best < values.size(), ContractViolation, "argmax over an empty action mask");
    return best;
}

std::size_t epsilon_greedy(std::span<const double> q, const envs::Mask &mask, double eps,
                           Rng &rng) {
    const std::size_t greedy = masked_argmax(q, mask);
    if (uniform_real(rng, 0.0, 1.0) < eps) {
        const auto allowed = envs::allowed_actions(mask);
        return allowed[uniform_index(rng, allowed.size())];
    }
    return greedy;
}

statesim::ValueAndGradient q_value_gradient(const ModelSpec &spec,
                                            std::span<const double> theta,
                                            const envs::Observation &obs, std::size_t action) {
    const auto tmpl = model_template(spec, obs);
    HQRL_REQUIRE(theta.size() == tmpl.param_count, DimensionError, "parameter count mismatch");
    const auto obsv = head_observables(spec.head, obs);
    HQRL_REQUIRE(action < obsv.size(), IndexError, "action out of range");
    if (obsv[action].empty()) {
        return {0.0, std::vector<double>(theta.size(), 0.0)};
    }
    return statesim::value_and_gradient(tmpl, theta, obsv[action]);
}

} // namespace hqrl::agents
