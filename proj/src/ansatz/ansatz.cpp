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
#include "hqrl/ansatz/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hqrl/common/error.hpp"

namespace hqrl::ansatz {

using hamiltonians::IsingHamiltonian;
using statesim::AngleBinding;
using statesim::CircuitTemplate;
using statesim::GateKind;
using statesim::TemplateGate;

namespace {

constexpr double kPi = std::numbers::pi;

struct Term {
    GateKind kind;
    std::size_t q0;
    std::size_t q1;
    double coeff;
};

std::vector<Term> encoding_terms(const IsingHamiltonian &ham) {
    std::vector<Term> terms;
    // std::map iteration already yields (i, j) and i in ascending order.
    for (const auto &[ij, c] : ham.J) {
        terms.push_back({GateKind::RZZ, ij.first, ij.second, c});
    }
    for (const auto &[i, c] : ham.h) {
        terms.push_back({GateKind::RZ, i, 0, c});
    }
    return terms;
}

double mixer_scale(const std::optional<Annotations> &ann, std::size_t q) {
    return ann ? (*ann)[q] / kPi : 1.0;
}

class Builder {
  public:
    explicit Builder(CircuitTemplate &t) : t_(t) {}

    std::size_t new_param() {
        t_.layer_params.back().push_back(t_.param_count);
        return t_.param_count++;
    }

    void begin_layer() {
        t_.layer_starts.push_back(t_.gates.size());
        t_.layer_params.emplace_back();
    }

    void trainable(GateKind k, std::size_t q0, std::size_t q1, std::size_t p,
                   double scale) {
        t_.gates.push_back({k, q0, q1, AngleBinding{static_cast<std::int64_t>(p), scale, 0.0}});
    }

    void fixed(GateKind k, std::size_t q0, std::size_t q1, double angle) {
        t_.gates.push_back({k, q0, q1, AngleBinding{-1, 1.0, angle}});
    }

  private:
    CircuitTemplate &t_;
};

} // namespace

std::string_view to_string(AnsatzKind kind) {
    switch (kind) {
    case AnsatzKind::SgeSgv:
        return "sge_sgv";
    case AnsatzKind::MgeSgv:
        return "mge_sgv";
    case AnsatzKind::MgeMgv:
        return "mge_mgv";
    case AnsatzKind::SgeSgvHea:
        return "sge_sgv_hea";
    case AnsatzKind::EncodingHea:
        return "encoding_hea";
    }
    return "?";
}

AnsatzKind kind_from_string(std::string_view name) {
    for (auto k : kAllKinds) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ConfigError("unknown ansatz '" + std::string(name) +
                      "' (expected sge_sgv, mge_sgv, mge_mgv, sge_sgv_hea or "
                      "encoding_hea)");
}

Annotations all_unassigned(std::size_t n) { return Annotations(n, kPi); }

void validate_annotations(const Annotations &ann) {
    for (double a : ann) {
        HQRL_REQUIRE(a == 0.0 || a == kPi, ContractViolation,
                     "annotations must be 0 or pi");
    }
}

std::size_t param_count(AnsatzKind kind, const IsingHamiltonian &ham,
                        std::size_t layers) {
    const std::size_t T = ham.term_count();
    const std::size_t n = ham.n;
    switch (kind) {
    case AnsatzKind::SgeSgv:
        return 2 * layers;
    case AnsatzKind::MgeSgv:
        return layers * (T + 1);
    case AnsatzKind::MgeMgv:
        return layers * (T + n);
    case AnsatzKind::SgeSgvHea:
        return layers * (2 + 2 * n);
    case AnsatzKind::EncodingHea:
        return 2 * n * layers;
    }
    return 0;
}

CircuitTemplate build(AnsatzKind kind, const IsingHamiltonian &ham,
                      const std::optional<Annotations> &ann, std::size_t layers) {
    HQRL_REQUIRE(layers >= 1, ContractViolation, "ansatz needs at least one layer");
    HQRL_REQUIRE(ham.n >= 1 && ham.n <= statesim::kMaxQubits, CapacityError,
                 "ansatz register size out of range");
    if (ann) {
        HQRL_REQUIRE(ann->size() == ham.n, DimensionError,
                     "annotation length differs from qubit count");
        validate_annotations(*ann);
    }
    const std::size_t n = ham.n;
    const auto terms = encoding_terms(ham);
    HQRL_REQUIRE(!terms.empty() || kind == AnsatzKind::EncodingHea ||
                     kind == AnsatzKind::MgeSgv || kind == AnsatzKind::MgeMgv,
                 ContractViolation, "shared encoding parameter needs at least one term");

    CircuitTemplate t;
    t.num_qubits = n;
    t.initial_state = statesim::InitialState::Plus;
    Builder b(t);

    for (std::size_t l = 0; l < layers; ++l) {
        b.begin_layer();
        switch (kind) {
        case AnsatzKind::SgeSgv:
        case AnsatzKind::SgeSgvHea: {
            const std::size_t enc = b.new_param();
            const std::size_t mix = b.new_param();
            for (const auto &term : terms) {
                b.trainable(term.kind, term.q0, term.q1, enc, term.coeff);
            }
            for (std::size_t q = 0; q < n; ++q) {
                b.trainable(GateKind::RX, q, 0, mix, mixer_scale(ann, q));
            }
            if (kind == AnsatzKind::SgeSgvHea) {
                std::vector<std::size_t> ry(n);
                std::vector<std::size_t> rz(n);
                for (auto &p : ry) {
                    p = b.new_param();
                }
                for (auto &p : rz) {
                    p = b.new_param();
                }
                for (std::size_t q = 0; q < n; ++q) {
                    b.trainable(GateKind::RY, q, 0, ry[q], 1.0);
                    b.trainable(GateKind::RZ, q, 0, rz[q], 1.0);
                }
            }
            break;
        }
        case AnsatzKind::MgeSgv:
        case AnsatzKind::MgeMgv: {
            for (const auto &term : terms) {
                b.trainable(term.kind, term.q0, term.q1, b.new_param(), term.coeff);
            }
            if (kind == AnsatzKind::MgeSgv) {
                const std::size_t mix = b.new_param();
                for (std::size_t q = 0; q < n; ++q) {
                    b.trainable(GateKind::RX, q, 0, mix, mixer_scale(ann, q));
                }
            } else {
                for (std::size_t q = 0; q < n; ++q) {
                    b.trainable(GateKind::RX, q, 0, b.new_param(), mixer_scale(ann, q));
                }
            }
            break;
        }
        case AnsatzKind::EncodingHea: {
            for (const auto &term : terms) {
                b.fixed(term.kind, term.q0, term.q1, term.coeff);
            }
            std::vector<std::size_t> ry(n);
            std::vector<std::size_t> rz(n);
            for (auto &p : ry) {
                p = b.new_param();
            }
            for (auto &p : rz) {
                p = b.new_param();
            }
            for (std::size_t q = 0; q < n; ++q) {
                b.trainable(GateKind::RY, q, 0, ry[q], 1.0);
                b.trainable(GateKind::RZ, q, 0, rz[q], 1.0);
            }
            break;
        }
        }
    }
    HQRL_REQUIRE(t.param_count == param_count(kind, ham, layers), ContractViolation,
                 "ansatz builder and param_count disagree");
    t.validate();
    return t;
}

IsingHamiltonian normalize_coefficients(const IsingHamiltonian &ham) {
    return ham.normalized();
}

std::vector<double> init_params(std::size_t count, Rng &rng, double lo, double hi) {
    std::vector<double> p(count);
    for (auto &x : p) {
        x = uniform_real(rng, lo, hi);
    }
    return p;
}

std::vector<double> init_params(std::size_t count, Rng &rng) {
    return init_params(count, rng, -kPi / 8.0, kPi / 8.0);
}

std::size_t param_slot(const CircuitTemplate &tmpl, std::size_t layer,
                       std::size_t slot) {
    HQRL_REQUIRE(layer >= 1 && layer <= tmpl.layer_params.size(), ContractViolation,
                 "layer " + std::to_string(layer) + " does not exist");
    const auto &ps = tmpl.layer_params[layer - 1];
    HQRL_REQUIRE(slot >= 1 && slot <= ps.size(), ContractViolation,
                 "layer " + std::to_string(layer) + " has no parameter slot " +
                     std::to_string(slot));
    return ps[slot - 1];
}

std::size_t variational_offset(AnsatzKind kind, const IsingHamiltonian &ham) {
    switch (kind) {
    case AnsatzKind::SgeSgv:
    case AnsatzKind::SgeSgvHea:
        return 1;
    case AnsatzKind::MgeSgv:
    case AnsatzKind::MgeMgv:
        return ham.term_count();
    case AnsatzKind::EncodingHea:
        return 0;
    }
    return 0;
}

void set_annotations(CircuitTemplate &tmpl, AnsatzKind kind, const Annotations &ann) {
    HQRL_REQUIRE(ann.size() == tmpl.num_qubits, DimensionError,
                 "annotation length differs from qubit count");
    validate_annotations(ann);
    if (kind == AnsatzKind::EncodingHea) {
        return;
    }
    for (auto &g : tmpl.gates) {
        if (g.kind == GateKind::RX) {
            g.binding.scale = ann[g.qubit0] / kPi;
        }
    }
}

} // namespace hqrl::ansatz
