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
#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace hqrl {

using Rng = std::mt19937_64;

/// Independent stream for task `index` of a run seeded with `master`.
/// Results never depend on how tasks are spread across workers.
Rng derive_rng(std::uint64_t master, std::uint64_t index);

/// Uniform real on [lo, hi) built from raw engine output, so sequences are
/// identical across standard library implementations.
double uniform_real(Rng &rng, double lo, double hi);

/// Uniform integer on [0, n).
std::uint64_t uniform_index(Rng &rng, std::uint64_t n);

/// Engine state round trip, used by checkpoints.
std::string serialize_rng(const Rng &rng);
Rng deserialize_rng(const std::string &text);

} // namespace hqrl
