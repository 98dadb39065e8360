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
#include "hqrl/common/random.hpp"

#include <sstream>

#include "hqrl/common/error.hpp"

namespace hqrl {

Rng derive_rng(std::uint64_t master, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master & 0xffffffffU),
                      static_cast<std::uint32_t>(master >> 32U),
                      static_cast<std::uint32_t>(index & 0xffffffffU),
                      static_cast<std::uint32_t>(index >> 32U), 0x68717270U};
    return Rng(seq);
}

double uniform_real(Rng &rng, double lo, double hi) {
    // 53 random mantissa bits -> [0, 1)
    const double unit =
        static_cast<double>(rng() >> 11U) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

std::uint64_t uniform_index(Rng &rng, std::uint64_t n) {
    HQRL_REQUIRE(n > 0, ContractViolation, "uniform_index: empty range");
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
    std::uint64_t draw = rng();
    while (draw >= limit) {
        draw = rng();
    }
    return draw % n;
}

std::string serialize_rng(const Rng &rng) {
    std::ostringstream os;
    os << rng;
    return os.str();
}

Rng deserialize_rng(const std::string &text) {
    std::istringstream is(text);
    Rng rng;
    is >> rng;
    HQRL_REQUIRE(!is.fail(), ConfigError, "corrupt RNG state in checkpoint");
    return rng;
}

} // namespace hqrl
