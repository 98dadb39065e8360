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
#include <atomic>
#include <cstdlib>
#include <string>

#include "hqrl/common/error.hpp"
#include "hqrl/statesim/kernels.hpp"

namespace hqrl::statesim {

#if defined(HQRL_HAVE_AVX2)
namespace detail {
const KernelTable &avx2_table();
} // namespace detail
#endif

bool avx2_available() {
#if defined(HQRL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool ok =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

const KernelTable &avx2_kernels() {
#if defined(HQRL_HAVE_AVX2)
    if (avx2_available()) {
        return detail::avx2_table();
    }
#endif
    throw CapacityError("AVX2 kernels are not available on this machine");
}

namespace {

const KernelTable *initial_selection() {
    const char *env = std::getenv("HQRL_KERNELS");
    const std::string choice = env != nullptr ? env : "auto";
    if (choice == "scalar") {
        return &scalar_kernels();
    }
    if (choice == "avx2") {
        return &avx2_kernels();
    }
    return avx2_available() ? &avx2_kernels() : &scalar_kernels();
}

std::atomic<const KernelTable *> &current() {
    static std::atomic<const KernelTable *> table{initial_selection()};
    return table;
}

} // namespace

const KernelTable &active_kernels() { return *current().load(); }

void select_kernels(KernelBackend backend) {
    current().store(backend == KernelBackend::Avx2 ? &avx2_kernels()
                                                   : &scalar_kernels());
}

} // namespace hqrl::statesim
