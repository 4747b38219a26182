// SPDX-License-Identifier: Apache-2.0
//
// nrcb: 5G NR codebook library, CLI and link-level simulation harness
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nrcb/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace nrcb::kernels {
namespace {

const Backend& pick() {
    const char* force = std::getenv("NRCB_KERNEL");
    if (force != nullptr) {
        if (std::strcmp(force, "scalar") == 0) return scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
        if (std::strcmp(force, "avx2") == 0 && avx2_supported())
            return avx2_backend();
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
        if (std::strcmp(force, "neon") == 0) return neon_backend();
#endif
        return scalar_backend();
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) return avx2_backend();
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
    return neon_backend();
#endif
    return scalar_backend();
}

}  // namespace

const Backend& active_backend() {
    static const Backend& chosen = pick();
    return chosen;
}

}  // namespace nrcb::kernels
