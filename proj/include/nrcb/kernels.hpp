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

#pragma once

#include <complex>
#include <cstddef>

// Complex double-precision inner-loop kernels. Every projection, energy
// accumulation and weighted-sum reconstruction in the library routes through
// this interface. A scalar reference implementation always exists; on x86-64
// an AVX2+FMA variant and on arm64 a NEON variant are selected at runtime.
// All variants must agree with the scalar reference to floating-point
// reassociation tolerance (see tests/test_kernels.cpp).

namespace nrcb::kernels {

using cplx = std::complex<double>;

struct Backend {
    const char* name;
    // sum_i conj(a[i]) * b[i]
    cplx (*cdotc)(const cplx* a, const cplx* b, std::size_t n);
    // sum_i a[i] * b[i]
    cplx (*cdotu)(const cplx* a, const cplx* b, std::size_t n);
    // sum_i |a[i]|^2
    double (*cnorm2)(const cplx* a, std::size_t n);
    // y[i] += alpha * x[i]
    void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
};

// Scalar reference backend (always available).
const Backend& scalar_backend();

// Backend chosen at first use: best SIMD variant the CPU supports, or the
// scalar reference. Environment variable NRCB_KERNEL=scalar|avx2|neon forces
// a specific backend; an unsupported choice falls back to scalar.
const Backend& active_backend();

#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();   // callable only if the CPU has AVX2+FMA
bool avx2_supported();
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
const Backend& neon_backend();
#endif

inline cplx cdotc(const cplx* a, const cplx* b, std::size_t n) {
    return active_backend().cdotc(a, b, n);
}
inline cplx cdotu(const cplx* a, const cplx* b, std::size_t n) {
    return active_backend().cdotu(a, b, n);
}
inline double cnorm2(const cplx* a, std::size_t n) {
    return active_backend().cnorm2(a, n);
}
inline void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    active_backend().caxpy(alpha, x, y, n);
}

}  // namespace nrcb::kernels
