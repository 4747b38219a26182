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

// Reference kernels. Kept free of manual unrolling so they stay an obvious
// correctness baseline for the SIMD variants.

namespace nrcb::kernels {
namespace {

cplx cdotc_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

cplx cdotu_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

double cnorm2_scalar(const cplx* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return acc;
}

void caxpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double pr = alpha.real(), pi = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx{pr * xr - pi * xi, pr * xi + pi * xr};
    }
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend b{"scalar", cdotc_scalar, cdotu_scalar, cnorm2_scalar,
                           caxpy_scalar};
    return b;
}

}  // namespace nrcb::kernels
