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

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// AVX2+FMA kernels. A 256-bit lane holds two interleaved complex doubles
// [re0 im0 re1 im1]; std::complex<double> arrays are layout-compatible.
// This translation unit is compiled with -mavx2 -mfma and must only be
// entered after a runtime CPU check (see dispatch.cpp).

namespace nrcb::kernels {
namespace {

inline const double* flat(const cplx* p) {
    return reinterpret_cast<const double*>(p);
}
inline double* flat(cplx* p) { return reinterpret_cast<double*>(p); }

// [x0 x1 x2 x3] -> x0 + x1 + x2 + x3
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

cplx cdotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = flat(a);
    const double* pb = flat(b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const __m256d neg_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        // re: ar*br + ai*bi
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);
        // im: ar*bi - ai*br  via (ar, -ai) * (bi, br)
        __m256d vbsw = _mm256_permute_pd(vb, 0x5);
        __m256d vax = _mm256_xor_pd(va, neg_odd);
        acc_im = _mm256_fmadd_pd(vax, vbsw, acc_im);
    }
    double re = hsum(acc_re), im = hsum(acc_im);
    for (; i < n; ++i) {
        const double ar = pa[2 * i], ai = pa[2 * i + 1];
        const double br = pb[2 * i], bi = pb[2 * i + 1];
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

cplx cdotu_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = flat(a);
    const double* pb = flat(b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const __m256d neg_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        // re: ar*br - ai*bi  via (ar, -ai) * (br, bi)
        __m256d vax = _mm256_xor_pd(va, neg_odd);
        acc_re = _mm256_fmadd_pd(vax, vb, acc_re);
        // im: ar*bi + ai*br
        __m256d vbsw = _mm256_permute_pd(vb, 0x5);
        acc_im = _mm256_fmadd_pd(va, vbsw, acc_im);
    }
    double re = hsum(acc_re), im = hsum(acc_im);
    for (; i < n; ++i) {
        const double ar = pa[2 * i], ai = pa[2 * i + 1];
        const double br = pb[2 * i], bi = pb[2 * i + 1];
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

double cnorm2_avx2(const cplx* a, std::size_t n) {
    const double* pa = flat(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        acc = _mm256_fmadd_pd(va, va, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        s += pa[2 * i] * pa[2 * i] + pa[2 * i + 1] * pa[2 * i + 1];
    return s;
}

void caxpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double* px = flat(x);
    double* py = flat(y);
    const __m256d var = _mm256_set1_pd(alpha.real());
    const __m256d vai = _mm256_set1_pd(alpha.imag());
    const __m256d neg_even = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(px + 2 * i);
        __m256d vy = _mm256_loadu_pd(py + 2 * i);
        // (ar*xr - ai*xi, ar*xi + ai*xr) = ar*(xr,xi) + ai*(-xi,xr)
        __m256d vxsw = _mm256_permute_pd(vx, 0x5);
        vxsw = _mm256_xor_pd(vxsw, neg_even);
        vy = _mm256_fmadd_pd(var, vx, vy);
        vy = _mm256_fmadd_pd(vai, vxsw, vy);
        _mm256_storeu_pd(py + 2 * i, vy);
    }
    const double pr = alpha.real(), pi = alpha.imag();
    for (; i < n; ++i) {
        const double xr = px[2 * i], xi = px[2 * i + 1];
        py[2 * i] += pr * xr - pi * xi;
        py[2 * i + 1] += pr * xi + pi * xr;
    }
}

}  // namespace

const Backend& avx2_backend() {
    static const Backend b{"avx2", cdotc_avx2, cdotu_avx2, cnorm2_avx2,
                           caxpy_avx2};
    return b;
}

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace nrcb::kernels

#endif  // x86_64
