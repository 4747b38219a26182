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

#if defined(__aarch64__) || defined(_M_ARM64)

#include <arm_neon.h>

// NEON kernels: one float64x2_t per complex double [re im].

namespace nrcb::kernels {
namespace {

inline const double* flat(const cplx* p) {
    return reinterpret_cast<const double*>(p);
}
inline double* flat(cplx* p) { return reinterpret_cast<double*>(p); }

cplx cdotc_neon(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = flat(a);
    const double* pb = flat(b);
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    const float64x2_t sgn = {1.0, -1.0};
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t va = vld1q_f64(pa + 2 * i);   // [ar ai]
        float64x2_t vb = vld1q_f64(pb + 2 * i);   // [br bi]
        acc_re = vfmaq_f64(acc_re, va, vb);       // [ar*br, ai*bi]
        float64x2_t vbsw = vextq_f64(vb, vb, 1);  // [bi br]
        float64x2_t vax = vmulq_f64(va, sgn);     // [ar -ai]
        acc_im = vfmaq_f64(acc_im, vax, vbsw);    // [ar*bi, -ai*br]
    }
    return {vaddvq_f64(acc_re), vaddvq_f64(acc_im)};
}

cplx cdotu_neon(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = flat(a);
    const double* pb = flat(b);
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    const float64x2_t sgn = {1.0, -1.0};
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t va = vld1q_f64(pa + 2 * i);
        float64x2_t vb = vld1q_f64(pb + 2 * i);
        float64x2_t vax = vmulq_f64(va, sgn);     // [ar -ai]
        acc_re = vfmaq_f64(acc_re, vax, vb);      // [ar*br, -ai*bi]
        float64x2_t vbsw = vextq_f64(vb, vb, 1);  // [bi br]
        acc_im = vfmaq_f64(acc_im, va, vbsw);     // [ar*bi, ai*br]
    }
    return {vaddvq_f64(acc_re), vaddvq_f64(acc_im)};
}

double cnorm2_neon(const cplx* a, std::size_t n) {
    const double* pa = flat(a);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t va = vld1q_f64(pa + 2 * i);
        acc = vfmaq_f64(acc, va, va);
    }
    return vaddvq_f64(acc);
}

void caxpy_neon(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double* px = flat(x);
    double* py = flat(y);
    const float64x2_t var = vdupq_n_f64(alpha.real());
    const float64x2_t vai = vdupq_n_f64(alpha.imag());
    const float64x2_t sgn = {-1.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t vx = vld1q_f64(px + 2 * i);
        float64x2_t vy = vld1q_f64(py + 2 * i);
        float64x2_t vxsw = vextq_f64(vx, vx, 1);  // [xi xr]
        vxsw = vmulq_f64(vxsw, sgn);              // [-xi xr]
        vy = vfmaq_f64(vy, var, vx);
        vy = vfmaq_f64(vy, vai, vxsw);
        vst1q_f64(py + 2 * i, vy);
    }
}

}  // namespace

const Backend& neon_backend() {
    static const Backend b{"neon", cdotc_neon, cdotu_neon, cnorm2_neon,
                           caxpy_neon};
    return b;
}

}  // namespace nrcb::kernels

#endif  // aarch64
