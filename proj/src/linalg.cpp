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

#include "nrcb/linalg.hpp"

#include "nrcb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nrcb::linalg {

void hermitian_eig(std::vector<cplx> a, std::size_t n,
                   std::vector<double>& evals, std::vector<cplx>& evecs) {
    if (a.size() != n * n) throw std::invalid_argument("hermitian_eig: size");
    auto A = [&](std::size_t r, std::size_t c) -> cplx& { return a[r * n + c]; };

    std::vector<cplx> v(n * n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    auto V = [&](std::size_t r, std::size_t c) -> cplx& { return v[r * n + c]; };

    for (std::size_t i = 0; i < n; ++i) A(i, i) = cplx{A(i, i).real(), 0.0};

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(A(i, i));
    scale = std::max(scale, 1e-300);

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(A(p, q));
        if (off < 1e-30 * scale * scale) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx gamma = A(p, q);
                const double g = std::abs(gamma);
                if (g < 1e-300) continue;
                const cplx u = gamma / g;  // e^{i phi}
                const double alpha = A(p, p).real();
                const double beta = A(q, q).real();
                const double zeta = (alpha - beta) / (2.0 * g);
                // smaller-magnitude root of t^2 - 2*zeta*t - 1 = 0
                double t;
                if (zeta >= 0.0)
                    t = -1.0 / (zeta + std::sqrt(1.0 + zeta * zeta));
                else
                    t = 1.0 / (-zeta + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // R: R_pp = c, R_pq = s*u, R_qp = -s*conj(u), R_qq = c
                for (std::size_t i = 0; i < n; ++i) {  // A <- A R (columns)
                    const cplx aip = A(i, p), aiq = A(i, q);
                    A(i, p) = aip * c - aiq * (s * std::conj(u));
                    A(i, q) = aip * (s * u) + aiq * c;
                }
                for (std::size_t i = 0; i < n; ++i) {  // A <- R^H A (rows)
                    const cplx api = A(p, i), aqi = A(q, i);
                    A(p, i) = api * c - aqi * (s * u);
                    A(q, i) = api * (s * std::conj(u)) + aqi * c;
                }
                A(p, q) = cplx{0.0, 0.0};
                A(q, p) = cplx{0.0, 0.0};
                A(p, p) = cplx{A(p, p).real(), 0.0};
                A(q, q) = cplx{A(q, q).real(), 0.0};
                for (std::size_t i = 0; i < n; ++i) {  // V <- V R
                    const cplx vip = V(i, p), viq = V(i, q);
                    V(i, p) = vip * c - viq * (s * std::conj(u));
                    V(i, q) = vip * (s * u) + viq * c;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return A(x, x).real() > A(y, y).real();
    });

    evals.resize(n);
    evecs.assign(n * n, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        evals[k] = A(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) evecs[i * n + k] = V(i, order[k]);
    }
}

std::vector<cplx> solve_hpd(std::vector<cplx> a, std::size_t n,
                            const std::vector<cplx>& b) {
    if (a.size() != n * n || b.size() != n)
        throw std::invalid_argument("solve_hpd: size");
    auto A = [&](std::size_t r, std::size_t c) -> cplx& { return a[r * n + c]; };

    // In-place lower Cholesky A = L L^H.
    for (std::size_t j = 0; j < n; ++j) {
        double d = A(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(A(j, k));
        if (d <= 0.0) throw std::invalid_argument("solve_hpd: not PD");
        const double ljj = std::sqrt(d);
        A(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx sum = A(i, j);
            for (std::size_t k = 0; k < j; ++k)
                sum -= A(i, k) * std::conj(A(j, k));
            A(i, j) = sum / ljj;
        }
    }
    // Forward solve L y = b, then backward solve L^H x = y.
    std::vector<cplx> x(b);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) x[i] -= A(i, k) * x[k];
        x[i] /= A(i, i).real();
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k)
            x[ii] -= std::conj(A(k, ii)) * x[k];
        x[ii] /= A(ii, ii).real();
    }
    return x;
}

PrincipalDirs gram_principal(const cplx* x, std::size_t d, std::size_t s,
                             std::size_t k, double rel_tol) {
    std::vector<cplx> gram(s * s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            gram[i * s + j] = kernels::cdotc(x + i * d, x + j * d, d);

    std::vector<double> evals;
    std::vector<cplx> evecs;
    hermitian_eig(std::move(gram), s, evals, evecs);

    PrincipalDirs out;
    out.dim = d;
    const double cutoff = std::max(evals.empty() ? 0.0 : evals[0], 0.0) * rel_tol;
    const std::size_t m = std::min<std::size_t>(k, s);
    for (std::size_t e = 0; e < m; ++e) {
        if (evals[e] <= cutoff || evals[e] <= 0.0) break;
        const double inv = 1.0 / std::sqrt(evals[e]);
        const std::size_t base = out.dirs.size();
        out.dirs.resize(base + d, cplx{0.0, 0.0});
        // direction = X w / sqrt(lambda)
        for (std::size_t j = 0; j < s; ++j)
            kernels::caxpy(evecs[j * s + e] * inv, x + j * d,
                           out.dirs.data() + base, d);
        out.evals.push_back(evals[e]);
    }
    return out;
}

}  // namespace nrcb::linalg
