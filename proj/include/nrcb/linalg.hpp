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
#include <vector>

// Dense complex helpers for the small systems this library actually solves:
// Gram matrices of a handful of channel samples and K x K regularized
// zero-forcing systems. Nothing here is sized for large matrices.

namespace nrcb::linalg {

using cplx = std::complex<double>;

// Eigendecomposition of a Hermitian matrix (row-major n x n) by cyclic
// Jacobi rotations. Eigenvalues are returned in descending order with the
// matching unit eigenvectors as columns of `evecs` (row-major n x n).
// Only the lower/upper consistency of `a` up to Hermitian symmetry is
// assumed; the strictly real diagonal is enforced internally.
void hermitian_eig(std::vector<cplx> a, std::size_t n,
                   std::vector<double>& evals, std::vector<cplx>& evecs);

// Solve A x = b for Hermitian positive definite A (row-major n x n) via
// Cholesky. Throws std::invalid_argument if A is not positive definite.
std::vector<cplx> solve_hpd(std::vector<cplx> a, std::size_t n,
                            const std::vector<cplx>& b);

// Principal directions of the sample covariance X X^H where X is d x s,
// column-major (each column one sample vector of length d). Computed from
// the s x s Gram matrix, so the cost is governed by the sample count.
// Returns up to k (eigenvalue, unit direction) pairs in descending
// eigenvalue order; directions whose eigenvalue falls below
// rel_tol * max_eigenvalue are dropped, so fewer than k pairs may come back.
struct PrincipalDirs {
    std::vector<double> evals;             // length m <= k
    std::vector<cplx> dirs;                // m columns of length d, contiguous
    std::size_t dim = 0;                   // d
    std::size_t count() const { return evals.size(); }
    const cplx* dir(std::size_t i) const { return dirs.data() + i * dim; }
};
PrincipalDirs gram_principal(const cplx* x, std::size_t d, std::size_t s,
                             std::size_t k, double rel_tol = 1e-12);

}  // namespace nrcb::linalg
