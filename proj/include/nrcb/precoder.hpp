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

namespace nrcb {

using cplx = std::complex<double>;

// Per-subband precoding matrix: n_rows x n_layers for each of n_subbands.
// Column (t, l) is stored contiguously.
struct Precoder {
    std::size_t n_rows = 0;
    std::size_t n_layers = 0;
    std::size_t n_subbands = 0;
    std::vector<cplx> data;

    static Precoder zeros(std::size_t rows, std::size_t layers,
                          std::size_t subbands) {
        Precoder p;
        p.n_rows = rows;
        p.n_layers = layers;
        p.n_subbands = subbands;
        p.data.assign(rows * layers * subbands, cplx{0.0, 0.0});
        return p;
    }

    cplx* col(std::size_t t, std::size_t l) {
        return data.data() + (t * n_layers + l) * n_rows;
    }
    const cplx* col(std::size_t t, std::size_t l) const {
        return data.data() + (t * n_layers + l) * n_rows;
    }
};

// Scale every column to unit norm; all-zero columns are left untouched.
void normalize_columns(Precoder& p);

// Phase-invariant reconstruction error between two precoders of equal
// shape: mean over (subband, layer) of 1 - |<a, b>|^2 / (|a|^2 |b|^2).
// A pair with exactly one zero column contributes 1, two zero columns 0.
double chordal_nmse(const Precoder& a, const Precoder& b);

}  // namespace nrcb
