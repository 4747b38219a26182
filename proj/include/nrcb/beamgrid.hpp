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

#include "nrcb/antenna.hpp"

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace nrcb {

using cplx = std::complex<double>;

// One column of the oversampled 2D-DFT grid: the Kronecker product of a
// vertical and a horizontal DFT vector, unit-modulus entries, length n1*n2.
struct BeamVector {
    std::size_t m1 = 0;  // in [0, o1*n1)
    std::size_t m2 = 0;  // in [0, o2*n2)
    std::vector<cplx> entries;
};

// Entry at q*n1 + p is exp(+j*2*pi*(p*m1/(o1*n1) + q*m2/(o2*n2))).
BeamVector dft_beam(const AntennaConfig& cfg, std::size_t m1, std::size_t m2);

// All o1*o2 rotation offsets (q1, q2). Beams (m1, m2) with
// m1 = q1 (mod o1) and m2 = q2 (mod o2) form one orthogonal sub-grid.
std::vector<std::pair<std::size_t, std::size_t>> rotation_hypotheses(
    const AntennaConfig& cfg);

// Beam of sub-grid position (x1, x2) within rotation (q1, q2), i.e.
// m1 = o1*x1 + q1, m2 = o2*x2 + q2.
BeamVector rotated_beam(const AntennaConfig& cfg, std::size_t q1,
                        std::size_t q2, std::size_t x1, std::size_t x2);

// Flattened sub-grid index (horizontal-fastest), used for the combinatorial
// beam-choice report: idx = x2*n1 + x1 with x1 in [0,n1), x2 in [0,n2).
inline std::size_t subgrid_index(const AntennaConfig& cfg, std::size_t x1,
                                 std::size_t x2) {
    return x2 * cfg.n1 + x1;
}
inline std::pair<std::size_t, std::size_t> subgrid_position(
    const AntennaConfig& cfg, std::size_t idx) {
    return {idx % cfg.n1, idx / cfg.n1};
}

}  // namespace nrcb
