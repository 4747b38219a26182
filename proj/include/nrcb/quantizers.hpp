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
#include <cstdint>
#include <vector>

// Scalar amplitude/phase quantizer grids and the combinatorial subset code
// shared by the multi-beam codebooks.

namespace nrcb {

// WB3BIT  8 levels: 0 and (1/sqrt2)^(7-k), k = 1..7 (wideband amplitude)
// SB1BIT  2 levels: (1/sqrt2)^(1-k), k = 0..1      (subband amplitude)
// REF4BIT 16 levels: 0 and 2^(-(15-k)/4), k = 1..15 (polarization reference)
// SB3BIT  8 levels: 0 and (1/sqrt2)^(7-k), k = 1..7 (angle-delay amplitude)
enum class AmplitudeGrid : std::uint8_t { WB3BIT, SB1BIT, REF4BIT, SB3BIT };

std::size_t amp_grid_size(AmplitudeGrid grid);

// Amplitude value of grid index k; throws std::out_of_range for bad k.
double amp_value(std::size_t k, AmplitudeGrid grid);

// All levels of a grid in ascending order (max level is always 1).
std::vector<double> amp_levels(AmplitudeGrid grid);

// Nearest grid index for x >= 0; ties break toward the larger index.
std::size_t quantize_amp(double x, AmplitudeGrid grid);

struct PskConfig {
    std::size_t n_psk = 4;  // one of {4, 8, 16}
    void validate() const;
};

// exp(j*2*pi*c/n_psk) for c in [0, n_psk).
std::complex<double> psk_phase(std::size_t c, const PskConfig& cfg);

// Nearest PSK index for the argument of z (z = 0 maps to index 0).
std::size_t quantize_phase(std::complex<double> z, const PskConfig& cfg);

// Binomial coefficient as uint64; throws std::overflow_error if it does not
// fit (far beyond the grids used here).
std::uint64_t binomial(std::size_t n, std::size_t k);

// Combinatorial number system: a sorted L-subset of [0, n) maps to
// sum_i C(indices[i], i+1), a bijection onto [0, C(n, L)).
std::uint64_t comb_encode(const std::vector<std::size_t>& indices,
                          std::size_t n);
std::vector<std::size_t> comb_decode(std::uint64_t code, std::size_t n,
                                     std::size_t l);

}  // namespace nrcb
