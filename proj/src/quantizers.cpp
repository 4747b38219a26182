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

#include "nrcb/quantizers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nrcb {

std::size_t amp_grid_size(AmplitudeGrid grid) {
    switch (grid) {
        case AmplitudeGrid::WB3BIT: return 8;
        case AmplitudeGrid::SB1BIT: return 2;
        case AmplitudeGrid::REF4BIT: return 16;
        case AmplitudeGrid::SB3BIT: return 8;
    }
    throw std::invalid_argument("amp_grid_size: unknown grid");
}

double amp_value(std::size_t k, AmplitudeGrid grid) {
    if (k >= amp_grid_size(grid)) throw std::out_of_range("amp_value: k");
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    switch (grid) {
        case AmplitudeGrid::WB3BIT:
        case AmplitudeGrid::SB3BIT:
            return k == 0 ? 0.0 : std::pow(inv_sqrt2, 7.0 - static_cast<double>(k));
        case AmplitudeGrid::SB1BIT:
            return std::pow(inv_sqrt2, 1.0 - static_cast<double>(k));
        case AmplitudeGrid::REF4BIT:
            return k == 0 ? 0.0
                          : std::pow(2.0, -(15.0 - static_cast<double>(k)) / 4.0);
    }
    throw std::invalid_argument("amp_value: unknown grid");
}

std::vector<double> amp_levels(AmplitudeGrid grid) {
    std::vector<double> levels(amp_grid_size(grid));
    for (std::size_t k = 0; k < levels.size(); ++k) levels[k] = amp_value(k, grid);
    return levels;
}

std::size_t quantize_amp(double x, AmplitudeGrid grid) {
    if (x < 0.0) throw std::invalid_argument("quantize_amp: negative input");
    const std::size_t n = amp_grid_size(grid);
    std::size_t best = 0;
    double best_err = std::abs(x - amp_value(0, grid));
    for (std::size_t k = 1; k < n; ++k) {
        const double err = std::abs(x - amp_value(k, grid));
        if (err <= best_err) {  // ties go to the larger level
            best_err = err;
            best = k;
        }
    }
    return best;
}

void PskConfig::validate() const {
    if (n_psk != 4 && n_psk != 8 && n_psk != 16)
        throw std::invalid_argument("PskConfig: n_psk must be 4, 8 or 16");
}

std::complex<double> psk_phase(std::size_t c, const PskConfig& cfg) {
    cfg.validate();
    if (c >= cfg.n_psk) throw std::out_of_range("psk_phase: c");
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(c) /
                         static_cast<double>(cfg.n_psk);
    return {std::cos(phase), std::sin(phase)};
}

std::size_t quantize_phase(std::complex<double> z, const PskConfig& cfg) {
    cfg.validate();
    if (std::abs(z) == 0.0) return 0;
    const double arg = std::atan2(z.imag(), z.real());
    const double step = 2.0 * std::numbers::pi / static_cast<double>(cfg.n_psk);
    const long idx = std::lround(arg / step);
    const long n = static_cast<long>(cfg.n_psk);
    return static_cast<std::size_t>(((idx % n) + n) % n);
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        if (result > UINT64_MAX / num)
            throw std::overflow_error("binomial: overflow");
        result = result * num / i;  // exact: result*num divisible by i here
    }
    return result;
}

std::uint64_t comb_encode(const std::vector<std::size_t>& indices,
                          std::size_t n) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= n)
            throw std::invalid_argument("comb_encode: index out of range");
        if (i > 0 && indices[i] <= indices[i - 1])
            throw std::invalid_argument("comb_encode: indices not strictly ascending");
    }
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < indices.size(); ++i)
        code += binomial(indices[i], i + 1);
    return code;
}

std::vector<std::size_t> comb_decode(std::uint64_t code, std::size_t n,
                                     std::size_t l) {
    if (l > n) throw std::invalid_argument("comb_decode: l > n");
    if (code >= binomial(n, l)) throw std::out_of_range("comb_decode: code");
    std::vector<std::size_t> indices(l);
    std::uint64_t rest = code;
    std::size_t upper = n;
    for (std::size_t i = l; i-- > 0;) {
        // largest v < upper with C(v, i+1) <= rest
        std::size_t v = upper;
        while (v > 0 && binomial(v - 1, i + 1) > rest) --v;
        if (v == 0) throw std::out_of_range("comb_decode: code");
        indices[i] = v - 1;
        rest -= binomial(v - 1, i + 1);
        upper = v - 1;
    }
    return indices;
}

}  // namespace nrcb
