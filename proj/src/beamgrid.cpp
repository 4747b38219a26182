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

#include "nrcb/beamgrid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nrcb {

BeamVector dft_beam(const AntennaConfig& cfg, std::size_t m1, std::size_t m2) {
    cfg.validate();
    if (m1 >= cfg.o1 * cfg.n1)
        throw std::out_of_range("dft_beam: m1 outside grid");
    if (m2 >= cfg.o2 * cfg.n2)
        throw std::out_of_range("dft_beam: m2 outside grid");

    BeamVector w;
    w.m1 = m1;
    w.m2 = m2;
    w.entries.resize(cfg.n1 * cfg.n2);
    const double f1 = static_cast<double>(m1) / static_cast<double>(cfg.o1 * cfg.n1);
    const double f2 = static_cast<double>(m2) / static_cast<double>(cfg.o2 * cfg.n2);
    for (std::size_t q = 0; q < cfg.n2; ++q) {
        for (std::size_t p = 0; p < cfg.n1; ++p) {
            const double phase = 2.0 * std::numbers::pi *
                                 (static_cast<double>(p) * f1 +
                                  static_cast<double>(q) * f2);
            w.entries[q * cfg.n1 + p] = cplx{std::cos(phase), std::sin(phase)};
        }
    }
    return w;
}

std::vector<std::pair<std::size_t, std::size_t>> rotation_hypotheses(
    const AntennaConfig& cfg) {
    cfg.validate();
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(cfg.o1 * cfg.o2);
    for (std::size_t q1 = 0; q1 < cfg.o1; ++q1)
        for (std::size_t q2 = 0; q2 < cfg.o2; ++q2) out.emplace_back(q1, q2);
    return out;
}

BeamVector rotated_beam(const AntennaConfig& cfg, std::size_t q1,
                        std::size_t q2, std::size_t x1, std::size_t x2) {
    if (q1 >= cfg.o1 || q2 >= cfg.o2)
        throw std::out_of_range("rotated_beam: rotation outside grid");
    if (x1 >= cfg.n1 || x2 >= cfg.n2)
        throw std::out_of_range("rotated_beam: sub-grid position outside grid");
    return dft_beam(cfg, cfg.o1 * x1 + q1, cfg.o2 * x2 + q2);
}

}  // namespace nrcb
