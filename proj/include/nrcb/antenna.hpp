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

#include <cstddef>
#include <stdexcept>

namespace nrcb {

// Dual-polarized uniform planar array at the gNB. Ports are ordered
// polarization-major, then panel, then element, with the horizontal element
// index running fastest: port = pol*(ng*n1*n2) + panel*(n1*n2) + q*n1 + p.
struct AntennaConfig {
    std::size_t n1 = 1;  // horizontal elements per polarization and panel
    std::size_t n2 = 1;  // vertical elements
    std::size_t o1 = 1;  // horizontal oversampling
    std::size_t o2 = 1;  // vertical oversampling
    std::size_t ng = 1;  // antenna panels

    std::size_t elements_per_panel() const { return n1 * n2; }
    std::size_t ports_per_pol() const { return ng * n1 * n2; }
    std::size_t n_ap() const { return 2 * ng * n1 * n2; }

    void validate() const {
        if (n1 == 0 || n2 == 0 || ng == 0)
            throw std::invalid_argument("AntennaConfig: zero dimension");
        const bool ok = (o1 == 4 && o2 == 4) || (o1 == 4 && o2 == 1) ||
                        (o1 == 1 && o2 == 1);
        if (!ok)
            throw std::invalid_argument(
                "AntennaConfig: (o1,o2) must be (4,4), (4,1) or (1,1)");
    }
};

}  // namespace nrcb
