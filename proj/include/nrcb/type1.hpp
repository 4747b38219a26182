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
#include "nrcb/channel.hpp"
#include "nrcb/precoder.hpp"

#include <cstddef>
#include <vector>

// Type I codebooks: a single wideband 2D-DFT beam plus per-subband
// co-phasing. Layers 1..4 are supported; ranks 3 and 4 pair the selected
// beam with its o1-shifted neighbor so the columns stay orthogonal, and the
// two polarizations of layer pairs use opposite co-phase signs.

namespace nrcb {

struct PmiType1SP {
    std::size_t i11 = 0;          // horizontal beam index m1 in [0, o1*n1)
    std::size_t i12 = 0;          // vertical beam index m2 in [0, o2*n2)
    std::vector<std::size_t> i2;  // per-subband co-phase n (2 bits if rank 1,
                                  // else 1 bit)

    bool operator==(const PmiType1SP&) const = default;
};

// Per-subband co-phase indices of the multi-panel report. Mode 1 uses only
// n0; mode 2 adds the per-panel subband co-phases n1/n2 (one per
// polarization).
struct Type1MpSubband {
    std::size_t n0 = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;

    bool operator==(const Type1MpSubband&) const = default;
};

struct PmiType1MP {
    std::size_t i11 = 0;
    std::size_t i12 = 0;
    std::vector<std::size_t> i14;      // wideband inter-panel co-phases:
                                       // mode 1: ng-1 entries, mode 2: 2
    std::vector<Type1MpSubband> i2;    // one entry per subband

    bool operator==(const PmiType1MP&) const = default;
};

Precoder decode_type1_sp(const PmiType1SP& pmi, const AntennaConfig& cfg,
                         std::size_t rank);

// Exhaustive search over the full oversampled grid, then the best co-phase
// per subband; deterministic lexicographic (m1, m2, n) tie-break.
PmiType1SP encode_type1_sp(const ChannelRealization& channel,
                           const AntennaConfig& cfg, std::size_t rank);

Precoder decode_type1_mp(const PmiType1MP& pmi, const AntennaConfig& cfg,
                         std::size_t rank, std::size_t c_m);

PmiType1MP encode_type1_mp(const ChannelRealization& channel,
                           const AntennaConfig& cfg, std::size_t rank,
                           std::size_t c_m);

}  // namespace nrcb
