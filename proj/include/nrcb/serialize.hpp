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
#include "nrcb/etype2.hpp"
#include "nrcb/fetype2ps.hpp"
#include "nrcb/type1.hpp"
#include "nrcb/type2.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

// Canonical PMI payloads. Fields are packed big-endian, MSB first, in the
// order they appear in each PMI struct; every field takes ceil(log2(range))
// bits for its configured range and bitmaps are emitted verbatim. Values
// the gNB reconstructs implicitly (each layer's strongest coefficient, the
// pinned polarization reference, zero amplitudes outside bitmaps) are never
// transmitted. Parsing the payload under the same configuration reproduces
// the canonical PMI struct exactly.

namespace nrcb {

struct Payload {
    std::vector<std::uint8_t> bytes;
    std::size_t bits = 0;

    bool operator==(const Payload&) const = default;
};

Payload serialize_pmi(const PmiType1SP& pmi, const AntennaConfig& cfg,
                      std::size_t rank, std::size_t n_3);
PmiType1SP parse_type1_sp(const Payload& p, const AntennaConfig& cfg,
                          std::size_t rank, std::size_t n_3);

Payload serialize_pmi(const PmiType1MP& pmi, const AntennaConfig& cfg,
                      std::size_t rank, std::size_t c_m, std::size_t n_3);
PmiType1MP parse_type1_mp(const Payload& p, const AntennaConfig& cfg,
                          std::size_t rank, std::size_t c_m, std::size_t n_3);

Payload serialize_pmi(const PmiType2& pmi, const AntennaConfig& cfg,
                      const Type2Config& c);
PmiType2 parse_type2(const Payload& p, const AntennaConfig& cfg,
                     const Type2Config& c);

Payload serialize_pmi(const PmiType2PS& pmi, const Type2PsConfig& c);
PmiType2PS parse_type2_ps(const Payload& p, const Type2PsConfig& c);

Payload serialize_pmi(const PmiEType2& pmi, const AntennaConfig& cfg,
                      const EType2Params& params, std::size_t rank,
                      std::size_t n_psk);
PmiEType2 parse_etype2(const Payload& p, const AntennaConfig& cfg,
                       const EType2Params& params, std::size_t rank,
                       std::size_t n_psk);

Payload serialize_pmi(const PmiEType2PS& pmi, const EType2PsConfig& c,
                      std::size_t rank, std::size_t n_psk);
PmiEType2PS parse_etype2_ps(const Payload& p, const EType2PsConfig& c,
                            std::size_t rank, std::size_t n_psk);

Payload serialize_pmi(const PmiFeType2PS& pmi, const FeParams& params,
                      std::size_t rank, std::size_t n_psk);
PmiFeType2PS parse_fetype2ps(const Payload& p, const FeParams& params,
                             std::size_t rank, std::size_t n_psk);

}  // namespace nrcb
