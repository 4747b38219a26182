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
#include "nrcb/rational.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

// Enhanced Type II: the per-subband beam coefficients of Type II are
// compressed along frequency with M_v IDFT basis vectors (delay bins). A
// bitmap marks which (beam, delay) coefficients are reported; amplitudes use
// a 4-bit per-polarization reference plus 3 bits per coefficient.

namespace nrcb {

struct EType2Params {
    std::size_t l_beams = 4;   // L in {2, 4, 6}
    Rational p_v{1, 4};        // {1/4, 1/8}
    Rational beta{1, 2};       // {1/4, 1/2, 3/4}
    std::size_t r = 1;         // {1, 2}
    std::size_t n_3 = 1;

    std::size_t m_v() const { return p_v.ceil_mul(n_3, r); }
    // report budget: floor(2 * L * M_v * rank * beta)
    std::size_t budget(std::size_t rank) const {
        return beta.floor_mul(2 * l_beams * m_v() * rank);
    }
    void validate() const;  // against the supported (L, p_v, beta) table
};

struct PmiEType2 {
    std::size_t q1 = 0, q2 = 0;
    std::uint64_t i12 = 0;
    // per layer: m_v distinct delay bins, entry 0 is 0 after remapping
    std::vector<std::vector<std::size_t>> n3;
    // per layer: bitmap over (beam, delay) positions, flat index i*m_v + f
    std::vector<std::vector<std::uint8_t>> i17;
    // per layer: strongest beam index in [0, 2L); its delay is bin 0
    std::vector<std::size_t> i18;
    // per layer: 4-bit wideband amplitude per polarization; the strongest
    // coefficient's polarization is pinned to 15 and not transmitted
    std::vector<std::array<std::size_t, 2>> i23;
    // per layer: 3-bit amplitudes / N-PSK phases at bitmap positions
    // (flat, zeros where the bitmap is unset)
    std::vector<std::vector<std::size_t>> i24;
    std::vector<std::vector<std::size_t>> i25;

    bool operator==(const PmiEType2&) const = default;
};

// delay-domain basis: column f has entries exp(j*2*pi*t*n3[f]/n_3)
std::vector<cplx> fd_basis(std::size_t n_3, const std::vector<std::size_t>& n3);

// shift every delay by -n3[f_star] mod n_3 and rotate the sequence so the
// f_star entry lands at index 0
std::vector<std::size_t> remap_fd(const std::vector<std::size_t>& n3,
                                  std::size_t f_star, std::size_t n_3);

// Beam/bin selection plus unquantized delay-domain coefficients.
struct EType2Analysis {
    std::size_t q1 = 0, q2 = 0;
    std::vector<std::size_t> beams;              // L sorted sub-grid indices
    std::size_t rank = 0;
    std::size_t m = 0;                           // m_v
    std::vector<std::vector<std::size_t>> n3;    // per layer, remapped
    std::vector<std::size_t> strongest;          // per layer: flat i*m + f
    std::vector<std::uint8_t> retained;          // per layer x (2L*m) bitmap
    std::vector<cplx> ctilde;                    // per layer x (2L*m), all raw
    cplx& at(std::size_t l, std::size_t i, std::size_t f) {
        return ctilde[(l * 2 * beams.size() + i) * m + f];
    }
    cplx at(std::size_t l, std::size_t i, std::size_t f) const {
        return ctilde[(l * 2 * beams.size() + i) * m + f];
    }
};

EType2Analysis analyze_etype2(const ChannelRealization& channel,
                              const AntennaConfig& cfg,
                              const EType2Params& params, std::size_t rank);

PmiEType2 quantize_etype2(const EType2Analysis& an, const AntennaConfig& cfg,
                          const EType2Params& params, std::size_t n_psk);

PmiEType2 encode_etype2(const ChannelRealization& channel,
                        const AntennaConfig& cfg, const EType2Params& params,
                        std::size_t rank, std::size_t n_psk = 4);

Precoder decode_etype2(const PmiEType2& pmi, const AntennaConfig& cfg,
                       const EType2Params& params, std::size_t rank,
                       std::size_t n_psk = 4);

// Unquantized reconstruction from all selected-bin coefficients (ignores
// the report budget); used by the exact-recovery and remap-invariance paths.
Precoder reconstruct_etype2_raw(const EType2Analysis& an,
                                const AntennaConfig& cfg,
                                const EType2Params& params);

// total bitmap population over layers (M_nz)
std::size_t etype2_m_nz(const PmiEType2& pmi);

// ---- Port selection variant -------------------------------------------

struct PmiEType2PS {
    std::size_t i11 = 0;
    std::vector<std::vector<std::size_t>> n3;
    std::vector<std::vector<std::uint8_t>> i17;
    std::vector<std::size_t> i18;
    std::vector<std::array<std::size_t, 2>> i23;
    std::vector<std::vector<std::size_t>> i24;
    std::vector<std::vector<std::size_t>> i25;

    bool operator==(const PmiEType2PS&) const = default;
};

struct EType2PsConfig {
    EType2Params params;      // l_beams restricted to {2, 4}
    std::size_t d = 1;        // port sampling in {1,2,3,4}
    std::size_t n_ports = 0;  // total CSI-RS ports

    std::size_t i11_range() const { return (n_ports / 2 + d - 1) / d; }
    void validate() const;
};

std::vector<std::size_t> etype2_ps_ports(const EType2PsConfig& c,
                                         std::size_t i11);

PmiEType2PS encode_etype2_ps(const ChannelRealization& port_channel,
                             const EType2PsConfig& c, std::size_t rank,
                             std::size_t n_psk = 4);

// Port-domain precoder (rows = CSI-RS ports).
Precoder decode_etype2_ps(const PmiEType2PS& pmi, const EType2PsConfig& c,
                          std::size_t rank, std::size_t n_psk = 4);

std::size_t etype2_m_nz(const PmiEType2PS& pmi);

namespace detail {

// Shared angle-delay coefficient quantization: REF4BIT polarization
// references with the stronger polarization pinned to 15, SB3BIT
// amplitudes and N-PSK phases relative to the strongest coefficient.
struct DelayQuant {
    std::array<std::size_t, 2> ref;
    std::vector<std::size_t> amps;
    std::vector<std::size_t> phases;
};
DelayQuant quantize_delay_grid(const cplx* ctilde, std::size_t two_l,
                               std::size_t m, const std::uint8_t* retained,
                               std::size_t strongest, std::size_t n_psk);

}  // namespace detail

}  // namespace nrcb
