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
#include <cstdint>
#include <utility>
#include <vector>

// Type II codebook: L oversampled-DFT beams shared by both polarizations,
// 3-bit wideband amplitudes, per-subband N-PSK phases and an optional 1-bit
// subband amplitude. The per-layer strongest coefficient is never reported;
// the gNB reconstructs it as full amplitude with phase zero.

namespace nrcb {

struct Type2Config {
    std::size_t l_beams = 4;          // L in {2, 3, 4}
    std::size_t rank = 1;             // up to 2
    bool subband_amplitude = false;   // I_s
    std::size_t n_psk = 8;            // {4, 8}
    std::size_t n_3 = 1;

    void validate(const AntennaConfig& cfg) const;
};

struct PmiType2 {
    std::size_t q1 = 0, q2 = 0;      // rotation
    std::uint64_t i12 = 0;           // combinatorial beam choice
    std::vector<std::size_t> i13;    // per layer: strongest beam in [0, 2L)
    // per layer: 2L wideband amplitude indices k1 (i13 position fixed to 7)
    std::vector<std::vector<std::size_t>> i14;
    // per layer: n_3 x 2L phase indices, subband-major (t*2L + i); positions
    // that are not reported are zero
    std::vector<std::vector<std::size_t>> i21;
    // per layer: n_3 x 2L subband amplitude bits, only when I_s = 1;
    // unreported positions are 1
    std::vector<std::vector<std::size_t>> i22;

    bool operator==(const PmiType2&) const = default;
};

struct CompressedReport {
    // per layer: count of nonzero wideband amplitudes (strongest included)
    std::vector<std::size_t> m_nz;
    // per layer: count of reported coefficients phase-quantized at the
    // configured n_psk; the remaining reported ones use 4-PSK
    std::vector<std::size_t> m_vr;
    // (layer, beam) positions never transmitted; contains each layer's
    // strongest beam, reconstructed as (k1 = 7, phase 0)
    std::vector<std::pair<std::size_t, std::size_t>> omitted;
};

// Beam selection plus unquantized least-squares coefficients; the quantized
// encoder is this followed by quantize_type2(). Exposed so the unquantized
// reconstruction path can be exercised directly.
struct Type2Analysis {
    std::size_t q1 = 0, q2 = 0;
    std::vector<std::size_t> beams;  // L sorted sub-grid indices
    std::size_t rank = 0;
    std::size_t n_3 = 0;
    // raw(l, t, i): coefficient of beam i (i < L: pol 0, else pol 1)
    std::vector<cplx> raw;
    cplx& at(std::size_t l, std::size_t t, std::size_t i) {
        return raw[(l * n_3 + t) * 2 * beams.size() + i];
    }
    cplx at(std::size_t l, std::size_t t, std::size_t i) const {
        return raw[(l * n_3 + t) * 2 * beams.size() + i];
    }
};

Type2Analysis analyze_type2(const ChannelRealization& channel,
                            const AntennaConfig& cfg, const Type2Config& c);

// Rotation search, top-L beam choice and least-squares projection; shared
// with the enhanced codebook, whose L may also be 6.
Type2Analysis project_onto_best_beams(const ChannelRealization& channel,
                                      const AntennaConfig& cfg,
                                      std::size_t l_beams, std::size_t rank);

std::pair<PmiType2, CompressedReport> quantize_type2(const Type2Analysis& an,
                                                     const AntennaConfig& cfg,
                                                     const Type2Config& c);

std::pair<PmiType2, CompressedReport> encode_type2(
    const ChannelRealization& channel, const AntennaConfig& cfg,
    const Type2Config& c);

// Reported beams (nonzero wideband amplitude, strongest excluded) and the
// subset phase-quantized at the configured n_psk; derivable from the
// wideband amplitudes alone, which is what the payload parser relies on.
void type2_report_sets(const std::vector<std::size_t>& k1,
                       std::size_t strongest,
                       std::vector<std::size_t>& reported,
                       std::vector<bool>& full_res);

Precoder decode_type2(const PmiType2& pmi, const AntennaConfig& cfg,
                      const Type2Config& c);

// Unquantized reconstruction from raw coefficients (test/report path).
Precoder reconstruct_type2_raw(const Type2Analysis& an, const AntennaConfig& cfg);

// ---- Port selection variant -------------------------------------------
// The L selection vectors are one-hot over the n_ap/2 ports of each
// polarization at positions q(i) = i11*d + i.

struct PmiType2PS {
    std::size_t i11 = 0;
    std::vector<std::size_t> i13;
    std::vector<std::vector<std::size_t>> i14;
    std::vector<std::vector<std::size_t>> i21;
    std::vector<std::vector<std::size_t>> i22;

    bool operator==(const PmiType2PS&) const = default;
};

struct Type2PsConfig {
    std::size_t l_beams = 4;
    std::size_t rank = 1;
    bool subband_amplitude = false;
    std::size_t n_psk = 8;
    std::size_t n_3 = 1;
    std::size_t d = 1;        // port sampling in {1,2,3,4}
    std::size_t n_ports = 0;  // total CSI-RS ports (N_AP)

    std::size_t i11_range() const {  // ceil(n_ports / (2d))
        return (n_ports / 2 + d - 1) / d;
    }
    void validate() const;
};

std::vector<std::size_t> selected_ports(const Type2PsConfig& c, std::size_t i11);

std::pair<PmiType2PS, CompressedReport> encode_type2_ps(
    const ChannelRealization& port_channel, const Type2PsConfig& c);

// Port-domain precoder (rows = CSI-RS ports). Composition with the gNB's
// per-port beamforming happens outside via apply_port_precoding().
Precoder decode_type2_ps(const PmiType2PS& pmi, const Type2PsConfig& c);

}  // namespace nrcb
