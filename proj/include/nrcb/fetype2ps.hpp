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

// Further Enhanced Type II Port Selection (R17). The gNB derives wideband
// spatial-frequency precoders from uplink estimates (partial angle/delay
// reciprocity), beamforms one CSI-RS port pair per precoder, and the UE
// reports a binary port choice plus angle-delay quantized coefficients with
// at most two layer-common frequency bins.

namespace nrcb {

enum class PortMode { DFT_BASED, EIGEN_BASED };

// One wideband precoder per port pair, shared by both polarizations. The
// pair's per-subband spatial vector lives on the n_ap/2 antennas of one
// polarization; pair j feeds ports j (pol 0) and n_pairs + j (pol 1).
struct PortPrecoders {
    std::size_t per_pol = 0;  // spatial dimension per polarization
    std::size_t n_3 = 0;
    std::size_t n_pairs = 0;
    std::vector<cplx> data;   // (pair, t) spatial vector contiguous

    static PortPrecoders identity(std::size_t per_pol, std::size_t n_3);

    cplx* vec(std::size_t pair, std::size_t t) {
        return data.data() + (pair * n_3 + t) * per_pol;
    }
    const cplx* vec(std::size_t pair, std::size_t t) const {
        return data.data() + (pair * n_3 + t) * per_pol;
    }
};

// Port precoders from the uplink channel. DFT_BASED ranks joint
// (beam, delay) bins by uplink energy; EIGEN_BASED takes the principal
// directions of the joint spatial-frequency sample covariance and pads any
// remaining pairs with energy-ranked DFT bins orthogonalized against them.
// Each pair is normalized to average unit per-subband norm.
PortPrecoders gnb_port_precoders(const ChannelRealization& ul_channel,
                                 const AntennaConfig& cfg, std::size_t k_pairs,
                                 PortMode mode);

// Channel the UE measures on the beamformed CSI-RS:
// H_eff[r, p, t] = sum_e H_dl[r, pol(p)*P + e, t] * port_vec(pair(p), t)[e]
ChannelRealization effective_port_channel(const ChannelRealization& dl,
                                          const PortPrecoders& ports);

struct FeParams {
    Rational alpha{1, 4};   // ratio of selected port pairs
    std::size_t m = 1;      // frequency basis count, 1 or 2
    std::size_t n_big = 2;  // overhead-formula branch N in {2, 4}
    std::size_t n_3 = 1;
    std::size_t n_ports = 0;  // total CSI-RS ports

    // selected pairs: alpha * n_ports / 2 (must be integral, at most 6)
    std::size_t k_pairs() const {
        return alpha.num * (n_ports / 2) / alpha.den;
    }
    void validate() const;
};

struct PmiFeType2PS {
    std::uint64_t port_choice = 0;  // comb code over C(n_ports/2, k_pairs)
    // layer-common frequency bins: n3[0] = 0 always; for m = 2 the nonzero
    // bin n3[1] is what indicator i16 carries
    std::vector<std::size_t> n3;
    // per layer over flat (i, f) positions (i*m + f), i in [0, 2*k_pairs)
    std::vector<std::vector<std::uint8_t>> i17;
    std::vector<std::size_t> i18;  // per layer strongest flat position
    std::vector<std::array<std::size_t, 2>> i23;
    std::vector<std::vector<std::size_t>> i24;
    std::vector<std::vector<std::size_t>> i25;

    bool operator==(const PmiFeType2PS&) const = default;
};

PmiFeType2PS encode_fetype2ps(const ChannelRealization& effective_channel,
                              const FeParams& params, std::size_t rank,
                              std::size_t n_psk = 4);

// Antenna-domain precoder: selected port precoders weighted by the
// quantized coefficients and the layer-common frequency basis.
Precoder decode_fetype2ps(const PmiFeType2PS& pmi, const PortPrecoders& ports,
                          const FeParams& params, std::size_t rank,
                          std::size_t n_psk = 4);

std::size_t fetype2ps_m_nz(const PmiFeType2PS& pmi);

// Antenna-domain composition of a port-domain precoder (rows ordered
// pol 0 pairs then pol 1 pairs, as the port-selection decoders emit).
Precoder apply_port_precoding(const PortPrecoders& ports,
                              const Precoder& port_domain);

}  // namespace nrcb
