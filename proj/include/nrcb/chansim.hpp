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
#include "nrcb/fetype2ps.hpp"
#include "nrcb/overhead.hpp"
#include "nrcb/precoder.hpp"
#include "nrcb/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Desk-scale MU-MIMO downlink evaluation: per drop, every UE feeds back its
// PMI, the gNB rebuilds per-user rank-1 precoders and regularized
// zero-forcing (regularizer K/SNR) separates the users per subband. Each
// drop derives its own random state from (seed, drop index), so results do
// not depend on evaluation order.

namespace nrcb {

// one codebook configuration under evaluation
struct EvalConfig {
    CodebookKind kind = CodebookKind::TYPE1_SP;
    bool genie = false;  // ideal CSI reference instead of a codebook
    AntennaConfig cfg;
    std::size_t n_3 = 16;
    std::size_t rank = 1;  // MU loop reconstructs rank-1 precoders
    // multi-beam parameters
    std::size_t l_beams = 4;
    bool subband_amplitude = true;
    std::size_t n_psk = 8;
    Rational p_v{1, 4};
    Rational beta{1, 2};
    std::size_t r_cfg = 1;
    // port selection parameters
    std::size_t d = 1;
    Rational alpha{1, 4};
    std::size_t m = 1;
    std::size_t n_big = 2;
    PortMode port_mode = PortMode::EIGEN_BASED;
    // Type I multi-panel mode
    std::size_t c_m = 1;

    std::string label() const;
};

struct SeResult {
    double mean_se = 0.0;  // bits/s/Hz per user, averaged over everything
    double ci95 = 0.0;     // normal-approximation half width over drops
    double overhead_bits = 0.0;     // mean payload bits per report
    double indicator_count = 0.0;   // mean table count per report
    std::size_t drops = 0;
};

// deterministic per-drop channel set for K users
std::vector<ChannelRealization> drop_channels(const AntennaConfig& cfg,
                                              std::size_t users,
                                              std::size_t n_rx,
                                              std::size_t n_paths,
                                              std::size_t n_3,
                                              std::uint64_t seed,
                                              std::size_t drop);

// per-user reconstructed precoders plus report costs for one drop
struct DropReports {
    std::vector<Precoder> precoders;  // one rank-1 precoder per user
    std::size_t total_bits = 0;
    std::size_t total_indicators = 0;
};
DropReports codebook_precoders(const std::vector<ChannelRealization>& users,
                               const EvalConfig& ec);

// exact per-subband dominant directions (unquantized, full CSI)
std::vector<Precoder> genie_precoders(
    const std::vector<ChannelRealization>& users);

// sum spectral efficiency of one drop under RZF with the given precoders
double drop_se(const std::vector<Precoder>& reported,
               const std::vector<ChannelRealization>& users, double snr_db);

// single-drop evaluation of one configuration on the given channels
SeResult evaluate_se(const std::vector<ChannelRealization>& users,
                     const EvalConfig& ec, double snr_db);

struct SweepRow {
    EvalConfig config;
    SeResult result;
};

// every configuration evaluated on the same seeded channel ensemble
std::vector<SweepRow> sweep(const std::vector<EvalConfig>& grid,
                            std::size_t users, std::size_t n_rx,
                            std::size_t n_paths, double snr_db,
                            std::size_t drops, std::uint64_t seed);

// CSV rendering of sweep rows (schema documented in the README)
std::string sweep_csv(const std::vector<SweepRow>& rows, std::size_t users,
                      double snr_db, std::size_t drops);

}  // namespace nrcb
