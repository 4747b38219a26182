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
#include "nrcb/precoder.hpp"
#include "nrcb/rng.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

// Wideband geometric multipath channel. Each path has an azimuth/zenith
// direction, a delay in subband-rate units and a nominal complex gain; the
// realized per-receive-antenna, per-polarization path coefficients are
// i.i.d. CN(0,1) scaled by the nominal gain. Entry (r, a, t):
//   H[r, a, t] = sum_p gamma(p, r, pol(a)) * steer(a; az_p, zen_p)
//                * exp(-j*2*pi*t*delay_p / n_3)

namespace nrcb {

struct Path {
    double azimuth = 0.0;  // radians
    double zenith = 0.0;   // radians
    double delay = 0.0;    // in [0, n_3)
    cplx gain{1.0, 0.0};   // nominal gain; sum of |gain|^2 is 1 per set
};

struct PathSet {
    std::vector<Path> paths;

    // Scale gains so total nominal power is 1; throws on empty/zero power.
    void normalize_power();
};

// Paths drawn uniformly over a 120 degree azimuth sector, zenith in
// (60, 120) degrees, delays uniform in [0, n_3/4), complex Gaussian gains
// normalized to unit total power.
PathSet random_pathset(Rng& rng, std::size_t n_paths, std::size_t n_3);

struct ChannelRealization {
    std::size_t n_rx = 0;
    std::size_t n_ap = 0;
    std::size_t n_3 = 0;
    std::vector<cplx> data;  // (t, r, a) at (t*n_rx + r)*n_ap + a
    AntennaConfig cfg;       // array geometry metadata
    PathSet paths;           // generation metadata (empty if hand-built)
    std::uint64_t seed = 0;

    static ChannelRealization zeros(std::size_t n_rx, std::size_t n_ap,
                                    std::size_t n_3) {
        ChannelRealization h;
        h.n_rx = n_rx;
        h.n_ap = n_ap;
        h.n_3 = n_3;
        h.data.assign(n_rx * n_ap * n_3, cplx{0.0, 0.0});
        return h;
    }

    cplx& at(std::size_t t, std::size_t r, std::size_t a) {
        return data[(t * n_rx + r) * n_ap + a];
    }
    cplx at(std::size_t t, std::size_t r, std::size_t a) const {
        return data[(t * n_rx + r) * n_ap + a];
    }
    const cplx* row(std::size_t t, std::size_t r) const {
        return data.data() + (t * n_rx + r) * n_ap;
    }
};

// Spatial frequencies seen by the UPA for a path direction, half-wavelength
// spacing: nu1 = sin(zen)*sin(az)/2 (horizontal), nu2 = cos(zen)/2 (vertical).
// A beam (m1, m2) corresponds to nu1 = m1/(o1*n1) mod 1, nu2 = m2/(o2*n2).
void path_spatial_freqs(const Path& p, double& nu1, double& nu2);

// Azimuth/zenith that land exactly on grid beam (m1, m2) with m2 mapped to
// a zenith near broadside; m2 must satisfy |nu2| < 1/2 after wrapping.
Path grid_path(const AntennaConfig& cfg, std::size_t m1, std::size_t m2,
               double delay, cplx gain);

// Deterministic channel realization for (paths, seed).
ChannelRealization gen_channel(const PathSet& paths, const AntennaConfig& cfg,
                               std::size_t n_rx, std::size_t n_3,
                               std::uint64_t seed);

// Uplink realization sharing the downlink's angles and delays: path phases
// are redrawn and nominal gain magnitudes perturbed by at most 1 dB.
// Throws std::invalid_argument if `dl` carries no path metadata.
ChannelRealization gen_ul_from_dl(const ChannelRealization& dl,
                                  std::uint64_t seed);

// Per-subband dominant channel directions: column (t, l) is the l-th right
// singular vector of H_t scaled by its singular value (or unit norm when
// `unit_norm`). Missing directions (rank < layers) come back as zeros.
Precoder csi_targets(const ChannelRealization& h, std::size_t layers,
                     bool unit_norm = false);

}  // namespace nrcb
