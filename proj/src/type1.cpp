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

#include "nrcb/type1.hpp"

#include "nrcb/beamgrid.hpp"
#include "nrcb/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nrcb {
namespace {

struct Layer {
    std::size_t beam;  // 0 = selected beam, 1 = o1-shifted neighbor
    double sign;       // sign of the polarization co-phase
};

std::vector<Layer> layer_plan(std::size_t rank) {
    switch (rank) {
        case 1: return {{0, 1.0}};
        case 2: return {{0, 1.0}, {0, -1.0}};
        case 3: return {{0, 1.0}, {1, 1.0}, {0, -1.0}};
        case 4: return {{0, 1.0}, {1, 1.0}, {0, -1.0}, {1, -1.0}};
        default:
            throw std::invalid_argument("type1: rank must be 1..4");
    }
}

std::size_t cophase_range(std::size_t rank) { return rank == 1 ? 4 : 2; }

cplx phi(std::size_t n) {  // e^{j*pi*n/2}
    const double ph = std::numbers::pi * static_cast<double>(n) / 2.0;
    return {std::cos(ph), std::sin(ph)};
}

cplx panel_a(std::size_t p) {  // e^{j*pi/4} e^{j*pi*p/2}
    const double ph = std::numbers::pi * (0.25 + static_cast<double>(p) / 2.0);
    return {std::cos(ph), std::sin(ph)};
}

cplx panel_b(std::size_t n) {  // e^{-j*pi/4} e^{j*pi*n/2}
    const double ph = std::numbers::pi * (-0.25 + static_cast<double>(n) / 2.0);
    return {std::cos(ph), std::sin(ph)};
}

void check_rank(const AntennaConfig& cfg, std::size_t rank) {
    if (rank == 0 || rank > 4)
        throw std::invalid_argument("type1: rank must be 1..4");
    if (rank >= 3 && cfg.n1 < 2)
        throw std::invalid_argument("type1: rank 3..4 needs n1 >= 2");
}

// selected beam and, for ranks 3..4, its orthogonal o1-shifted neighbor
std::vector<BeamVector> plan_beams(const AntennaConfig& cfg, std::size_t m1,
                                   std::size_t m2, std::size_t rank) {
    std::vector<BeamVector> beams;
    beams.push_back(dft_beam(cfg, m1, m2));
    if (rank >= 3)
        beams.push_back(dft_beam(cfg, (m1 + cfg.o1) % (cfg.o1 * cfg.n1), m2));
    return beams;
}

}  // namespace

Precoder decode_type1_sp(const PmiType1SP& pmi, const AntennaConfig& cfg,
                         std::size_t rank) {
    cfg.validate();
    if (cfg.ng != 1)
        throw std::invalid_argument("decode_type1_sp: single panel only");
    check_rank(cfg, rank);
    if (pmi.i2.empty())
        throw std::invalid_argument("decode_type1_sp: empty subband report");
    for (std::size_t n : pmi.i2)
        if (n >= cophase_range(rank))
            throw std::out_of_range("decode_type1_sp: co-phase index");

    const auto plan = layer_plan(rank);
    const auto beams = plan_beams(cfg, pmi.i11, pmi.i12, rank);
    const std::size_t pp = cfg.ports_per_pol();
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_ap()));

    Precoder w = Precoder::zeros(cfg.n_ap(), rank, pmi.i2.size());
    for (std::size_t t = 0; t < pmi.i2.size(); ++t) {
        const cplx co = phi(pmi.i2[t]);
        for (std::size_t l = 0; l < rank; ++l) {
            const auto& b = beams[plan[l].beam];
            cplx* col = w.col(t, l);
            for (std::size_t e = 0; e < pp; ++e) {
                col[e] = scale * b.entries[e];
                col[pp + e] = scale * plan[l].sign * co * b.entries[e];
            }
        }
    }
    normalize_columns(w);
    return w;
}

PmiType1SP encode_type1_sp(const ChannelRealization& channel,
                           const AntennaConfig& cfg, std::size_t rank) {
    cfg.validate();
    if (cfg.ng != 1)
        throw std::invalid_argument("encode_type1_sp: single panel only");
    check_rank(cfg, rank);
    if (channel.n_ap != cfg.n_ap() || channel.n_3 == 0)
        throw std::invalid_argument("encode_type1_sp: dimension mismatch");

    const auto plan = layer_plan(rank);
    const std::size_t pp = cfg.ports_per_pol();
    const std::size_t n_beams = plan.back().beam + 1;
    const std::size_t n_co = cophase_range(rank);

    PmiType1SP best;
    double best_metric = -1.0;
    std::vector<std::size_t> cur_n(channel.n_3);

    for (std::size_t m1 = 0; m1 < cfg.o1 * cfg.n1; ++m1) {
        for (std::size_t m2 = 0; m2 < cfg.o2 * cfg.n2; ++m2) {
            const auto beams = plan_beams(cfg, m1, m2, rank);
            double total = 0.0;
            for (std::size_t t = 0; t < channel.n_3; ++t) {
                // per-polarization projections of every row onto each beam
                std::vector<cplx> proj(channel.n_rx * n_beams * 2);
                for (std::size_t r = 0; r < channel.n_rx; ++r) {
                    const cplx* row = channel.row(t, r);
                    for (std::size_t b = 0; b < n_beams; ++b) {
                        proj[(r * n_beams + b) * 2 + 0] =
                            kernels::cdotu(row, beams[b].entries.data(), pp);
                        proj[(r * n_beams + b) * 2 + 1] = kernels::cdotu(
                            row + pp, beams[b].entries.data(), pp);
                    }
                }
                double sub_best = -1.0;
                std::size_t sub_n = 0;
                for (std::size_t n = 0; n < n_co; ++n) {
                    const cplx co = phi(n);
                    double m = 0.0;
                    for (std::size_t l = 0; l < rank; ++l) {
                        const std::size_t b = plan[l].beam;
                        for (std::size_t r = 0; r < channel.n_rx; ++r) {
                            const cplx v =
                                proj[(r * n_beams + b) * 2 + 0] +
                                plan[l].sign * co *
                                    proj[(r * n_beams + b) * 2 + 1];
                            m += std::norm(v);
                        }
                    }
                    if (m > sub_best) {
                        sub_best = m;
                        sub_n = n;
                    }
                }
                cur_n[t] = sub_n;
                total += sub_best;
            }
            if (total > best_metric) {
                best_metric = total;
                best.i11 = m1;
                best.i12 = m2;
                best.i2 = cur_n;
            }
        }
    }
    return best;
}

namespace {

void check_mp_config(const AntennaConfig& cfg, std::size_t rank,
                     std::size_t c_m) {
    cfg.validate();
    if (cfg.ng != 2 && cfg.ng != 4)
        throw std::invalid_argument("type1 multi-panel: ng must be 2 or 4");
    const std::size_t ap = cfg.n_ap();
    if (ap != 8 && ap != 16 && ap != 32)
        throw std::invalid_argument("type1 multi-panel: n_ap must be 8, 16 or 32");
    if (c_m != 1 && c_m != 2)
        throw std::invalid_argument("type1 multi-panel: codebook mode must be 1 or 2");
    if (c_m == 2 && cfg.ng != 2)
        throw std::invalid_argument("type1 multi-panel: mode 2 needs ng = 2");
    check_rank(cfg, rank);
}

std::size_t i14_size(const AntennaConfig& cfg, std::size_t c_m) {
    return c_m == 1 ? cfg.ng - 1 : 2;
}

}  // namespace

Precoder decode_type1_mp(const PmiType1MP& pmi, const AntennaConfig& cfg,
                         std::size_t rank, std::size_t c_m) {
    check_mp_config(cfg, rank, c_m);
    if (pmi.i14.size() != i14_size(cfg, c_m))
        throw std::invalid_argument("decode_type1_mp: i14 size");
    for (std::size_t p : pmi.i14)
        if (p >= 4) throw std::out_of_range("decode_type1_mp: i14 entry");
    if (pmi.i2.empty())
        throw std::invalid_argument("decode_type1_mp: empty subband report");
    for (const auto& sb : pmi.i2) {
        if (sb.n0 >= cophase_range(rank))
            throw std::out_of_range("decode_type1_mp: n0");
        if (c_m == 2 && (sb.n1 >= 4 || sb.n2 >= 4))
            throw std::out_of_range("decode_type1_mp: n1/n2");
    }

    const auto plan = layer_plan(rank);
    const auto beams = plan_beams(cfg, pmi.i11, pmi.i12, rank);
    const std::size_t ep = cfg.elements_per_panel();
    const std::size_t pp = cfg.ports_per_pol();
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_ap()));

    Precoder w = Precoder::zeros(cfg.n_ap(), rank, pmi.i2.size());
    for (std::size_t t = 0; t < pmi.i2.size(); ++t) {
        const auto& sb = pmi.i2[t];
        const cplx co = phi(sb.n0);
        // per-panel scales for each polarization
        std::vector<cplx> s0(cfg.ng, cplx{1.0, 0.0});
        std::vector<cplx> s1(cfg.ng, cplx{1.0, 0.0});
        if (c_m == 1) {
            for (std::size_t g = 1; g < cfg.ng; ++g) {
                s0[g] = panel_a(pmi.i14[g - 1]);
                s1[g] = s0[g];
            }
        } else {
            s0[1] = panel_a(pmi.i14[0]) * panel_b(sb.n1);
            s1[1] = panel_a(pmi.i14[1]) * panel_b(sb.n2);
        }
        for (std::size_t l = 0; l < rank; ++l) {
            const auto& b = beams[plan[l].beam];
            cplx* col = w.col(t, l);
            for (std::size_t g = 0; g < cfg.ng; ++g) {
                for (std::size_t e = 0; e < ep; ++e) {
                    col[g * ep + e] = scale * s0[g] * b.entries[e];
                    col[pp + g * ep + e] =
                        scale * plan[l].sign * co * s1[g] * b.entries[e];
                }
            }
        }
    }
    normalize_columns(w);
    return w;
}

PmiType1MP encode_type1_mp(const ChannelRealization& channel,
                           const AntennaConfig& cfg, std::size_t rank,
                           std::size_t c_m) {
    check_mp_config(cfg, rank, c_m);
    if (channel.n_ap != cfg.n_ap() || channel.n_3 == 0)
        throw std::invalid_argument("encode_type1_mp: dimension mismatch");

    const auto plan = layer_plan(rank);
    const std::size_t ep = cfg.elements_per_panel();
    const std::size_t pp = cfg.ports_per_pol();
    const std::size_t n_beams = plan.back().beam + 1;
    const std::size_t n_co = cophase_range(rank);
    const std::size_t wb = i14_size(cfg, c_m);
    std::size_t n_wb_combos = 1;
    for (std::size_t i = 0; i < wb; ++i) n_wb_combos *= 4;

    PmiType1MP best;
    double best_metric = -1.0;

    std::vector<std::size_t> digits(wb);
    std::vector<Type1MpSubband> cur(channel.n_3);

    for (std::size_t m1 = 0; m1 < cfg.o1 * cfg.n1; ++m1) {
        for (std::size_t m2 = 0; m2 < cfg.o2 * cfg.n2; ++m2) {
            const auto beams = plan_beams(cfg, m1, m2, rank);
            // proj(t, r, pol, g, b): per-panel projections
            std::vector<cplx> proj(channel.n_3 * channel.n_rx * 2 * cfg.ng *
                                   n_beams);
            auto pr = [&](std::size_t t, std::size_t r, std::size_t pol,
                          std::size_t g, std::size_t b) -> cplx& {
                return proj[(((t * channel.n_rx + r) * 2 + pol) * cfg.ng + g) *
                                n_beams +
                            b];
            };
            for (std::size_t t = 0; t < channel.n_3; ++t)
                for (std::size_t r = 0; r < channel.n_rx; ++r)
                    for (std::size_t pol = 0; pol < 2; ++pol)
                        for (std::size_t g = 0; g < cfg.ng; ++g)
                            for (std::size_t b = 0; b < n_beams; ++b)
                                pr(t, r, pol, g, b) = kernels::cdotu(
                                    channel.row(t, r) + pol * pp + g * ep,
                                    beams[b].entries.data(), ep);

            for (std::size_t combo = 0; combo < n_wb_combos; ++combo) {
                std::size_t rem = combo;
                for (std::size_t i = 0; i < wb; ++i) {
                    digits[i] = rem % 4;
                    rem /= 4;
                }
                double total = 0.0;
                for (std::size_t t = 0; t < channel.n_3; ++t) {
                    double sub_best = -1.0;
                    Type1MpSubband sub{};
                    const std::size_t n1_range = c_m == 2 ? 4 : 1;
                    const std::size_t n2_range = n1_range;
                    for (std::size_t n0 = 0; n0 < n_co; ++n0) {
                        const cplx co = phi(n0);
                        for (std::size_t n1 = 0; n1 < n1_range; ++n1) {
                            for (std::size_t n2 = 0; n2 < n2_range; ++n2) {
                                std::vector<cplx> s0(cfg.ng, cplx{1.0, 0.0});
                                std::vector<cplx> s1(cfg.ng, cplx{1.0, 0.0});
                                if (c_m == 1) {
                                    for (std::size_t g = 1; g < cfg.ng; ++g) {
                                        s0[g] = panel_a(digits[g - 1]);
                                        s1[g] = s0[g];
                                    }
                                } else {
                                    s0[1] = panel_a(digits[0]) * panel_b(n1);
                                    s1[1] = panel_a(digits[1]) * panel_b(n2);
                                }
                                double m = 0.0;
                                for (std::size_t l = 0; l < rank; ++l) {
                                    const std::size_t b = plan[l].beam;
                                    for (std::size_t r = 0; r < channel.n_rx;
                                         ++r) {
                                        cplx u0{0.0, 0.0}, u1{0.0, 0.0};
                                        for (std::size_t g = 0; g < cfg.ng;
                                             ++g) {
                                            u0 += s0[g] * pr(t, r, 0, g, b);
                                            u1 += s1[g] * pr(t, r, 1, g, b);
                                        }
                                        m += std::norm(u0 +
                                                       plan[l].sign * co * u1);
                                    }
                                }
                                if (m > sub_best) {
                                    sub_best = m;
                                    sub = Type1MpSubband{n0, n1, n2};
                                }
                            }
                        }
                    }
                    cur[t] = sub;
                    total += sub_best;
                }
                if (total > best_metric) {
                    best_metric = total;
                    best.i11 = m1;
                    best.i12 = m2;
                    best.i14.assign(digits.begin(), digits.end());
                    best.i2 = cur;
                }
            }
        }
    }
    return best;
}

}  // namespace nrcb
