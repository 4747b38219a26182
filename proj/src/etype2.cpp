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

#include "nrcb/etype2.hpp"

#include "nrcb/beamgrid.hpp"
#include "nrcb/kernels.hpp"
#include "nrcb/quantizers.hpp"
#include "nrcb/type2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace nrcb {

void EType2Params::validate() const {
    struct Combo {
        std::size_t l;
        Rational pv, b;
    };
    // supported compression configurations (L, p_v, beta)
    static const Combo table[] = {
        {2, {1, 8}, {1, 4}}, {2, {1, 4}, {1, 4}}, {2, {1, 4}, {1, 2}},
        {4, {1, 8}, {1, 4}}, {4, {1, 4}, {1, 4}}, {4, {1, 4}, {1, 2}},
        {4, {1, 4}, {3, 4}}, {6, {1, 4}, {1, 2}},
    };
    bool found = false;
    for (const auto& c : table)
        if (c.l == l_beams && c.pv == p_v && c.b == beta) found = true;
    if (!found)
        throw std::invalid_argument(
            "etype2: unsupported (L, p_v, beta) combination");
    if (r != 1 && r != 2) throw std::invalid_argument("etype2: R must be 1 or 2");
    if (n_3 == 0) throw std::invalid_argument("etype2: n_3 must be positive");
    if (m_v() > n_3) throw std::invalid_argument("etype2: m_v exceeds n_3");
}

std::vector<cplx> fd_basis(std::size_t n_3, const std::vector<std::size_t>& n3) {
    if (n_3 == 0) throw std::invalid_argument("fd_basis: n_3 must be positive");
    std::set<std::size_t> seen;
    for (const std::size_t b : n3) {
        if (b >= n_3) throw std::invalid_argument("fd_basis: bin out of range");
        if (!seen.insert(b).second)
            throw std::invalid_argument("fd_basis: duplicate bin");
    }
    std::vector<cplx> out(n_3 * n3.size());
    for (std::size_t f = 0; f < n3.size(); ++f)
        for (std::size_t t = 0; t < n_3; ++t) {
            const double ph = 2.0 * std::numbers::pi * static_cast<double>(t) *
                              static_cast<double>(n3[f]) /
                              static_cast<double>(n_3);
            out[f * n_3 + t] = cplx{std::cos(ph), std::sin(ph)};
        }
    return out;
}

std::vector<std::size_t> remap_fd(const std::vector<std::size_t>& n3,
                                  std::size_t f_star, std::size_t n_3) {
    if (f_star >= n3.size()) throw std::out_of_range("remap_fd: f_star");
    const std::size_t m = n3.size();
    const std::size_t pivot = n3[f_star];
    std::vector<std::size_t> out(m);
    for (std::size_t k = 0; k < m; ++k)
        out[k] = (n3[(k + f_star) % m] + n_3 - pivot) % n_3;
    return out;
}

namespace {

struct FdCompression {
    std::vector<std::vector<std::size_t>> n3;  // per layer, remapped
    std::vector<std::size_t> strongest;        // per layer, flat i*m + f
    std::vector<std::uint8_t> retained;        // per layer x (2L*m)
    std::vector<cplx> ctilde;                  // per layer x (2L*m)
};

// Delay-domain transform of the per-subband beam coefficients, per-layer
// greedy bin choice by energy, remap to the strongest bin and global
// top-magnitude retention under the report budget.
FdCompression fd_compress(const Type2Analysis& base, std::size_t two_l,
                          std::size_t n_3, std::size_t m, std::size_t budget) {
    const std::size_t rank = base.rank;
    FdCompression out;
    out.n3.resize(rank);
    out.strongest.resize(rank);
    out.retained.assign(rank * two_l * m, 0);
    out.ctilde.assign(rank * two_l * m, cplx{0.0, 0.0});

    // full IDFT along subbands, per layer and beam
    std::vector<cplx> series(n_3);
    std::vector<cplx> full(two_l * n_3);  // (i, b) for the current layer
    for (std::size_t l = 0; l < rank; ++l) {
        for (std::size_t i = 0; i < two_l; ++i) {
            for (std::size_t t = 0; t < n_3; ++t) series[t] = base.at(l, t, i);
            for (std::size_t b = 0; b < n_3; ++b) {
                cplx acc{0.0, 0.0};
                for (std::size_t t = 0; t < n_3; ++t) {
                    const double ph = -2.0 * std::numbers::pi *
                                      static_cast<double>(t * b) /
                                      static_cast<double>(n_3);
                    acc += series[t] * cplx{std::cos(ph), std::sin(ph)};
                }
                full[i * n_3 + b] = acc / static_cast<double>(n_3);
            }
        }
        // bin energies over all beams
        std::vector<double> energy(n_3, 0.0);
        for (std::size_t b = 0; b < n_3; ++b)
            for (std::size_t i = 0; i < two_l; ++i)
                energy[b] += std::norm(full[i * n_3 + b]);
        std::vector<std::size_t> order(n_3);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return energy[a] > energy[b];
                         });
        std::vector<std::size_t> bins(order.begin(), order.begin() + m);
        std::sort(bins.begin(), bins.end());

        // strongest coefficient over the selected bins
        std::size_t bi = 0, bf = 0;
        double bmag = -1.0;
        for (std::size_t i = 0; i < two_l; ++i)
            for (std::size_t f = 0; f < m; ++f) {
                const double mag = std::abs(full[i * n_3 + bins[f]]);
                if (mag > bmag) {
                    bmag = mag;
                    bi = i;
                    bf = f;
                }
            }
        out.n3[l] = remap_fd(bins, bf, n_3);
        out.strongest[l] = bi * m + 0;
        // coefficient columns follow the same cyclic rotation as the bins
        for (std::size_t i = 0; i < two_l; ++i)
            for (std::size_t f = 0; f < m; ++f)
                out.ctilde[(l * two_l + i) * m + f] =
                    full[i * n_3 + bins[(f + bf) % m]];
    }

    // per-layer strongest coefficients are always retained; the remaining
    // budget goes to the globally largest magnitudes
    for (std::size_t l = 0; l < rank; ++l)
        out.retained[l * two_l * m + out.strongest[l]] = 1;
    struct Cand {
        double mag;
        std::size_t pos;
    };
    std::vector<Cand> cands;
    for (std::size_t p = 0; p < out.ctilde.size(); ++p) {
        if (out.retained[p]) continue;
        const double mag = std::abs(out.ctilde[p]);
        if (mag > 0.0) cands.push_back({mag, p});
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.mag > b.mag; });
    const std::size_t extra = budget > rank ? budget - rank : 0;
    for (std::size_t k = 0; k < std::min(extra, cands.size()); ++k)
        out.retained[cands[k].pos] = 1;
    return out;
}

}  // namespace

namespace detail {

DelayQuant quantize_delay_grid(const cplx* ctilde, std::size_t two_l,
                               std::size_t m,
                               const std::uint8_t* retained,
                               std::size_t strongest, std::size_t n_psk) {
    const std::size_t l_beams = two_l / 2;
    const std::size_t total = two_l * m;
    DelayQuant out;
    out.amps.assign(total, 0);
    out.phases.assign(total, 0);

    const double s = std::abs(ctilde[strongest]);
    const std::size_t pol_star = (strongest / m) / l_beams;
    out.ref = {0, 0};
    out.ref[pol_star] = 15;

    // weaker polarization reference: its largest retained magnitude
    const std::size_t pol_other = 1 - pol_star;
    double other_max = 0.0;
    for (std::size_t p = 0; p < total; ++p)
        if (retained[p] && (p / m) / l_beams == pol_other)
            other_max = std::max(other_max, std::abs(ctilde[p]));
    if (s > 0.0 && other_max > 0.0)
        out.ref[pol_other] =
            quantize_amp(other_max / s, AmplitudeGrid::REF4BIT);

    const cplx pivot = ctilde[strongest];
    const cplx rot = s > 0.0 ? std::conj(pivot) / s : cplx{1.0, 0.0};
    const PskConfig psk{n_psk};
    const double p1[2] = {amp_value(out.ref[0], AmplitudeGrid::REF4BIT),
                          amp_value(out.ref[1], AmplitudeGrid::REF4BIT)};
    for (std::size_t p = 0; p < total; ++p) {
        if (!retained[p]) continue;
        const std::size_t pol = (p / m) / l_beams;
        const double denom = s * p1[pol];
        const double ratio = denom > 0.0 ? std::abs(ctilde[p]) / denom : 0.0;
        out.amps[p] = quantize_amp(ratio, AmplitudeGrid::SB3BIT);
        out.phases[p] = quantize_phase(ctilde[p] * rot, psk);
    }
    out.amps[strongest] = 7;
    out.phases[strongest] = 0;
    return out;
}

}  // namespace detail

namespace {

void check_psk_etype2(std::size_t n_psk) {
    if (n_psk != 4 && n_psk != 8 && n_psk != 16)
        throw std::invalid_argument("etype2: n_psk must be 4, 8 or 16");
}

}  // namespace

EType2Analysis analyze_etype2(const ChannelRealization& channel,
                              const AntennaConfig& cfg,
                              const EType2Params& params, std::size_t rank) {
    params.validate();
    if (rank == 0 || rank > 4)
        throw std::invalid_argument("etype2: rank must be 1..4");
    if (channel.n_3 != params.n_3)
        throw std::invalid_argument("analyze_etype2: subband count mismatch");

    const auto base =
        project_onto_best_beams(channel, cfg, params.l_beams, rank);
    const std::size_t two_l = 2 * params.l_beams;
    auto fd = fd_compress(base, two_l, params.n_3, params.m_v(),
                          params.budget(rank));

    EType2Analysis an;
    an.q1 = base.q1;
    an.q2 = base.q2;
    an.beams = base.beams;
    an.rank = rank;
    an.m = params.m_v();
    an.n3 = std::move(fd.n3);
    an.strongest = std::move(fd.strongest);
    an.retained = std::move(fd.retained);
    an.ctilde = std::move(fd.ctilde);
    return an;
}

PmiEType2 quantize_etype2(const EType2Analysis& an, const AntennaConfig& cfg,
                          const EType2Params& params, std::size_t n_psk) {
    check_psk_etype2(n_psk);
    const std::size_t two_l = 2 * params.l_beams;
    const std::size_t m = an.m;

    PmiEType2 pmi;
    pmi.q1 = an.q1;
    pmi.q2 = an.q2;
    pmi.i12 = comb_encode(an.beams, cfg.n1 * cfg.n2);
    pmi.n3 = an.n3;
    for (std::size_t l = 0; l < an.rank; ++l) {
        const cplx* ct = an.ctilde.data() + l * two_l * m;
        const std::uint8_t* ret = an.retained.data() + l * two_l * m;
        auto q = detail::quantize_delay_grid(ct, two_l, m, ret,
                                            an.strongest[l], n_psk);
        pmi.i17.emplace_back(ret, ret + two_l * m);
        pmi.i18.push_back(an.strongest[l] / m);
        pmi.i23.push_back(q.ref);
        pmi.i24.push_back(std::move(q.amps));
        pmi.i25.push_back(std::move(q.phases));
    }
    return pmi;
}

PmiEType2 encode_etype2(const ChannelRealization& channel,
                        const AntennaConfig& cfg, const EType2Params& params,
                        std::size_t rank, std::size_t n_psk) {
    return quantize_etype2(analyze_etype2(channel, cfg, params, rank), cfg,
                           params, n_psk);
}

namespace {

// shared validation + reconstruction over an abstract column basis:
// expand(i, coef, t, col) adds coef * basis_i to the subband column
template <typename Expand>
Precoder decode_delay_report(
    const std::vector<std::vector<std::size_t>>& n3,
    const std::vector<std::vector<std::uint8_t>>& i17,
    const std::vector<std::size_t>& i18,
    const std::vector<std::array<std::size_t, 2>>& i23,
    const std::vector<std::vector<std::size_t>>& i24,
    const std::vector<std::vector<std::size_t>>& i25, std::size_t rank,
    std::size_t two_l, std::size_t m, std::size_t n_3, std::size_t n_psk,
    std::size_t n_rows, Expand&& expand) {
    const std::size_t l_beams = two_l / 2;
    if (n3.size() != rank || i17.size() != rank || i18.size() != rank ||
        i23.size() != rank || i24.size() != rank || i25.size() != rank)
        throw std::invalid_argument("etype2 decode: per-layer field count");

    const PskConfig psk{n_psk};
    Precoder w = Precoder::zeros(n_rows, rank, n_3);
    for (std::size_t l = 0; l < rank; ++l) {
        if (n3[l].size() != m)
            throw std::invalid_argument("etype2 decode: n3 size");
        if (n3[l][0] != 0)
            throw std::invalid_argument("etype2 decode: n3 not remapped to 0");
        const auto basis = fd_basis(n_3, n3[l]);  // validates bins
        if (i17[l].size() != two_l * m || i24[l].size() != two_l * m ||
            i25[l].size() != two_l * m)
            throw std::invalid_argument("etype2 decode: field size");
        if (i18[l] >= two_l) throw std::out_of_range("etype2 decode: i18");
        if (!i17[l][i18[l] * m])
            throw std::invalid_argument(
                "etype2 decode: strongest coefficient missing from bitmap");
        const std::size_t pol_star = i18[l] / l_beams;
        if (i23[l][pol_star] != 15)
            throw std::invalid_argument(
                "etype2 decode: strongest polarization reference must be 15");
        std::size_t m_nz = 0;
        for (std::size_t p = 0; p < two_l * m; ++p) {
            if (i17[l][p]) ++m_nz;
            if (!i17[l][p] && (i24[l][p] != 0 || i25[l][p] != 0))
                throw std::invalid_argument(
                    "etype2 decode: coefficient outside bitmap (m_nz "
                    "mismatch)");
            if (i24[l][p] >= 8) throw std::out_of_range("etype2 decode: i24");
            if (i25[l][p] >= n_psk) throw std::out_of_range("etype2 decode: i25");
        }
        if (m_nz == 0)
            throw std::invalid_argument("etype2 decode: empty bitmap");

        const double p1[2] = {amp_value(i23[l][0], AmplitudeGrid::REF4BIT),
                              amp_value(i23[l][1], AmplitudeGrid::REF4BIT)};
        for (std::size_t t = 0; t < n_3; ++t) {
            cplx* col = w.col(t, l);
            for (std::size_t i = 0; i < two_l; ++i) {
                cplx coef{0.0, 0.0};
                for (std::size_t f = 0; f < m; ++f) {
                    const std::size_t p = i * m + f;
                    if (!i17[l][p]) continue;
                    coef += amp_value(i24[l][p], AmplitudeGrid::SB3BIT) *
                            psk_phase(i25[l][p], psk) * basis[f * n_3 + t];
                }
                coef *= p1[i / l_beams];
                if (coef != cplx{0.0, 0.0}) expand(i, coef, t, col);
            }
        }
    }
    normalize_columns(w);
    return w;
}

}  // namespace

Precoder decode_etype2(const PmiEType2& pmi, const AntennaConfig& cfg,
                       const EType2Params& params, std::size_t rank,
                       std::size_t n_psk) {
    params.validate();
    check_psk_etype2(n_psk);
    cfg.validate();
    if (cfg.ng != 1)
        throw std::invalid_argument("decode_etype2: single panel only");
    if (rank == 0 || rank > 4)
        throw std::invalid_argument("decode_etype2: rank must be 1..4");
    if (pmi.q1 >= cfg.o1 || pmi.q2 >= cfg.o2)
        throw std::out_of_range("decode_etype2: rotation");
    const std::size_t n_sub = cfg.n1 * cfg.n2;
    if (pmi.i12 >= binomial(n_sub, params.l_beams))
        throw std::out_of_range("decode_etype2: beam choice code");

    const auto idx = comb_decode(pmi.i12, n_sub, params.l_beams);
    std::vector<BeamVector> beams(params.l_beams);
    for (std::size_t b = 0; b < params.l_beams; ++b) {
        const auto [x1, x2] = subgrid_position(cfg, idx[b]);
        beams[b] = rotated_beam(cfg, pmi.q1, pmi.q2, x1, x2);
    }
    const std::size_t pp = cfg.ports_per_pol();
    return decode_delay_report(
        pmi.n3, pmi.i17, pmi.i18, pmi.i23, pmi.i24, pmi.i25, rank,
        2 * params.l_beams, params.m_v(), params.n_3, n_psk, cfg.n_ap(),
        [&](std::size_t i, cplx coef, std::size_t, cplx* col) {
            const std::size_t b = i % params.l_beams;
            const std::size_t pol = i / params.l_beams;
            kernels::caxpy(coef, beams[b].entries.data(), col + pol * pp, pp);
        });
}

Precoder reconstruct_etype2_raw(const EType2Analysis& an,
                                const AntennaConfig& cfg,
                                const EType2Params& params) {
    const std::size_t m = an.m;
    const std::size_t pp = cfg.ports_per_pol();
    Precoder w = Precoder::zeros(cfg.n_ap(), an.rank, params.n_3);
    for (std::size_t l = 0; l < an.rank; ++l) {
        const auto basis = fd_basis(params.n_3, an.n3[l]);
        for (std::size_t b = 0; b < params.l_beams; ++b) {
            const auto [x1, x2] = subgrid_position(cfg, an.beams[b]);
            const auto beam = rotated_beam(cfg, an.q1, an.q2, x1, x2);
            for (std::size_t pol = 0; pol < 2; ++pol) {
                const std::size_t i = pol * params.l_beams + b;
                for (std::size_t t = 0; t < params.n_3; ++t) {
                    cplx coef{0.0, 0.0};
                    for (std::size_t f = 0; f < m; ++f)
                        coef += an.at(l, i, f) * basis[f * params.n_3 + t];
                    kernels::caxpy(coef, beam.entries.data(),
                                   w.col(t, l) + pol * pp, pp);
                }
            }
        }
    }
    normalize_columns(w);
    return w;
}

std::size_t etype2_m_nz(const PmiEType2& pmi) {
    std::size_t acc = 0;
    for (const auto& bm : pmi.i17)
        for (const auto b : bm) acc += b != 0;
    return acc;
}

std::size_t etype2_m_nz(const PmiEType2PS& pmi) {
    std::size_t acc = 0;
    for (const auto& bm : pmi.i17)
        for (const auto b : bm) acc += b != 0;
    return acc;
}

// ---- Port selection ------------------------------------------------------

void EType2PsConfig::validate() const {
    params.validate();
    if (params.l_beams != 2 && params.l_beams != 4)
        throw std::invalid_argument("etype2 ps: L must be 2 or 4");
    if (d == 0 || d > 4)
        throw std::invalid_argument("etype2 ps: d must be in 1..4");
    if (n_ports < 4 || n_ports % 2 != 0)
        throw std::invalid_argument("etype2 ps: invalid port count");
    if (params.l_beams > n_ports / 2)
        throw std::invalid_argument("etype2 ps: L exceeds ports per polarization");
}

std::vector<std::size_t> etype2_ps_ports(const EType2PsConfig& c,
                                         std::size_t i11) {
    if (i11 >= c.i11_range())
        throw std::out_of_range("etype2 ps: i11 outside port group range");
    std::vector<std::size_t> ports(c.params.l_beams);
    for (std::size_t i = 0; i < c.params.l_beams; ++i) {
        ports[i] = i11 * c.d + i;
        if (ports[i] >= c.n_ports / 2)
            throw std::out_of_range("etype2 ps: selected port beyond n_ap/2");
    }
    return ports;
}

PmiEType2PS encode_etype2_ps(const ChannelRealization& port_channel,
                             const EType2PsConfig& c, std::size_t rank,
                             std::size_t n_psk) {
    c.validate();
    check_psk_etype2(n_psk);
    if (rank == 0 || rank > 4)
        throw std::invalid_argument("encode_etype2_ps: rank must be 1..4");
    if (port_channel.n_ap != c.n_ports || port_channel.n_3 != c.params.n_3)
        throw std::invalid_argument("encode_etype2_ps: dimension mismatch");
    if (rank > port_channel.n_rx)
        throw std::invalid_argument("encode_etype2_ps: rank exceeds rx antennas");

    const std::size_t half = c.n_ports / 2;
    const std::size_t l_beams = c.params.l_beams;
    std::vector<double> energy(half, 0.0);
    for (std::size_t t = 0; t < c.params.n_3; ++t)
        for (std::size_t r = 0; r < port_channel.n_rx; ++r) {
            const cplx* row = port_channel.row(t, r);
            for (std::size_t q = 0; q < half; ++q)
                energy[q] += std::norm(row[q]) + std::norm(row[half + q]);
        }
    std::size_t best_i11 = 0;
    double best_energy = -1.0;
    for (std::size_t i11 = 0; i11 < c.i11_range(); ++i11) {
        if (i11 * c.d + l_beams - 1 >= half) break;
        double e = 0.0;
        for (std::size_t i = 0; i < l_beams; ++i) e += energy[i11 * c.d + i];
        if (e > best_energy) {
            best_energy = e;
            best_i11 = i11;
        }
    }
    const auto ports = etype2_ps_ports(c, best_i11);

    // port-domain projection: entry picking from the per-subband targets
    const Precoder targets = csi_targets(port_channel, rank);
    Type2Analysis base;
    base.rank = rank;
    base.n_3 = c.params.n_3;
    base.beams = ports;  // only the size matters for fd_compress
    base.raw.assign(rank * c.params.n_3 * 2 * l_beams, cplx{0.0, 0.0});
    for (std::size_t l = 0; l < rank; ++l)
        for (std::size_t t = 0; t < c.params.n_3; ++t)
            for (std::size_t i = 0; i < l_beams; ++i) {
                base.at(l, t, i) = targets.col(t, l)[ports[i]];
                base.at(l, t, l_beams + i) = targets.col(t, l)[half + ports[i]];
            }

    auto fd = fd_compress(base, 2 * l_beams, c.params.n_3, c.params.m_v(),
                          c.params.budget(rank));
    PmiEType2PS pmi;
    pmi.i11 = best_i11;
    pmi.n3 = std::move(fd.n3);
    const std::size_t grid = 2 * l_beams * c.params.m_v();
    for (std::size_t l = 0; l < rank; ++l) {
        const cplx* ct = fd.ctilde.data() + l * grid;
        const std::uint8_t* ret = fd.retained.data() + l * grid;
        auto q = detail::quantize_delay_grid(ct, 2 * l_beams, c.params.m_v(),
                                            ret, fd.strongest[l], n_psk);
        pmi.i17.emplace_back(ret, ret + grid);
        pmi.i18.push_back(fd.strongest[l] / c.params.m_v());
        pmi.i23.push_back(q.ref);
        pmi.i24.push_back(std::move(q.amps));
        pmi.i25.push_back(std::move(q.phases));
    }
    return pmi;
}

Precoder decode_etype2_ps(const PmiEType2PS& pmi, const EType2PsConfig& c,
                          std::size_t rank, std::size_t n_psk) {
    c.validate();
    check_psk_etype2(n_psk);
    if (rank == 0 || rank > 4)
        throw std::invalid_argument("decode_etype2_ps: rank must be 1..4");
    const auto ports = etype2_ps_ports(c, pmi.i11);
    const std::size_t half = c.n_ports / 2;
    return decode_delay_report(
        pmi.n3, pmi.i17, pmi.i18, pmi.i23, pmi.i24, pmi.i25, rank,
        2 * c.params.l_beams, c.params.m_v(), c.params.n_3, n_psk, c.n_ports,
        [&](std::size_t i, cplx coef, std::size_t, cplx* col) {
            const std::size_t b = i % c.params.l_beams;
            const std::size_t pol = i / c.params.l_beams;
            col[pol * half + ports[b]] += coef;
        });
}

}  // namespace nrcb
