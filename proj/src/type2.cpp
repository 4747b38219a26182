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

#include "nrcb/type2.hpp"

#include "nrcb/beamgrid.hpp"
#include "nrcb/kernels.hpp"
#include "nrcb/quantizers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nrcb {

void Type2Config::validate(const AntennaConfig& cfg) const {
    cfg.validate();
    if (cfg.ng != 1)
        throw std::invalid_argument("type2: single panel only");
    if (l_beams < 2 || l_beams > 4)
        throw std::invalid_argument("type2: L must be 2, 3 or 4");
    if (l_beams > cfg.n1 * cfg.n2)
        throw std::invalid_argument("type2: L exceeds beam grid size");
    if (rank == 0 || rank > 2)
        throw std::invalid_argument("type2: rank must be 1 or 2");
    if (n_psk != 4 && n_psk != 8)
        throw std::invalid_argument("type2: n_psk must be 4 or 8");
    if (n_3 == 0) throw std::invalid_argument("type2: n_3 must be positive");
}

namespace {

struct QuantizedBeams {
    std::vector<std::size_t> i13;
    std::vector<std::vector<std::size_t>> i14, i21, i22;
    CompressedReport report;
};

// Shared wideband/subband quantization over raw coefficients indexed
// (layer, subband, beam) with beams 0..2L-1 spanning both polarizations.
QuantizedBeams quantize_raw(const std::vector<cplx>& raw, std::size_t rank,
                            std::size_t n_3, std::size_t two_l, bool i_s,
                            std::size_t n_psk) {
    const PskConfig full{n_psk};
    const PskConfig coarse{4};
    const std::size_t psk_step = n_psk / 4;

    QuantizedBeams out;
    out.i13.resize(rank);
    out.i14.assign(rank, std::vector<std::size_t>(two_l, 0));
    out.i21.assign(rank, std::vector<std::size_t>(n_3 * two_l, 0));
    if (i_s) out.i22.assign(rank, std::vector<std::size_t>(n_3 * two_l, 1));

    auto at = [&](std::size_t l, std::size_t t, std::size_t i) {
        return raw[(l * n_3 + t) * two_l + i];
    };

    for (std::size_t l = 0; l < rank; ++l) {
        std::vector<double> rms(two_l, 0.0);
        for (std::size_t i = 0; i < two_l; ++i) {
            double acc = 0.0;
            for (std::size_t t = 0; t < n_3; ++t) acc += std::norm(at(l, t, i));
            rms[i] = std::sqrt(acc / static_cast<double>(n_3));
        }
        std::size_t strongest = 0;
        for (std::size_t i = 1; i < two_l; ++i)
            if (rms[i] > rms[strongest]) strongest = i;
        out.i13[l] = strongest;
        const double ref = rms[strongest];

        auto& k1 = out.i14[l];
        if (ref > 0.0) {
            for (std::size_t i = 0; i < two_l; ++i)
                k1[i] = quantize_amp(rms[i] / ref, AmplitudeGrid::WB3BIT);
        }
        k1[strongest] = 7;

        // reported beams in ascending index order, ranked for the full
        // resolution set by (wideband amplitude desc, index asc)
        std::vector<std::size_t> reported;
        for (std::size_t i = 0; i < two_l; ++i)
            if (i != strongest && k1[i] > 0) reported.push_back(i);
        std::vector<std::size_t> ranked = reported;
        std::stable_sort(ranked.begin(), ranked.end(),
                         [&](std::size_t a, std::size_t b) {
                             return k1[a] > k1[b];
                         });
        const std::size_t m_nz = reported.size() + 1;
        const std::size_t m_vr =
            std::min((m_nz + 1) / 2, reported.size());
        std::vector<bool> full_res(two_l, false);
        for (std::size_t r = 0; r < m_vr; ++r) full_res[ranked[r]] = true;

        out.report.m_nz.push_back(m_nz);
        out.report.m_vr.push_back(m_vr);
        out.report.omitted.emplace_back(l, strongest);

        for (std::size_t t = 0; t < n_3; ++t) {
            // phases are relative to the strongest beam in this subband
            const cplx pivot = at(l, t, strongest);
            const double mag = std::abs(pivot);
            const cplx rot =
                mag > 0.0 ? std::conj(pivot) / mag : cplx{1.0, 0.0};
            for (const std::size_t i : reported) {
                const cplx z = at(l, t, i) * rot;
                if (full_res[i]) {
                    out.i21[l][t * two_l + i] = quantize_phase(z, full);
                    if (i_s) {
                        const double denom =
                            ref * amp_value(k1[i], AmplitudeGrid::WB3BIT);
                        const double ratio =
                            denom > 0.0 ? std::abs(at(l, t, i)) / denom : 0.0;
                        out.i22[l][t * two_l + i] =
                            quantize_amp(ratio, AmplitudeGrid::SB1BIT);
                    }
                } else {
                    out.i21[l][t * two_l + i] =
                        quantize_phase(z, coarse) * psk_step;
                }
            }
        }
    }
    return out;
}

}  // namespace

void type2_report_sets(const std::vector<std::size_t>& k1,
                       std::size_t strongest,
                       std::vector<std::size_t>& reported,
                       std::vector<bool>& full_res) {
    const std::size_t two_l = k1.size();
    reported.clear();
    for (std::size_t i = 0; i < two_l; ++i)
        if (i != strongest && k1[i] > 0) reported.push_back(i);
    std::vector<std::size_t> ranked = reported;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t a, std::size_t b) { return k1[a] > k1[b]; });
    const std::size_t m_nz = reported.size() + 1;
    const std::size_t m_vr = std::min((m_nz + 1) / 2, reported.size());
    full_res.assign(two_l, false);
    for (std::size_t r = 0; r < m_vr; ++r) full_res[ranked[r]] = true;
}

Type2Analysis project_onto_best_beams(const ChannelRealization& channel,
                                      const AntennaConfig& cfg,
                                      std::size_t l_beams, std::size_t rank) {
    cfg.validate();
    if (cfg.ng != 1)
        throw std::invalid_argument("beam projection: single panel only");
    if (l_beams == 0 || l_beams > cfg.n1 * cfg.n2)
        throw std::invalid_argument("beam projection: L exceeds beam grid size");
    if (channel.n_ap != cfg.n_ap() || channel.n_3 == 0)
        throw std::invalid_argument("beam projection: dimension mismatch");
    if (rank == 0 || rank > channel.n_rx)
        throw std::invalid_argument("beam projection: rank exceeds rx antennas");

    const std::size_t n_3 = channel.n_3;
    const Precoder targets = csi_targets(channel, rank);
    const std::size_t pp = cfg.ports_per_pol();
    const std::size_t n_sub = cfg.n1 * cfg.n2;
    const std::size_t two_l = 2 * l_beams;

    Type2Analysis best;
    double best_energy = -1.0;
    for (const auto& [q1, q2] : rotation_hypotheses(cfg)) {
        // projected energy of every sub-grid beam over layers and subbands
        std::vector<double> energy(n_sub, 0.0);
        std::vector<BeamVector> beams(n_sub);
        for (std::size_t idx = 0; idx < n_sub; ++idx) {
            const auto [x1, x2] = subgrid_position(cfg, idx);
            beams[idx] = rotated_beam(cfg, q1, q2, x1, x2);
            for (std::size_t t = 0; t < n_3; ++t)
                for (std::size_t l = 0; l < rank; ++l) {
                    const cplx* v = targets.col(t, l);
                    energy[idx] +=
                        std::norm(kernels::cdotc(beams[idx].entries.data(), v,
                                                 pp)) +
                        std::norm(kernels::cdotc(beams[idx].entries.data(),
                                                 v + pp, pp));
                }
        }
        // orthogonal beams: the best L-subset is the top L by energy
        std::vector<std::size_t> order(n_sub);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return energy[a] > energy[b];
                         });
        double captured = 0.0;
        for (std::size_t i = 0; i < l_beams; ++i) captured += energy[order[i]];
        if (captured > best_energy) {
            best_energy = captured;
            best.q1 = q1;
            best.q2 = q2;
            best.beams.assign(order.begin(), order.begin() + l_beams);
            std::sort(best.beams.begin(), best.beams.end());
        }
    }

    best.rank = rank;
    best.n_3 = n_3;
    best.raw.assign(rank * n_3 * two_l, cplx{0.0, 0.0});
    const double inv = 1.0 / static_cast<double>(pp);
    for (std::size_t b = 0; b < l_beams; ++b) {
        const auto [x1, x2] = subgrid_position(cfg, best.beams[b]);
        const auto w = rotated_beam(cfg, best.q1, best.q2, x1, x2);
        for (std::size_t t = 0; t < n_3; ++t)
            for (std::size_t l = 0; l < rank; ++l) {
                const cplx* v = targets.col(t, l);
                best.at(l, t, b) = inv * kernels::cdotc(w.entries.data(), v, pp);
                best.at(l, t, l_beams + b) =
                    inv * kernels::cdotc(w.entries.data(), v + pp, pp);
            }
    }
    return best;
}

Type2Analysis analyze_type2(const ChannelRealization& channel,
                            const AntennaConfig& cfg, const Type2Config& c) {
    c.validate(cfg);
    if (channel.n_3 != c.n_3)
        throw std::invalid_argument("analyze_type2: dimension mismatch");
    return project_onto_best_beams(channel, cfg, c.l_beams, c.rank);
}

std::pair<PmiType2, CompressedReport> quantize_type2(const Type2Analysis& an,
                                                     const AntennaConfig& cfg,
                                                     const Type2Config& c) {
    const std::size_t two_l = 2 * c.l_beams;
    auto q = quantize_raw(an.raw, c.rank, c.n_3, two_l, c.subband_amplitude,
                          c.n_psk);
    PmiType2 pmi;
    pmi.q1 = an.q1;
    pmi.q2 = an.q2;
    pmi.i12 = comb_encode(an.beams, cfg.n1 * cfg.n2);
    pmi.i13 = std::move(q.i13);
    pmi.i14 = std::move(q.i14);
    pmi.i21 = std::move(q.i21);
    pmi.i22 = std::move(q.i22);
    return {std::move(pmi), std::move(q.report)};
}

std::pair<PmiType2, CompressedReport> encode_type2(
    const ChannelRealization& channel, const AntennaConfig& cfg,
    const Type2Config& c) {
    return quantize_type2(analyze_type2(channel, cfg, c), cfg, c);
}

Precoder decode_type2(const PmiType2& pmi, const AntennaConfig& cfg,
                      const Type2Config& c) {
    c.validate(cfg);
    const std::size_t n_sub = cfg.n1 * cfg.n2;
    const std::size_t two_l = 2 * c.l_beams;
    if (pmi.q1 >= cfg.o1 || pmi.q2 >= cfg.o2)
        throw std::out_of_range("decode_type2: rotation");
    if (pmi.i12 >= binomial(n_sub, c.l_beams))
        throw std::out_of_range("decode_type2: beam choice code");
    if (pmi.i13.size() != c.rank || pmi.i14.size() != c.rank ||
        pmi.i21.size() != c.rank ||
        (c.subband_amplitude && pmi.i22.size() != c.rank))
        throw std::invalid_argument("decode_type2: per-layer field count");

    const auto beam_idx = comb_decode(pmi.i12, n_sub, c.l_beams);
    std::vector<BeamVector> beams(c.l_beams);
    for (std::size_t b = 0; b < c.l_beams; ++b) {
        const auto [x1, x2] = subgrid_position(cfg, beam_idx[b]);
        beams[b] = rotated_beam(cfg, pmi.q1, pmi.q2, x1, x2);
    }

    const PskConfig psk{c.n_psk};
    const std::size_t pp = cfg.ports_per_pol();
    Precoder w = Precoder::zeros(cfg.n_ap(), c.rank, c.n_3);
    for (std::size_t l = 0; l < c.rank; ++l) {
        if (pmi.i13[l] >= two_l) throw std::out_of_range("decode_type2: i13");
        if (pmi.i14[l].size() != two_l ||
            pmi.i21[l].size() != c.n_3 * two_l ||
            (c.subband_amplitude && pmi.i22[l].size() != c.n_3 * two_l))
            throw std::invalid_argument("decode_type2: field size");
        if (pmi.i14[l][pmi.i13[l]] != 7)
            throw std::invalid_argument(
                "decode_type2: strongest beam amplitude must be 7");
        for (std::size_t t = 0; t < c.n_3; ++t) {
            cplx* col = w.col(t, l);
            for (std::size_t i = 0; i < two_l; ++i) {
                const std::size_t k1 = pmi.i14[l][i];
                if (k1 >= 8) throw std::out_of_range("decode_type2: i14");
                const std::size_t cph = pmi.i21[l][t * two_l + i];
                if (cph >= c.n_psk) throw std::out_of_range("decode_type2: i21");
                double p2 = 1.0;
                if (c.subband_amplitude) {
                    const std::size_t k2 = pmi.i22[l][t * two_l + i];
                    if (k2 >= 2) throw std::out_of_range("decode_type2: i22");
                    p2 = amp_value(k2, AmplitudeGrid::SB1BIT);
                }
                const cplx coef = amp_value(k1, AmplitudeGrid::WB3BIT) * p2 *
                                  psk_phase(cph, psk);
                const std::size_t b = i % c.l_beams;
                const std::size_t pol = i / c.l_beams;
                kernels::caxpy(coef, beams[b].entries.data(), col + pol * pp,
                               pp);
            }
        }
    }
    normalize_columns(w);
    return w;
}

Precoder reconstruct_type2_raw(const Type2Analysis& an,
                               const AntennaConfig& cfg) {
    const std::size_t l_beams = an.beams.size();
    const std::size_t pp = cfg.ports_per_pol();
    Precoder w = Precoder::zeros(cfg.n_ap(), an.rank, an.n_3);
    for (std::size_t b = 0; b < l_beams; ++b) {
        const auto [x1, x2] = subgrid_position(cfg, an.beams[b]);
        const auto beam = rotated_beam(cfg, an.q1, an.q2, x1, x2);
        for (std::size_t l = 0; l < an.rank; ++l)
            for (std::size_t t = 0; t < an.n_3; ++t) {
                kernels::caxpy(an.at(l, t, b), beam.entries.data(),
                               w.col(t, l), pp);
                kernels::caxpy(an.at(l, t, l_beams + b), beam.entries.data(),
                               w.col(t, l) + pp, pp);
            }
    }
    normalize_columns(w);
    return w;
}

// ---- Port selection ------------------------------------------------------

void Type2PsConfig::validate() const {
    if (l_beams < 2 || l_beams > 4)
        throw std::invalid_argument("type2 ps: L must be 2, 3 or 4");
    if (rank == 0 || rank > 2)
        throw std::invalid_argument("type2 ps: rank must be 1 or 2");
    if (n_psk != 4 && n_psk != 8)
        throw std::invalid_argument("type2 ps: n_psk must be 4 or 8");
    if (n_3 == 0) throw std::invalid_argument("type2 ps: n_3 must be positive");
    if (d == 0 || d > 4)
        throw std::invalid_argument("type2 ps: d must be in 1..4");
    if (n_ports < 4 || n_ports % 2 != 0)
        throw std::invalid_argument("type2 ps: invalid port count");
    if (l_beams > n_ports / 2)
        throw std::invalid_argument("type2 ps: L exceeds ports per polarization");
}

std::vector<std::size_t> selected_ports(const Type2PsConfig& c,
                                        std::size_t i11) {
    if (i11 >= c.i11_range())
        throw std::out_of_range("type2 ps: i11 outside port group range");
    std::vector<std::size_t> ports(c.l_beams);
    for (std::size_t i = 0; i < c.l_beams; ++i) {
        ports[i] = i11 * c.d + i;
        if (ports[i] >= c.n_ports / 2)
            throw std::out_of_range("type2 ps: selected port beyond n_ap/2");
    }
    return ports;
}

std::pair<PmiType2PS, CompressedReport> encode_type2_ps(
    const ChannelRealization& port_channel, const Type2PsConfig& c) {
    c.validate();
    if (port_channel.n_ap != c.n_ports || port_channel.n_3 != c.n_3)
        throw std::invalid_argument("encode_type2_ps: dimension mismatch");
    if (c.rank > port_channel.n_rx)
        throw std::invalid_argument("encode_type2_ps: rank exceeds rx antennas");

    const std::size_t half = c.n_ports / 2;
    // per-port-pair received energy
    std::vector<double> energy(half, 0.0);
    for (std::size_t t = 0; t < c.n_3; ++t)
        for (std::size_t r = 0; r < port_channel.n_rx; ++r) {
            const cplx* row = port_channel.row(t, r);
            for (std::size_t q = 0; q < half; ++q)
                energy[q] += std::norm(row[q]) + std::norm(row[half + q]);
        }

    std::size_t best_i11 = 0;
    double best_energy = -1.0;
    for (std::size_t i11 = 0; i11 < c.i11_range(); ++i11) {
        if (i11 * c.d + c.l_beams - 1 >= half) break;  // group must fit
        double e = 0.0;
        for (std::size_t i = 0; i < c.l_beams; ++i) e += energy[i11 * c.d + i];
        if (e > best_energy) {
            best_energy = e;
            best_i11 = i11;
        }
    }

    const auto ports = selected_ports(c, best_i11);
    const Precoder targets = csi_targets(port_channel, c.rank);
    const std::size_t two_l = 2 * c.l_beams;
    std::vector<cplx> raw(c.rank * c.n_3 * two_l);
    for (std::size_t l = 0; l < c.rank; ++l)
        for (std::size_t t = 0; t < c.n_3; ++t)
            for (std::size_t i = 0; i < c.l_beams; ++i) {
                raw[(l * c.n_3 + t) * two_l + i] = targets.col(t, l)[ports[i]];
                raw[(l * c.n_3 + t) * two_l + c.l_beams + i] =
                    targets.col(t, l)[half + ports[i]];
            }

    auto q = quantize_raw(raw, c.rank, c.n_3, two_l, c.subband_amplitude,
                          c.n_psk);
    PmiType2PS pmi;
    pmi.i11 = best_i11;
    pmi.i13 = std::move(q.i13);
    pmi.i14 = std::move(q.i14);
    pmi.i21 = std::move(q.i21);
    pmi.i22 = std::move(q.i22);
    return {std::move(pmi), std::move(q.report)};
}

Precoder decode_type2_ps(const PmiType2PS& pmi, const Type2PsConfig& c) {
    c.validate();
    const auto ports = selected_ports(c, pmi.i11);
    const std::size_t two_l = 2 * c.l_beams;
    const std::size_t half = c.n_ports / 2;
    if (pmi.i13.size() != c.rank || pmi.i14.size() != c.rank ||
        pmi.i21.size() != c.rank ||
        (c.subband_amplitude && pmi.i22.size() != c.rank))
        throw std::invalid_argument("decode_type2_ps: per-layer field count");

    const PskConfig psk{c.n_psk};
    Precoder w = Precoder::zeros(c.n_ports, c.rank, c.n_3);
    for (std::size_t l = 0; l < c.rank; ++l) {
        if (pmi.i13[l] >= two_l) throw std::out_of_range("decode_type2_ps: i13");
        if (pmi.i14[l].size() != two_l || pmi.i21[l].size() != c.n_3 * two_l ||
            (c.subband_amplitude && pmi.i22[l].size() != c.n_3 * two_l))
            throw std::invalid_argument("decode_type2_ps: field size");
        if (pmi.i14[l][pmi.i13[l]] != 7)
            throw std::invalid_argument(
                "decode_type2_ps: strongest beam amplitude must be 7");
        for (std::size_t t = 0; t < c.n_3; ++t) {
            cplx* col = w.col(t, l);
            for (std::size_t i = 0; i < two_l; ++i) {
                const std::size_t k1 = pmi.i14[l][i];
                if (k1 >= 8) throw std::out_of_range("decode_type2_ps: i14");
                const std::size_t cph = pmi.i21[l][t * two_l + i];
                if (cph >= c.n_psk)
                    throw std::out_of_range("decode_type2_ps: i21");
                double p2 = 1.0;
                if (c.subband_amplitude) {
                    const std::size_t k2 = pmi.i22[l][t * two_l + i];
                    if (k2 >= 2) throw std::out_of_range("decode_type2_ps: i22");
                    p2 = amp_value(k2, AmplitudeGrid::SB1BIT);
                }
                const cplx coef = amp_value(k1, AmplitudeGrid::WB3BIT) * p2 *
                                  psk_phase(cph, psk);
                const std::size_t b = i % c.l_beams;
                const std::size_t pol = i / c.l_beams;
                col[pol * half + ports[b]] += coef;
            }
        }
    }
    normalize_columns(w);
    return w;
}

}  // namespace nrcb
