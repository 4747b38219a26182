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

#include "nrcb/fetype2ps.hpp"

#include "nrcb/beamgrid.hpp"
#include "nrcb/etype2.hpp"
#include "nrcb/kernels.hpp"
#include "nrcb/linalg.hpp"
#include "nrcb/quantizers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace nrcb {

PortPrecoders PortPrecoders::identity(std::size_t per_pol, std::size_t n_3) {
    PortPrecoders p;
    p.per_pol = per_pol;
    p.n_3 = n_3;
    p.n_pairs = per_pol;
    p.data.assign(per_pol * n_3 * per_pol, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < per_pol; ++j)
        for (std::size_t t = 0; t < n_3; ++t) p.vec(j, t)[j] = 1.0;
    return p;
}

namespace {

// receive-side joint (beam, delay) vector, sample layout (t*pp + e):
// entries w[e] * exp(-j*2*pi*t*d/n_3), matching the channel's delay ramp;
// the delay may sit on the half-bin grid
std::vector<cplx> joint_bin(const AntennaConfig& cfg, std::size_t m1,
                            std::size_t m2, double d, std::size_t n_3) {
    const auto w = dft_beam(cfg, m1, m2);
    const std::size_t pp = cfg.ports_per_pol();
    std::vector<cplx> g(pp * n_3);
    for (std::size_t t = 0; t < n_3; ++t) {
        const double ph = -2.0 * std::numbers::pi * static_cast<double>(t) * d /
                          static_cast<double>(n_3);
        const cplx ramp{std::cos(ph), std::sin(ph)};
        for (std::size_t e = 0; e < pp; ++e) g[t * pp + e] = ramp * w.entries[e];
    }
    return g;
}

struct Bin {
    double energy;
    std::size_t m1, m2;
    double d;
};

// uplink energy of every (oversampled beam, half-bin delay) hypothesis
std::vector<Bin> ranked_bins(const ChannelRealization& ul,
                             const AntennaConfig& cfg, const cplx* samples,
                             std::size_t n_samples) {
    const std::size_t pp = cfg.ports_per_pol();
    const std::size_t n_3 = ul.n_3;
    const std::size_t joint_dim = pp * n_3;
    const std::size_t g1 = cfg.o1 * cfg.n1, g2 = cfg.o2 * cfg.n2;
    const std::size_t n_delays = 2 * n_3;

    std::vector<cplx> twiddle(n_delays * n_3);
    for (std::size_t dd = 0; dd < n_delays; ++dd)
        for (std::size_t t = 0; t < n_3; ++t) {
            const double ph = 2.0 * std::numbers::pi * static_cast<double>(t) *
                              (static_cast<double>(dd) / 2.0) /
                              static_cast<double>(n_3);
            twiddle[dd * n_3 + t] = cplx{std::cos(ph), std::sin(ph)};
        }

    std::vector<Bin> bins;
    bins.reserve(g1 * g2 * n_delays);
    std::vector<cplx> series(n_3);
    for (std::size_t m1 = 0; m1 < g1; ++m1)
        for (std::size_t m2 = 0; m2 < g2; ++m2) {
            const auto w = dft_beam(cfg, m1, m2);
            std::vector<double> e_at(n_delays, 0.0);
            for (std::size_t s = 0; s < n_samples; ++s) {
                const cplx* sv = samples + s * joint_dim;
                for (std::size_t t = 0; t < n_3; ++t)
                    series[t] =
                        kernels::cdotc(w.entries.data(), sv + t * pp, pp);
                for (std::size_t dd = 0; dd < n_delays; ++dd)
                    e_at[dd] += std::norm(kernels::cdotu(
                        series.data(), twiddle.data() + dd * n_3, n_3));
            }
            for (std::size_t dd = 0; dd < n_delays; ++dd)
                bins.push_back({e_at[dd], m1, m2,
                                static_cast<double>(dd) / 2.0});
        }
    std::stable_sort(bins.begin(), bins.end(), [](const Bin& a, const Bin& b) {
        return a.energy > b.energy;
    });
    return bins;
}

}  // namespace

PortPrecoders gnb_port_precoders(const ChannelRealization& ul_channel,
                                 const AntennaConfig& cfg, std::size_t k_pairs,
                                 PortMode mode) {
    cfg.validate();
    if (cfg.ng != 1)
        throw std::invalid_argument("gnb_port_precoders: single panel only");
    if (ul_channel.n_ap != cfg.n_ap())
        throw std::invalid_argument("gnb_port_precoders: dimension mismatch");
    const std::size_t pp = cfg.ports_per_pol();
    const std::size_t n_3 = ul_channel.n_3;
    const std::size_t joint_dim = pp * n_3;
    if (k_pairs == 0 || k_pairs > joint_dim)
        throw std::invalid_argument(
            "gnb_port_precoders: k_ports exceeds available dimensions");

    // uplink samples in the joint space, one per (tx antenna, polarization)
    const std::size_t n_samples = 2 * ul_channel.n_rx;
    std::vector<cplx> samples(n_samples * joint_dim);
    for (std::size_t r = 0; r < ul_channel.n_rx; ++r)
        for (std::size_t pol = 0; pol < 2; ++pol) {
            cplx* dst = samples.data() + (r * 2 + pol) * joint_dim;
            for (std::size_t t = 0; t < n_3; ++t)
                for (std::size_t e = 0; e < pp; ++e)
                    dst[t * pp + e] = ul_channel.at(t, r, pol * pp + e);
        }

    const auto bins = ranked_bins(ul_channel, cfg, samples.data(), n_samples);

    // receive-space directions; the transmit precoders are their conjugates
    std::vector<cplx> dirs;  // k_pairs contiguous unit vectors
    dirs.reserve(k_pairs * joint_dim);
    const double inv_bin_norm = 1.0 / std::sqrt(static_cast<double>(joint_dim));

    auto push_dir = [&](const cplx* v) {
        dirs.insert(dirs.end(), v, v + joint_dim);
    };

    if (mode == PortMode::EIGEN_BASED) {
        const auto pd = linalg::gram_principal(samples.data(), joint_dim,
                                               n_samples, k_pairs, 1e-10);
        for (std::size_t i = 0; i < pd.count(); ++i) push_dir(pd.dir(i));
    } else {
        // matching pursuit over the strongest bins: every pick is the
        // hypothesis explaining the most uplink energy not yet covered, so
        // delay-leakage copies of one path do not crowd out weaker paths;
        // the ports themselves stay pure beam-times-delay vectors
        const std::size_t shortlist =
            std::min(bins.size(), std::max<std::size_t>(8 * k_pairs, 32));
        std::vector<std::vector<cplx>> cand(shortlist);
        for (std::size_t c = 0; c < shortlist; ++c) {
            cand[c] = joint_bin(cfg, bins[c].m1, bins[c].m2, bins[c].d,
                                ul_channel.n_3);
            for (auto& z : cand[c]) z *= inv_bin_norm;
        }
        std::vector<cplx> residual = samples;
        std::vector<bool> used(shortlist, false);
        while (dirs.size() < k_pairs * joint_dim) {
            double best = -1.0;
            std::size_t pick = shortlist;
            for (std::size_t c = 0; c < shortlist; ++c) {
                if (used[c]) continue;
                double e = 0.0;
                for (std::size_t s = 0; s < n_samples; ++s)
                    e += std::norm(kernels::cdotc(
                        cand[c].data(), residual.data() + s * joint_dim,
                        joint_dim));
                if (e > best) {
                    best = e;
                    pick = c;
                }
            }
            if (pick == shortlist) break;
            used[pick] = true;
            for (std::size_t s = 0; s < n_samples; ++s) {
                cplx* rs = residual.data() + s * joint_dim;
                const cplx ip = kernels::cdotc(cand[pick].data(), rs, joint_dim);
                kernels::caxpy(-ip, cand[pick].data(), rs, joint_dim);
            }
            push_dir(cand[pick].data());
        }
    }
    // pad whatever is left (eigen rank deficit) with energy-ranked bins
    // orthogonalized against the chosen directions
    {
        std::vector<cplx> cand(joint_dim);
        for (const Bin& b : bins) {
            if (dirs.size() >= k_pairs * joint_dim) break;
            const auto g = joint_bin(cfg, b.m1, b.m2, b.d, ul_channel.n_3);
            for (std::size_t i = 0; i < joint_dim; ++i)
                cand[i] = g[i] * inv_bin_norm;
            for (std::size_t j = 0; j * joint_dim < dirs.size(); ++j) {
                const cplx ip = kernels::cdotc(dirs.data() + j * joint_dim,
                                               cand.data(), joint_dim);
                kernels::caxpy(-ip, dirs.data() + j * joint_dim, cand.data(),
                               joint_dim);
            }
            const double nn = kernels::cnorm2(cand.data(), joint_dim);
            if (nn < 1e-12) continue;  // already represented
            const double inv = 1.0 / std::sqrt(nn);
            for (auto& z : cand) z *= inv;
            push_dir(cand.data());
        }
    }
    if (dirs.size() < k_pairs * joint_dim)
        throw std::invalid_argument(
            "gnb_port_precoders: could not assemble enough independent ports");

    PortPrecoders ports;
    ports.per_pol = pp;
    ports.n_3 = n_3;
    ports.n_pairs = k_pairs;
    ports.data.resize(k_pairs * n_3 * pp);
    const double scale = std::sqrt(static_cast<double>(n_3));
    for (std::size_t j = 0; j < k_pairs; ++j)
        for (std::size_t t = 0; t < n_3; ++t)
            for (std::size_t e = 0; e < pp; ++e)
                ports.vec(j, t)[e] =
                    scale * std::conj(dirs[j * joint_dim + t * pp + e]);
    return ports;
}

ChannelRealization effective_port_channel(const ChannelRealization& dl,
                                          const PortPrecoders& ports) {
    if (dl.n_ap != 2 * ports.per_pol || dl.n_3 != ports.n_3)
        throw std::invalid_argument("effective_port_channel: shape mismatch");
    ChannelRealization h =
        ChannelRealization::zeros(dl.n_rx, 2 * ports.n_pairs, dl.n_3);
    h.seed = dl.seed;
    for (std::size_t t = 0; t < dl.n_3; ++t)
        for (std::size_t r = 0; r < dl.n_rx; ++r)
            for (std::size_t pol = 0; pol < 2; ++pol) {
                const cplx* row = dl.row(t, r) + pol * ports.per_pol;
                for (std::size_t j = 0; j < ports.n_pairs; ++j)
                    h.at(t, r, pol * ports.n_pairs + j) =
                        kernels::cdotu(row, ports.vec(j, t), ports.per_pol);
            }
    return h;
}

void FeParams::validate() const {
    if (n_ports < 4 || n_ports % 2 != 0)
        throw std::invalid_argument("fetype2ps: invalid port count");
    if (alpha.num == 0 || alpha.den == 0 ||
        (alpha.num * (n_ports / 2)) % alpha.den != 0)
        throw std::invalid_argument(
            "fetype2ps: alpha * n_ports / 2 must be a positive integer");
    const std::size_t k = k_pairs();
    if (k == 0 || k > n_ports / 2)
        throw std::invalid_argument("fetype2ps: selected ports out of range");
    if (k > 6)
        throw std::invalid_argument("fetype2ps: at most 6 reported beams");
    if (m != 1 && m != 2)
        throw std::invalid_argument("fetype2ps: m must be 1 or 2");
    if (m > n_3) throw std::invalid_argument("fetype2ps: m exceeds n_3");
    if (n_big != 2 && n_big != 4)
        throw std::invalid_argument("fetype2ps: N must be 2 or 4");
    if (n_3 == 0) throw std::invalid_argument("fetype2ps: n_3 must be positive");
}

namespace {

void check_psk(std::size_t n_psk) {
    if (n_psk != 4 && n_psk != 8 && n_psk != 16)
        throw std::invalid_argument("fetype2ps: n_psk must be 4, 8 or 16");
}

}  // namespace

PmiFeType2PS encode_fetype2ps(const ChannelRealization& effective_channel,
                              const FeParams& params, std::size_t rank,
                              std::size_t n_psk) {
    params.validate();
    check_psk(n_psk);
    if (rank == 0 || rank > 4)
        throw std::invalid_argument("encode_fetype2ps: rank must be 1..4");
    if (effective_channel.n_ap != params.n_ports ||
        effective_channel.n_3 != params.n_3)
        throw std::invalid_argument("encode_fetype2ps: dimension mismatch");
    if (rank > effective_channel.n_rx)
        throw std::invalid_argument("encode_fetype2ps: rank exceeds rx antennas");

    const std::size_t half = params.n_ports / 2;
    const std::size_t k = params.k_pairs();
    const std::size_t n_3 = params.n_3;

    // binary port decision: top-k pairs by received energy
    std::vector<double> energy(half, 0.0);
    for (std::size_t t = 0; t < n_3; ++t)
        for (std::size_t r = 0; r < effective_channel.n_rx; ++r) {
            const cplx* row = effective_channel.row(t, r);
            for (std::size_t q = 0; q < half; ++q)
                energy[q] += std::norm(row[q]) + std::norm(row[half + q]);
        }
    std::vector<std::size_t> order(half);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return energy[a] > energy[b];
    });
    std::vector<std::size_t> sel(order.begin(), order.begin() + k);
    std::sort(sel.begin(), sel.end());

    // per-port coefficient series from the per-subband dominant directions
    const Precoder targets = csi_targets(effective_channel, rank);
    const std::size_t two_k = 2 * k;
    std::vector<cplx> series(rank * two_k * n_3);
    auto sat = [&](std::size_t l, std::size_t i, std::size_t t) -> cplx& {
        return series[(l * two_k + i) * n_3 + t];
    };
    for (std::size_t l = 0; l < rank; ++l)
        for (std::size_t t = 0; t < n_3; ++t)
            for (std::size_t i = 0; i < k; ++i) {
                sat(l, i, t) = targets.col(t, l)[sel[i]];
                sat(l, k + i, t) = targets.col(t, l)[half + sel[i]];
            }

    // layer-common frequency bins: bin 0 fixed; for m = 2 the strongest
    // remaining bin over all layers and ports
    std::vector<std::size_t> bins{0};
    if (params.m == 2) {
        std::vector<double> bin_energy(n_3, 0.0);
        for (std::size_t l = 0; l < rank; ++l)
            for (std::size_t i = 0; i < two_k; ++i)
                for (std::size_t b = 1; b < n_3; ++b) {
                    cplx acc{0.0, 0.0};
                    for (std::size_t t = 0; t < n_3; ++t) {
                        const double ph = -2.0 * std::numbers::pi *
                                          static_cast<double>(t * b) /
                                          static_cast<double>(n_3);
                        acc += sat(l, i, t) * cplx{std::cos(ph), std::sin(ph)};
                    }
                    bin_energy[b] += std::norm(acc);
                }
        std::size_t b_star = 1;
        for (std::size_t b = 2; b < n_3; ++b)
            if (bin_energy[b] > bin_energy[b_star]) b_star = b;
        bins.push_back(b_star);
    }

    // delay-domain coefficients on the selected bins
    const std::size_t m = params.m;
    std::vector<cplx> ctilde(rank * two_k * m);
    for (std::size_t l = 0; l < rank; ++l)
        for (std::size_t i = 0; i < two_k; ++i)
            for (std::size_t f = 0; f < m; ++f) {
                cplx acc{0.0, 0.0};
                for (std::size_t t = 0; t < n_3; ++t) {
                    const double ph = -2.0 * std::numbers::pi *
                                      static_cast<double>(t * bins[f]) /
                                      static_cast<double>(n_3);
                    acc += sat(l, i, t) * cplx{std::cos(ph), std::sin(ph)};
                }
                ctilde[(l * two_k + i) * m + f] =
                    acc / static_cast<double>(n_3);
            }

    PmiFeType2PS pmi;
    pmi.port_choice = comb_encode(sel, half);
    pmi.n3 = bins;
    const std::size_t grid = two_k * m;
    for (std::size_t l = 0; l < rank; ++l) {
        const cplx* ct = ctilde.data() + l * grid;
        std::size_t strongest = 0;
        double best = -1.0;
        std::vector<std::uint8_t> retained(grid, 0);
        for (std::size_t p = 0; p < grid; ++p) {
            const double mag = std::abs(ct[p]);
            if (mag > best) {
                best = mag;
                strongest = p;
            }
            // rank 1..2 reports the full grid; higher ranks only nonzeros
            retained[p] = (rank <= 2) || mag > 0.0;
        }
        retained[strongest] = 1;
        auto q = detail::quantize_delay_grid(ct, two_k, m, retained.data(),
                                             strongest, n_psk);
        pmi.i17.emplace_back(std::move(retained));
        pmi.i18.push_back(strongest);
        pmi.i23.push_back(q.ref);
        pmi.i24.push_back(std::move(q.amps));
        pmi.i25.push_back(std::move(q.phases));
    }
    return pmi;
}

Precoder decode_fetype2ps(const PmiFeType2PS& pmi, const PortPrecoders& ports,
                          const FeParams& params, std::size_t rank,
                          std::size_t n_psk) {
    params.validate();
    check_psk(n_psk);
    if (rank == 0 || rank > 4)
        throw std::invalid_argument("decode_fetype2ps: rank must be 1..4");
    const std::size_t half = params.n_ports / 2;
    if (ports.n_pairs != half || ports.n_3 != params.n_3)
        throw std::invalid_argument(
            "decode_fetype2ps: port precoders do not match the configuration");
    const std::size_t k = params.k_pairs();
    const std::size_t m = params.m;
    const std::size_t two_k = 2 * k;
    if (pmi.port_choice >= binomial(half, k))
        throw std::out_of_range("decode_fetype2ps: port choice code");
    const auto sel = comb_decode(pmi.port_choice, half, k);

    if (pmi.n3.size() != m || pmi.n3[0] != 0)
        throw std::invalid_argument("decode_fetype2ps: n3 must start at bin 0");
    const auto basis = fd_basis(params.n_3, pmi.n3);
    if (pmi.i17.size() != rank || pmi.i18.size() != rank ||
        pmi.i23.size() != rank || pmi.i24.size() != rank ||
        pmi.i25.size() != rank)
        throw std::invalid_argument("decode_fetype2ps: per-layer field count");

    const PskConfig psk{n_psk};
    Precoder w = Precoder::zeros(2 * ports.per_pol, rank, params.n_3);
    for (std::size_t l = 0; l < rank; ++l) {
        if (pmi.i17[l].size() != two_k * m || pmi.i24[l].size() != two_k * m ||
            pmi.i25[l].size() != two_k * m)
            throw std::invalid_argument("decode_fetype2ps: field size");
        if (pmi.i18[l] >= two_k * m)
            throw std::out_of_range("decode_fetype2ps: i18");
        if (!pmi.i17[l][pmi.i18[l]])
            throw std::invalid_argument(
                "decode_fetype2ps: strongest coefficient missing from bitmap");
        const std::size_t pol_star = (pmi.i18[l] / m) / k;
        if (pmi.i23[l][pol_star] != 15)
            throw std::invalid_argument(
                "decode_fetype2ps: strongest polarization reference must be 15");
        const double p1[2] = {amp_value(pmi.i23[l][0], AmplitudeGrid::REF4BIT),
                              amp_value(pmi.i23[l][1], AmplitudeGrid::REF4BIT)};
        for (std::size_t p = 0; p < two_k * m; ++p) {
            if (!pmi.i17[l][p] && (pmi.i24[l][p] != 0 || pmi.i25[l][p] != 0))
                throw std::invalid_argument(
                    "decode_fetype2ps: coefficient outside bitmap");
            if (pmi.i24[l][p] >= 8)
                throw std::out_of_range("decode_fetype2ps: i24");
            if (pmi.i25[l][p] >= n_psk)
                throw std::out_of_range("decode_fetype2ps: i25");
        }
        for (std::size_t t = 0; t < params.n_3; ++t) {
            cplx* col = w.col(t, l);
            for (std::size_t i = 0; i < two_k; ++i) {
                cplx coef{0.0, 0.0};
                for (std::size_t f = 0; f < m; ++f) {
                    const std::size_t p = i * m + f;
                    if (!pmi.i17[l][p]) continue;
                    coef += amp_value(pmi.i24[l][p], AmplitudeGrid::SB3BIT) *
                            psk_phase(pmi.i25[l][p], psk) *
                            basis[f * params.n_3 + t];
                }
                const std::size_t pol = i / k;
                coef *= p1[pol];
                if (coef == cplx{0.0, 0.0}) continue;
                kernels::caxpy(coef, ports.vec(sel[i % k], t),
                               col + pol * ports.per_pol, ports.per_pol);
            }
        }
    }
    normalize_columns(w);
    return w;
}

std::size_t fetype2ps_m_nz(const PmiFeType2PS& pmi) {
    std::size_t acc = 0;
    for (const auto& bm : pmi.i17)
        for (const auto b : bm) acc += b != 0;
    return acc;
}

Precoder apply_port_precoding(const PortPrecoders& ports,
                              const Precoder& port_domain) {
    if (port_domain.n_rows != 2 * ports.n_pairs)
        throw std::invalid_argument("apply_port_precoding: row mismatch");
    if (port_domain.n_subbands != ports.n_3)
        throw std::invalid_argument("apply_port_precoding: subband mismatch");
    Precoder w = Precoder::zeros(2 * ports.per_pol, port_domain.n_layers,
                                 port_domain.n_subbands);
    for (std::size_t t = 0; t < w.n_subbands; ++t)
        for (std::size_t l = 0; l < w.n_layers; ++l) {
            const cplx* src = port_domain.col(t, l);
            cplx* dst = w.col(t, l);
            for (std::size_t pol = 0; pol < 2; ++pol)
                for (std::size_t j = 0; j < ports.n_pairs; ++j) {
                    const cplx coef = src[pol * ports.n_pairs + j];
                    if (coef == cplx{0.0, 0.0}) continue;
                    kernels::caxpy(coef, ports.vec(j, t),
                                   dst + pol * ports.per_pol, ports.per_pol);
                }
        }
    normalize_columns(w);
    return w;
}

}  // namespace nrcb
