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

#include "nrcb/chansim.hpp"

#include "nrcb/beamgrid.hpp"
#include "nrcb/etype2.hpp"
#include "nrcb/kernels.hpp"
#include "nrcb/linalg.hpp"
#include "nrcb/type1.hpp"
#include "nrcb/type2.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nrcb {

std::string EvalConfig::label() const {
    if (genie) return "genie";
    std::string name = kind_name(kind);
    if (kind == CodebookKind::FETYPE2_PS)
        name += port_mode == PortMode::EIGEN_BASED ? "-eigen" : "-dft";
    return name;
}

std::vector<ChannelRealization> drop_channels(const AntennaConfig& cfg,
                                              std::size_t users,
                                              std::size_t n_rx,
                                              std::size_t n_paths,
                                              std::size_t n_3,
                                              std::uint64_t seed,
                                              std::size_t drop) {
    if (users == 0 || users > cfg.n_ap())
        throw std::invalid_argument("drop_channels: K must be in [1, n_ap]");
    std::vector<ChannelRealization> out;
    out.reserve(users);
    for (std::size_t u = 0; u < users; ++u) {
        Rng rng = Rng::stream(seed, drop * 0x100000001ULL + u);
        const auto ps = random_pathset(rng, n_paths, n_3);
        out.push_back(gen_channel(ps, cfg, n_rx, n_3, rng.bits()));
    }
    return out;
}

namespace {

// fixed orthogonal-DFT beamformed ports used by the R15/R16 port selection
// codebooks (no uplink knowledge, wideband, rotation 0)
PortPrecoders fixed_dft_ports(const AntennaConfig& cfg, std::size_t n_3) {
    if (cfg.ng != 1)
        throw std::invalid_argument("fixed_dft_ports: single panel only");
    const std::size_t pp = cfg.ports_per_pol();
    PortPrecoders ports;
    ports.per_pol = pp;
    ports.n_3 = n_3;
    ports.n_pairs = pp;
    ports.data.resize(pp * n_3 * pp);
    const double inv = 1.0 / std::sqrt(static_cast<double>(pp));
    for (std::size_t j = 0; j < pp; ++j) {
        const auto [x1, x2] = subgrid_position(cfg, j);
        const auto w = rotated_beam(cfg, 0, 0, x1, x2);
        for (std::size_t t = 0; t < n_3; ++t)
            for (std::size_t e = 0; e < pp; ++e)
                ports.vec(j, t)[e] = inv * w.entries[e];
    }
    return ports;
}

}  // namespace

DropReports codebook_precoders(const std::vector<ChannelRealization>& users,
                               const EvalConfig& ec) {
    DropReports out;
    for (const auto& h : users) {
        switch (ec.kind) {
            case CodebookKind::TYPE1_SP: {
                const auto pmi = encode_type1_sp(h, ec.cfg, ec.rank);
                out.precoders.push_back(decode_type1_sp(pmi, ec.cfg, ec.rank));
                const auto rep = report_for(pmi, ec.cfg, ec.rank, ec.n_3);
                out.total_bits += rep.serialized_bits;
                out.total_indicators += rep.indicator_count;
                break;
            }
            case CodebookKind::TYPE1_MP: {
                const auto pmi = encode_type1_mp(h, ec.cfg, ec.rank, ec.c_m);
                out.precoders.push_back(
                    decode_type1_mp(pmi, ec.cfg, ec.rank, ec.c_m));
                const auto rep =
                    report_for(pmi, ec.cfg, ec.rank, ec.c_m, ec.n_3);
                out.total_bits += rep.serialized_bits;
                out.total_indicators += rep.indicator_count;
                break;
            }
            case CodebookKind::TYPE2: {
                Type2Config c;
                c.l_beams = ec.l_beams;
                c.rank = ec.rank;
                c.subband_amplitude = ec.subband_amplitude;
                c.n_psk = ec.n_psk;
                c.n_3 = ec.n_3;
                const auto [pmi, report] = encode_type2(h, ec.cfg, c);
                out.precoders.push_back(decode_type2(pmi, ec.cfg, c));
                const auto rep = report_for(pmi, ec.cfg, c);
                out.total_bits += rep.serialized_bits;
                out.total_indicators += rep.indicator_count;
                break;
            }
            case CodebookKind::TYPE2_PS: {
                Type2PsConfig c;
                c.l_beams = ec.l_beams;
                c.rank = ec.rank;
                c.subband_amplitude = ec.subband_amplitude;
                c.n_psk = ec.n_psk;
                c.n_3 = ec.n_3;
                c.d = ec.d;
                c.n_ports = ec.cfg.n_ap();
                const auto ports = fixed_dft_ports(ec.cfg, ec.n_3);
                const auto heff = effective_port_channel(h, ports);
                const auto [pmi, report] = encode_type2_ps(heff, c);
                out.precoders.push_back(
                    apply_port_precoding(ports, decode_type2_ps(pmi, c)));
                const auto rep = report_for(pmi, c);
                out.total_bits += rep.serialized_bits;
                out.total_indicators += rep.indicator_count;
                break;
            }
            case CodebookKind::ETYPE2: {
                EType2Params p;
                p.l_beams = ec.l_beams;
                p.p_v = ec.p_v;
                p.beta = ec.beta;
                p.r = ec.r_cfg;
                p.n_3 = ec.n_3;
                const auto pmi = encode_etype2(h, ec.cfg, p, ec.rank, ec.n_psk);
                out.precoders.push_back(
                    decode_etype2(pmi, ec.cfg, p, ec.rank, ec.n_psk));
                const auto rep = report_for(pmi, ec.cfg, p, ec.rank, ec.n_psk);
                out.total_bits += rep.serialized_bits;
                out.total_indicators += rep.indicator_count;
                break;
            }
            case CodebookKind::ETYPE2_PS: {
                EType2PsConfig c;
                c.params.l_beams = ec.l_beams;
                c.params.p_v = ec.p_v;
                c.params.beta = ec.beta;
                c.params.r = ec.r_cfg;
                c.params.n_3 = ec.n_3;
                c.d = ec.d;
                c.n_ports = ec.cfg.n_ap();
                const auto ports = fixed_dft_ports(ec.cfg, ec.n_3);
                const auto heff = effective_port_channel(h, ports);
                const auto pmi = encode_etype2_ps(heff, c, ec.rank, ec.n_psk);
                out.precoders.push_back(apply_port_precoding(
                    ports, decode_etype2_ps(pmi, c, ec.rank, ec.n_psk)));
                const auto rep = report_for(pmi, c, ec.rank, ec.n_psk);
                out.total_bits += rep.serialized_bits;
                out.total_indicators += rep.indicator_count;
                break;
            }
            case CodebookKind::FETYPE2_PS: {
                FeParams p;
                p.alpha = ec.alpha;
                p.m = ec.m;
                p.n_big = ec.n_big;
                p.n_3 = ec.n_3;
                p.n_ports = ec.cfg.n_ap();
                const auto ul =
                    gen_ul_from_dl(h, Rng::stream(h.seed, 0x756cULL).bits());
                const auto ports = gnb_port_precoders(
                    ul, ec.cfg, ec.cfg.ports_per_pol(), ec.port_mode);
                const auto heff = effective_port_channel(h, ports);
                const auto pmi = encode_fetype2ps(heff, p, ec.rank, ec.n_psk);
                out.precoders.push_back(
                    decode_fetype2ps(pmi, ports, p, ec.rank, ec.n_psk));
                const auto rep = report_for(pmi, p, ec.rank, ec.n_psk);
                out.total_bits += rep.serialized_bits;
                out.total_indicators += rep.indicator_count;
                break;
            }
        }
    }
    return out;
}

std::vector<Precoder> genie_precoders(
    const std::vector<ChannelRealization>& users) {
    std::vector<Precoder> out;
    out.reserve(users.size());
    for (const auto& h : users) out.push_back(csi_targets(h, 1, true));
    return out;
}

double drop_se(const std::vector<Precoder>& reported,
               const std::vector<ChannelRealization>& users, double snr_db) {
    const std::size_t k = users.size();
    if (reported.size() != k || k == 0)
        throw std::invalid_argument("drop_se: user count mismatch");
    const std::size_t n_ap = users[0].n_ap;
    const std::size_t n_3 = users[0].n_3;
    if (k > n_ap) throw std::invalid_argument("drop_se: K exceeds n_ap");
    const double snr = std::pow(10.0, snr_db / 10.0);
    const double noise = 1.0 / snr;
    const double reg = static_cast<double>(k) / snr;

    double se = 0.0;
    std::vector<cplx> gram(k * k);
    std::vector<cplx> f(k * n_ap);
    std::vector<cplx> rx(users[0].n_rx);
    for (std::size_t t = 0; t < n_3; ++t) {
        // G = W^H W + reg I from the reported unit-norm directions
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                gram[a * k + b] =
                    kernels::cdotc(reported[a].col(t, 0), reported[b].col(t, 0),
                                   n_ap) +
                    (a == b ? cplx{reg, 0.0} : cplx{0.0, 0.0});
        // f_u = normalize(W x_u), x_u = (G + reg I)^{-1} e_u
        for (std::size_t u = 0; u < k; ++u) {
            std::vector<cplx> e(k, cplx{0.0, 0.0});
            e[u] = 1.0;
            const auto x = linalg::solve_hpd(gram, k, e);
            cplx* fu = f.data() + u * n_ap;
            std::fill(fu, fu + n_ap, cplx{0.0, 0.0});
            for (std::size_t v = 0; v < k; ++v)
                kernels::caxpy(x[v], reported[v].col(t, 0), fu, n_ap);
            const double nn = kernels::cnorm2(fu, n_ap);
            if (nn > 0.0) {
                const double inv = 1.0 / std::sqrt(nn);
                for (std::size_t a = 0; a < n_ap; ++a) fu[a] *= inv;
            }
        }
        // per-user SINR with MRC combining on the desired stream
        for (std::size_t u = 0; u < k; ++u) {
            const auto& h = users[u];
            for (std::size_t r = 0; r < h.n_rx; ++r)
                rx[r] = kernels::cdotu(h.row(t, r), f.data() + u * n_ap, n_ap);
            const double sig = kernels::cnorm2(rx.data(), h.n_rx);
            if (sig <= 0.0) continue;
            double interf = 0.0;
            for (std::size_t v = 0; v < k; ++v) {
                if (v == u) continue;
                cplx cross{0.0, 0.0};
                for (std::size_t r = 0; r < h.n_rx; ++r)
                    cross += std::conj(rx[r]) *
                             kernels::cdotu(h.row(t, r), f.data() + v * n_ap,
                                            n_ap);
                interf += std::norm(cross) / sig;
            }
            const double sinr = (sig / static_cast<double>(k)) /
                                (interf / static_cast<double>(k) + noise);
            se += std::log2(1.0 + sinr);
        }
    }
    return se / static_cast<double>(n_3 * k);
}

SeResult evaluate_se(const std::vector<ChannelRealization>& users,
                     const EvalConfig& ec, double snr_db) {
    SeResult r;
    r.drops = 1;
    if (ec.genie) {
        r.mean_se = drop_se(genie_precoders(users), users, snr_db);
        return r;
    }
    const auto rep = codebook_precoders(users, ec);
    r.mean_se = drop_se(rep.precoders, users, snr_db);
    r.overhead_bits =
        static_cast<double>(rep.total_bits) / static_cast<double>(users.size());
    r.indicator_count = static_cast<double>(rep.total_indicators) /
                        static_cast<double>(users.size());
    return r;
}

std::vector<SweepRow> sweep(const std::vector<EvalConfig>& grid,
                            std::size_t users, std::size_t n_rx,
                            std::size_t n_paths, double snr_db,
                            std::size_t drops, std::uint64_t seed) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    if (drops == 0) throw std::invalid_argument("sweep: drops must be positive");
    struct Acc {
        double se = 0.0, se2 = 0.0, bits = 0.0, count = 0.0;
    };
    std::vector<Acc> acc(grid.size());
    for (std::size_t d = 0; d < drops; ++d) {
        const auto channels = drop_channels(grid[0].cfg, users, n_rx, n_paths,
                                            grid[0].n_3, seed, d);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto r = evaluate_se(channels, grid[g], snr_db);
            acc[g].se += r.mean_se;
            acc[g].se2 += r.mean_se * r.mean_se;
            acc[g].bits += r.overhead_bits;
            acc[g].count += r.indicator_count;
        }
    }
    std::vector<SweepRow> rows;
    const double n = static_cast<double>(drops);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        SweepRow row;
        row.config = grid[g];
        row.result.drops = drops;
        row.result.mean_se = acc[g].se / n;
        const double var =
            std::max(0.0, acc[g].se2 / n - row.result.mean_se * row.result.mean_se);
        row.result.ci95 = drops > 1 ? 1.96 * std::sqrt(var / n) : 0.0;
        row.result.overhead_bits = acc[g].bits / n;
        row.result.indicator_count = acc[g].count / n;
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, std::size_t users,
                      double snr_db, std::size_t drops) {
    std::string out =
        "kind,L,M_v,beta,n_psk,K,snr_db,drops,mean_se,ci95,overhead_bits,"
        "indicator_count\n";
    char buf[256];
    for (const auto& row : rows) {
        const EvalConfig& c = row.config;
        std::size_t l = 1, m_v = 0;
        std::string beta = "-";
        switch (c.kind) {
            case CodebookKind::TYPE2:
            case CodebookKind::TYPE2_PS:
                l = c.l_beams;
                break;
            case CodebookKind::ETYPE2:
            case CodebookKind::ETYPE2_PS: {
                l = c.l_beams;
                EType2Params p;
                p.l_beams = c.l_beams;
                p.p_v = c.p_v;
                p.beta = c.beta;
                p.r = c.r_cfg;
                p.n_3 = c.n_3;
                m_v = p.m_v();
                beta = c.beta.str();
                break;
            }
            case CodebookKind::FETYPE2_PS:
                l = c.alpha.num * (c.cfg.n_ap() / 2) / c.alpha.den;
                m_v = c.m;
                break;
            default:
                break;
        }
        if (c.genie) {
            l = 0;
            m_v = 0;
            beta = "-";
        }
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%s,%zu,%zu,%.9g,%zu,%.9g,%.9g,%.9g,%.9g\n",
                      c.label().c_str(), l, m_v, beta.c_str(), c.n_psk, users,
                      snr_db, drops, row.result.mean_se, row.result.ci95,
                      row.result.overhead_bits, row.result.indicator_count);
        out += buf;
    }
    return out;
}

}  // namespace nrcb
