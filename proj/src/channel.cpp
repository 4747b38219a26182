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

#include "nrcb/channel.hpp"

#include "nrcb/kernels.hpp"
#include "nrcb/linalg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nrcb {

void normalize_columns(Precoder& p) {
    for (std::size_t t = 0; t < p.n_subbands; ++t) {
        for (std::size_t l = 0; l < p.n_layers; ++l) {
            cplx* c = p.col(t, l);
            const double nn = kernels::cnorm2(c, p.n_rows);
            if (nn <= 0.0) continue;
            const double inv = 1.0 / std::sqrt(nn);
            for (std::size_t r = 0; r < p.n_rows; ++r) c[r] *= inv;
        }
    }
}

double chordal_nmse(const Precoder& a, const Precoder& b) {
    if (a.n_rows != b.n_rows || a.n_layers != b.n_layers ||
        a.n_subbands != b.n_subbands)
        throw std::invalid_argument("chordal_nmse: shape mismatch");
    if (a.n_subbands == 0 || a.n_layers == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t t = 0; t < a.n_subbands; ++t) {
        for (std::size_t l = 0; l < a.n_layers; ++l) {
            const double na = kernels::cnorm2(a.col(t, l), a.n_rows);
            const double nb = kernels::cnorm2(b.col(t, l), b.n_rows);
            if (na <= 0.0 && nb <= 0.0) continue;
            if (na <= 0.0 || nb <= 0.0) {
                acc += 1.0;
                continue;
            }
            const cplx ip = kernels::cdotc(a.col(t, l), b.col(t, l), a.n_rows);
            acc += 1.0 - std::norm(ip) / (na * nb);
        }
    }
    return acc / static_cast<double>(a.n_subbands * a.n_layers);
}

void PathSet::normalize_power() {
    if (paths.empty()) throw std::invalid_argument("PathSet: empty");
    double total = 0.0;
    for (const Path& p : paths) total += std::norm(p.gain);
    if (total <= 0.0) throw std::invalid_argument("PathSet: zero total power");
    const double inv = 1.0 / std::sqrt(total);
    for (Path& p : paths) p.gain *= inv;
}

PathSet random_pathset(Rng& rng, std::size_t n_paths, std::size_t n_3) {
    if (n_paths == 0) throw std::invalid_argument("random_pathset: no paths");
    PathSet ps;
    ps.paths.resize(n_paths);
    const double deg = std::numbers::pi / 180.0;
    for (Path& p : ps.paths) {
        p.azimuth = rng.uniform(-60.0 * deg, 60.0 * deg);
        p.zenith = rng.uniform(60.0 * deg, 120.0 * deg);
        p.delay = rng.uniform(0.0, static_cast<double>(n_3) / 4.0);
        p.gain = rng.cnormal();
    }
    ps.normalize_power();
    return ps;
}

void path_spatial_freqs(const Path& p, double& nu1, double& nu2) {
    nu1 = 0.5 * std::sin(p.zenith) * std::sin(p.azimuth);
    nu2 = 0.5 * std::cos(p.zenith);
}

Path grid_path(const AntennaConfig& cfg, std::size_t m1, std::size_t m2,
               double delay, cplx gain) {
    cfg.validate();
    if (m1 >= cfg.o1 * cfg.n1 || m2 >= cfg.o2 * cfg.n2)
        throw std::out_of_range("grid_path: beam outside grid");
    // wrap to the principal interval [-1/2, 1/2)
    auto wrap = [](double f) { return f - std::floor(f + 0.5); };
    const double nu1 = wrap(static_cast<double>(m1) /
                            static_cast<double>(cfg.o1 * cfg.n1));
    const double nu2 = wrap(static_cast<double>(m2) /
                            static_cast<double>(cfg.o2 * cfg.n2));
    if (std::abs(nu2) >= 0.5 - 1e-12)
        throw std::invalid_argument("grid_path: m2 maps to endfire zenith");
    Path p;
    p.zenith = std::acos(2.0 * nu2);
    const double sz = std::sin(p.zenith);
    if (std::abs(2.0 * nu1) > sz)
        throw std::invalid_argument("grid_path: m1 unreachable at this zenith");
    p.azimuth = std::asin(2.0 * nu1 / sz);
    p.delay = delay;
    p.gain = gain;
    return p;
}

namespace {

// Steering entry for per-polarization element (panel g, vertical q,
// horizontal p); panels extend the aperture horizontally by n1 elements.
inline cplx steer_entry(const AntennaConfig& cfg, std::size_t g, std::size_t q,
                        std::size_t p, double nu1, double nu2) {
    const double phase =
        2.0 * std::numbers::pi *
        (nu1 * static_cast<double>(p + g * cfg.n1) + nu2 * static_cast<double>(q));
    return {std::cos(phase), std::sin(phase)};
}

}  // namespace

ChannelRealization gen_channel(const PathSet& paths, const AntennaConfig& cfg,
                               std::size_t n_rx, std::size_t n_3,
                               std::uint64_t seed) {
    cfg.validate();
    if (paths.paths.empty())
        throw std::invalid_argument("gen_channel: empty path set");
    if (n_rx == 0 || n_3 == 0)
        throw std::invalid_argument("gen_channel: invalid dimensions");
    for (const Path& p : paths.paths)
        if (p.delay < 0.0 || p.delay >= static_cast<double>(n_3))
            throw std::invalid_argument("gen_channel: delay outside [0, n_3)");

    PathSet ps = paths;
    ps.normalize_power();

    ChannelRealization h = ChannelRealization::zeros(n_rx, cfg.n_ap(), n_3);
    h.cfg = cfg;
    h.paths = ps;
    h.seed = seed;

    Rng rng(seed);
    const std::size_t n_paths = ps.paths.size();
    // gamma(p, r, pol): nominal gain times CN(0,1), drawn in fixed order
    std::vector<cplx> gamma(n_paths * n_rx * 2);
    for (std::size_t p = 0; p < n_paths; ++p)
        for (std::size_t r = 0; r < n_rx; ++r)
            for (std::size_t pol = 0; pol < 2; ++pol)
                gamma[(p * n_rx + r) * 2 + pol] =
                    ps.paths[p].gain * rng.cnormal();

    const std::size_t per_pol = cfg.ports_per_pol();
    const std::size_t ep = cfg.elements_per_panel();
    for (std::size_t p = 0; p < n_paths; ++p) {
        double nu1, nu2;
        path_spatial_freqs(ps.paths[p], nu1, nu2);
        std::vector<cplx> steer(per_pol);
        for (std::size_t g = 0; g < cfg.ng; ++g)
            for (std::size_t q = 0; q < cfg.n2; ++q)
                for (std::size_t pp = 0; pp < cfg.n1; ++pp)
                    steer[g * ep + q * cfg.n1 + pp] =
                        steer_entry(cfg, g, q, pp, nu1, nu2);
        for (std::size_t t = 0; t < n_3; ++t) {
            const double dphase = -2.0 * std::numbers::pi * ps.paths[p].delay *
                                  static_cast<double>(t) /
                                  static_cast<double>(n_3);
            const cplx ramp{std::cos(dphase), std::sin(dphase)};
            for (std::size_t r = 0; r < n_rx; ++r) {
                cplx* row = h.data.data() + (t * n_rx + r) * h.n_ap;
                for (std::size_t pol = 0; pol < 2; ++pol) {
                    const cplx w = gamma[(p * n_rx + r) * 2 + pol] * ramp;
                    kernels::caxpy(w, steer.data(), row + pol * per_pol,
                                   per_pol);
                }
            }
        }
    }
    return h;
}

ChannelRealization gen_ul_from_dl(const ChannelRealization& dl,
                                  std::uint64_t seed) {
    if (dl.paths.paths.empty())
        throw std::invalid_argument("gen_ul_from_dl: missing path metadata");
    Rng rng(Rng::stream(seed, 0x756cULL).bits());
    PathSet ul = dl.paths;
    for (Path& p : ul.paths) {
        const double mag = std::abs(p.gain);
        const double db = rng.uniform(-1.0, 1.0);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double m = mag * std::pow(10.0, db / 20.0);
        p.gain = cplx{m * std::cos(phase), m * std::sin(phase)};
    }
    // keep gains normalized like any generated set
    ul.normalize_power();
    return gen_channel(ul, dl.cfg, dl.n_rx, dl.n_3, seed);
}

Precoder csi_targets(const ChannelRealization& h, std::size_t layers,
                     bool unit_norm) {
    if (layers == 0 || layers > h.n_rx)
        throw std::invalid_argument("csi_targets: layers must be in [1, n_rx]");
    Precoder tg = Precoder::zeros(h.n_ap, layers, h.n_3);
    std::vector<cplx> x(h.n_ap * h.n_rx);
    for (std::size_t t = 0; t < h.n_3; ++t) {
        // columns of H_t^H are the conjugated rows of H_t
        for (std::size_t r = 0; r < h.n_rx; ++r)
            for (std::size_t a = 0; a < h.n_ap; ++a)
                x[r * h.n_ap + a] = std::conj(h.at(t, r, a));
        const auto pd = linalg::gram_principal(x.data(), h.n_ap, h.n_rx, layers);
        for (std::size_t l = 0; l < pd.count(); ++l) {
            const double scale = unit_norm ? 1.0 : std::sqrt(pd.evals[l]);
            cplx* col = tg.col(t, l);
            for (std::size_t a = 0; a < h.n_ap; ++a) col[a] = scale * pd.dir(l)[a];
        }
    }
    return tg;
}

}  // namespace nrcb
