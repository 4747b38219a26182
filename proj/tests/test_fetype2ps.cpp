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

#include <doctest.h>

#include "nrcb/etype2.hpp"
#include "nrcb/fetype2ps.hpp"
#include "nrcb/kernels.hpp"
#include "nrcb/quantizers.hpp"
#include "nrcb/rng.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace nrcb;

namespace {

// fraction of uplink sample energy outside the span of the (conjugated)
// port precoders; the directions are orthonormalized first since DFT ports
// are raw beam-delay vectors
double residual_fraction(const ChannelRealization& ul, const PortPrecoders& p) {
    const std::size_t pp = p.per_pol;
    const std::size_t dim = pp * p.n_3;
    std::vector<std::vector<cplx>> dirs;
    const double inv = 1.0 / std::sqrt(static_cast<double>(p.n_3));
    for (std::size_t j = 0; j < p.n_pairs; ++j) {
        std::vector<cplx> v(dim);
        for (std::size_t t = 0; t < p.n_3; ++t)
            for (std::size_t e = 0; e < pp; ++e)
                v[t * pp + e] = std::conj(p.vec(j, t)[e]) * inv;
        for (const auto& d : dirs) {
            const cplx ip = kernels::cdotc(d.data(), v.data(), dim);
            kernels::caxpy(-ip, d.data(), v.data(), dim);
        }
        const double nn = kernels::cnorm2(v.data(), dim);
        if (nn < 1e-12) continue;
        const double s = 1.0 / std::sqrt(nn);
        for (auto& z : v) z *= s;
        dirs.push_back(std::move(v));
    }

    double total = 0.0, captured = 0.0;
    std::vector<cplx> x(dim);
    for (std::size_t r = 0; r < ul.n_rx; ++r)
        for (std::size_t pol = 0; pol < 2; ++pol) {
            for (std::size_t t = 0; t < ul.n_3; ++t)
                for (std::size_t e = 0; e < pp; ++e)
                    x[t * pp + e] = ul.at(t, r, pol * pp + e);
            total += kernels::cnorm2(x.data(), dim);
            for (const auto& d : dirs)
                captured += std::norm(kernels::cdotc(d.data(), x.data(), dim));
        }
    return 1.0 - captured / total;
}

}  // namespace

TEST_CASE("gnb ports: single uplink path is captured by one eigen port") {
    const AntennaConfig cfg{4, 2, 4, 4, 1};
    Rng rng(2);
    const auto ps = random_pathset(rng, 1, 8);
    const auto ul = gen_channel(ps, cfg, 4, 8, 5);
    const auto ports = gnb_port_precoders(ul, cfg, 1, PortMode::EIGEN_BASED);
    CHECK(ports.n_pairs == 1);
    CHECK(residual_fraction(ul, ports) < 0.01);

    // per-pair normalization: average per-subband norm is one
    double nn = 0.0;
    for (std::size_t t = 0; t < 8; ++t)
        nn += kernels::cnorm2(ports.vec(0, t), ports.per_pol);
    CHECK(nn / 8.0 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gnb ports: four eigen ports capture a 4-path uplink") {
    const AntennaConfig cfg{4, 2, 4, 4, 1};
    Rng rng(9);
    const auto ps = random_pathset(rng, 4, 16);
    const auto ul = gen_channel(ps, cfg, 4, 16, 6);  // 8 samples >= 4 paths
    const auto ports = gnb_port_precoders(ul, cfg, 4, PortMode::EIGEN_BASED);
    CHECK(residual_fraction(ul, ports) < 0.01);
}

TEST_CASE("gnb ports: eigen captures at least as much as DFT off grid") {
    const AntennaConfig cfg{4, 2, 4, 4, 1};
    for (int trial = 0; trial < 8; ++trial) {
        Rng rng = Rng::stream(44, static_cast<std::uint64_t>(trial));
        const auto ps = random_pathset(rng, 6, 16);
        const auto ul = gen_channel(ps, cfg, 4, 16, 70 + trial);
        const auto eig = gnb_port_precoders(ul, cfg, 4, PortMode::EIGEN_BASED);
        const auto dft = gnb_port_precoders(ul, cfg, 4, PortMode::DFT_BASED);
        CHECK(residual_fraction(ul, eig) <= residual_fraction(ul, dft) + 1e-12);
    }
}

TEST_CASE("gnb ports: validation") {
    const AntennaConfig cfg{4, 2, 4, 4, 1};
    Rng rng(1);
    const auto ps = random_pathset(rng, 2, 4);
    const auto ul = gen_channel(ps, cfg, 2, 4, 1);
    CHECK_THROWS_AS(gnb_port_precoders(ul, cfg, 0, PortMode::DFT_BASED),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        gnb_port_precoders(ul, cfg, 8 * 4 + 1, PortMode::DFT_BASED),
        std::invalid_argument);
}

TEST_CASE("fetype2ps: flat effective channel reports bin 0 and is wideband") {
    FeParams p;
    p.alpha = {1, 4};
    p.m = 1;
    p.n_3 = 8;
    p.n_ports = 16;  // k = 2
    REQUIRE(p.k_pairs() == 2);

    ChannelRealization h = ChannelRealization::zeros(1, p.n_ports, p.n_3);
    for (std::size_t t = 0; t < p.n_3; ++t) {
        h.at(t, 0, 3) = cplx{1.0, 0.0};
        h.at(t, 0, 5) = cplx{0.5, 0.5};
        h.at(t, 0, 11) = cplx{0.0, 0.25};
    }
    const auto pmi = encode_fetype2ps(h, p, 1);
    CHECK(pmi.n3 == std::vector<std::size_t>{0});
    CHECK(comb_decode(pmi.port_choice, 8, 2) == std::vector<std::size_t>{3, 5});

    const auto ports = PortPrecoders::identity(8, p.n_3);
    const auto w = decode_fetype2ps(pmi, ports, p, 1);
    for (std::size_t t = 1; t < p.n_3; ++t)
        for (std::size_t a = 0; a < w.n_rows; ++a)
            CHECK(std::abs(w.col(t, 0)[a] - w.col(0, 0)[a]) < 1e-12);
}

TEST_CASE("fetype2ps: exactly representable coefficients reconstruct exactly") {
    FeParams p;
    p.alpha = {1, 4};
    p.m = 1;
    p.n_3 = 4;
    p.n_ports = 16;

    // grid-exact values: amplitudes 1 and 0.5 = (1/sqrt2)^2, phase pi/2
    ChannelRealization h = ChannelRealization::zeros(1, p.n_ports, p.n_3);
    for (std::size_t t = 0; t < p.n_3; ++t) {
        h.at(t, 0, 0) = cplx{1.0, 0.0};
        h.at(t, 0, 2) = cplx{0.0, 0.5};
    }
    const auto pmi = encode_fetype2ps(h, p, 1);
    const auto ports = PortPrecoders::identity(8, p.n_3);
    const auto w = decode_fetype2ps(pmi, ports, p, 1);

    // the reconstructed direction matches the channel's conjugate direction
    const auto tg = csi_targets(h, 1, true);
    CHECK(chordal_nmse(w, tg) < 1e-9);
}

TEST_CASE("fetype2ps: both layers share the frequency basis") {
    FeParams p;
    p.alpha = {1, 4};
    p.m = 2;
    p.n_3 = 8;
    p.n_ports = 16;
    Rng rng(12);
    ChannelRealization h = ChannelRealization::zeros(2, p.n_ports, p.n_3);
    for (std::size_t t = 0; t < p.n_3; ++t)
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t q = 0; q < p.n_ports; ++q)
                h.at(t, r, q) = rng.cnormal();
    const auto pmi = encode_fetype2ps(h, p, 2);
    // one layer-common n3 of size m with leading zero
    CHECK(pmi.n3.size() == 2);
    CHECK(pmi.n3[0] == 0);
    CHECK(pmi.n3[1] >= 1);
    CHECK(pmi.i17.size() == 2);

    const auto ports = PortPrecoders::identity(8, p.n_3);
    const auto w = decode_fetype2ps(pmi, ports, p, 2);
    CHECK(w.n_layers == 2);
}

TEST_CASE("fetype2ps with identity ports reduces to etype2 port selection") {
    // same report expressed in both PMI formats must decode identically
    FeParams fe;
    fe.alpha = {1, 4};
    fe.m = 1;
    fe.n_3 = 8;
    fe.n_ports = 16;  // pairs {0,1} when the comb code selects them

    EType2PsConfig ec;
    ec.params.l_beams = 2;
    ec.params.p_v = {1, 8};  // m_v = ceil(8/8) = 1
    ec.params.beta = {1, 4};
    ec.params.n_3 = 8;
    ec.d = 1;
    ec.n_ports = 16;
    REQUIRE(ec.params.m_v() == 1);

    PmiFeType2PS fpmi;
    fpmi.port_choice = comb_encode({0, 1}, 8);
    fpmi.n3 = {0};
    fpmi.i17 = {{1, 1, 1, 0}};
    fpmi.i18 = {0};
    fpmi.i23 = {{15, 13}};
    fpmi.i24 = {{7, 4, 6, 0}};
    fpmi.i25 = {{0, 3, 1, 0}};

    PmiEType2PS epmi;
    epmi.i11 = 0;
    epmi.n3 = {{0}};
    epmi.i17 = {{1, 1, 1, 0}};
    epmi.i18 = {0};
    epmi.i23 = {{15, 13}};
    epmi.i24 = {{7, 4, 6, 0}};
    epmi.i25 = {{0, 3, 1, 0}};

    const auto ports = PortPrecoders::identity(8, 8);
    const auto wf = decode_fetype2ps(fpmi, ports, fe, 1);
    const auto we = decode_etype2_ps(epmi, ec, 1);
    REQUIRE(wf.n_rows == we.n_rows);
    for (std::size_t t = 0; t < 8; ++t)
        for (std::size_t a = 0; a < wf.n_rows; ++a)
            CHECK(std::abs(wf.col(t, 0)[a] - we.col(t, 0)[a]) < 1e-12);
}

TEST_CASE("fetype2ps: reciprocity beats uniform port sampling on average") {
    const AntennaConfig cfg{4, 2, 4, 4, 1};
    const std::size_t n3 = 16;
    double eigen_res = 0.0, uniform_res = 0.0;
    const int drops = 100;
    for (int d = 0; d < drops; ++d) {
        Rng rng = Rng::stream(777, static_cast<std::uint64_t>(d));
        const auto ps = random_pathset(rng, 6, n3);
        const auto ul = gen_channel(ps, cfg, 4, n3, 3000 + d);
        const auto eig = gnb_port_precoders(ul, cfg, 4, PortMode::EIGEN_BASED);
        eigen_res += residual_fraction(ul, eig);

        // unprecoded uniform sampling: every other antenna, wideband
        PortPrecoders uni;
        uni.per_pol = cfg.ports_per_pol();
        uni.n_3 = n3;
        uni.n_pairs = 4;
        uni.data.assign(4 * n3 * uni.per_pol, cplx{0.0, 0.0});
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t t = 0; t < n3; ++t) uni.vec(j, t)[2 * j] = 1.0;
        uniform_res += residual_fraction(ul, uni);
    }
    CHECK(eigen_res / drops < uniform_res / drops);
}

TEST_CASE("fetype2ps validation") {
    FeParams p;
    p.alpha = {1, 3};
    p.n_ports = 16;  // 8/3 not integral
    p.n_3 = 4;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.alpha = {1, 1};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // 8 > 6 beams
    p.alpha = {1, 4};
    p.m = 3;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.m = 2;
    CHECK_NOTHROW(p.validate());

    // decode rejects a port index outside the transmitted set
    PmiFeType2PS pmi;
    pmi.port_choice = binomial(8, 2);  // out of range
    pmi.n3 = {0, 1};
    const auto ports = PortPrecoders::identity(8, 4);
    CHECK_THROWS_AS(decode_fetype2ps(pmi, ports, p, 1), std::out_of_range);
}
