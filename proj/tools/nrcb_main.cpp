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

#include <CLI11.hpp>
#include <json.hpp>

#include "nrcb/beamgrid.hpp"
#include "nrcb/chansim.hpp"
#include "nrcb/etype2.hpp"
#include "nrcb/fetype2ps.hpp"
#include "nrcb/overhead.hpp"
#include "nrcb/serialize.hpp"
#include "nrcb/type1.hpp"
#include "nrcb/type2.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using json = nlohmann::json;
using namespace nrcb;

namespace {

// Everything a run can configure; a JSON --config file mirrors these field
// names and explicit flags override it.
struct RunConfig {
    std::string kind = "type1sp";
    std::size_t n1 = 4, n2 = 2, o1 = 4, o2 = 4, ng = 1;
    std::size_t n_3 = 8;
    std::size_t rank = 1;
    std::size_t l_beams = 4;
    std::string p_v = "1/4";
    std::string beta = "1/2";
    std::size_t r_cfg = 1;
    std::size_t d = 1;
    std::string alpha = "1/4";
    std::size_t m = 1;
    std::size_t n_big = 2;
    std::size_t n_psk = 8;
    bool subband_amplitude = false;
    std::size_t c_m = 1;
    std::size_t users = 4;
    double snr_db = 10.0;
    std::size_t drops = 100;
    std::uint64_t seed = 1;
    std::size_t n_rx = 2;
    std::size_t n_paths = 6;
    std::string port_mode = "eigen";
    std::string output;

    AntennaConfig antenna() const { return AntennaConfig{n1, n2, o1, o2, ng}; }
};

void apply_json(RunConfig& rc, const json& j) {
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("kind", rc.kind);
    get("n1", rc.n1);
    get("n2", rc.n2);
    get("o1", rc.o1);
    get("o2", rc.o2);
    get("ng", rc.ng);
    get("n_3", rc.n_3);
    get("rank", rc.rank);
    get("L", rc.l_beams);
    get("p_v", rc.p_v);
    get("beta", rc.beta);
    get("R", rc.r_cfg);
    get("d", rc.d);
    get("alpha", rc.alpha);
    get("m", rc.m);
    get("N", rc.n_big);
    get("n_psk", rc.n_psk);
    get("subband_amplitude", rc.subband_amplitude);
    get("c_m", rc.c_m);
    get("K", rc.users);
    get("snr_db", rc.snr_db);
    get("drops", rc.drops);
    get("seed", rc.seed);
    get("n_rx", rc.n_rx);
    get("n_paths", rc.n_paths);
    get("port_mode", rc.port_mode);
    get("output", rc.output);
}

Type2Config type2_config(const RunConfig& rc) {
    Type2Config c;
    c.l_beams = rc.l_beams;
    c.rank = rc.rank;
    c.subband_amplitude = rc.subband_amplitude;
    c.n_psk = rc.n_psk;
    c.n_3 = rc.n_3;
    return c;
}

Type2PsConfig type2_ps_config(const RunConfig& rc) {
    Type2PsConfig c;
    c.l_beams = rc.l_beams;
    c.rank = rc.rank;
    c.subband_amplitude = rc.subband_amplitude;
    c.n_psk = rc.n_psk;
    c.n_3 = rc.n_3;
    c.d = rc.d;
    c.n_ports = rc.antenna().n_ap();
    return c;
}

EType2Params etype2_params(const RunConfig& rc) {
    EType2Params p;
    p.l_beams = rc.l_beams;
    p.p_v = Rational::parse(rc.p_v);
    p.beta = Rational::parse(rc.beta);
    p.r = rc.r_cfg;
    p.n_3 = rc.n_3;
    return p;
}

EType2PsConfig etype2_ps_config(const RunConfig& rc) {
    EType2PsConfig c;
    c.params = etype2_params(rc);
    c.d = rc.d;
    c.n_ports = rc.antenna().n_ap();
    return c;
}

FeParams fe_params(const RunConfig& rc) {
    FeParams p;
    p.alpha = Rational::parse(rc.alpha);
    p.m = rc.m;
    p.n_big = rc.n_big;
    p.n_3 = rc.n_3;
    p.n_ports = rc.antenna().n_ap();
    return p;
}

// ---- PMI <-> JSON --------------------------------------------------------

json pmi_to_json(const PmiType1SP& p) {
    return {{"kind", "type1sp"}, {"i11", p.i11}, {"i12", p.i12}, {"i2", p.i2}};
}
PmiType1SP pmi_type1_sp_from_json(const json& j) {
    PmiType1SP p;
    p.i11 = j.at("i11");
    p.i12 = j.at("i12");
    p.i2 = j.at("i2").get<std::vector<std::size_t>>();
    return p;
}

json pmi_to_json(const PmiType1MP& p) {
    json sb = json::array();
    for (const auto& s : p.i2) sb.push_back({{"n0", s.n0}, {"n1", s.n1}, {"n2", s.n2}});
    return {{"kind", "type1mp"}, {"i11", p.i11}, {"i12", p.i12}, {"i14", p.i14},
            {"i2", sb}};
}
PmiType1MP pmi_type1_mp_from_json(const json& j) {
    PmiType1MP p;
    p.i11 = j.at("i11");
    p.i12 = j.at("i12");
    p.i14 = j.at("i14").get<std::vector<std::size_t>>();
    for (const auto& s : j.at("i2"))
        p.i2.push_back({s.at("n0"), s.at("n1"), s.at("n2")});
    return p;
}

json pmi_to_json(const PmiType2& p) {
    return {{"kind", "type2"},   {"q1", p.q1},   {"q2", p.q2}, {"i12", p.i12},
            {"i13", p.i13},      {"i14", p.i14}, {"i21", p.i21},
            {"i22", p.i22}};
}
PmiType2 pmi_type2_from_json(const json& j) {
    PmiType2 p;
    p.q1 = j.at("q1");
    p.q2 = j.at("q2");
    p.i12 = j.at("i12");
    p.i13 = j.at("i13").get<std::vector<std::size_t>>();
    p.i14 = j.at("i14").get<std::vector<std::vector<std::size_t>>>();
    p.i21 = j.at("i21").get<std::vector<std::vector<std::size_t>>>();
    if (j.contains("i22"))
        p.i22 = j.at("i22").get<std::vector<std::vector<std::size_t>>>();
    return p;
}

json pmi_to_json(const PmiType2PS& p) {
    return {{"kind", "type2ps"}, {"i11", p.i11}, {"i13", p.i13},
            {"i14", p.i14},      {"i21", p.i21}, {"i22", p.i22}};
}
PmiType2PS pmi_type2_ps_from_json(const json& j) {
    PmiType2PS p;
    p.i11 = j.at("i11");
    p.i13 = j.at("i13").get<std::vector<std::size_t>>();
    p.i14 = j.at("i14").get<std::vector<std::vector<std::size_t>>>();
    p.i21 = j.at("i21").get<std::vector<std::vector<std::size_t>>>();
    if (j.contains("i22"))
        p.i22 = j.at("i22").get<std::vector<std::vector<std::size_t>>>();
    return p;
}

json bitmaps_to_json(const std::vector<std::vector<std::uint8_t>>& v) {
    json out = json::array();
    for (const auto& bm : v) out.push_back(std::vector<int>(bm.begin(), bm.end()));
    return out;
}
std::vector<std::vector<std::uint8_t>> bitmaps_from_json(const json& j) {
    std::vector<std::vector<std::uint8_t>> out;
    for (const auto& bm : j) {
        std::vector<std::uint8_t> row;
        for (const auto& b : bm) row.push_back(b.get<int>() != 0);
        out.push_back(std::move(row));
    }
    return out;
}

json pmi_to_json(const PmiEType2& p) {
    return {{"kind", "etype2"}, {"q1", p.q1},   {"q2", p.q2},
            {"i12", p.i12},     {"n3", p.n3},   {"i17", bitmaps_to_json(p.i17)},
            {"i18", p.i18},     {"i23", p.i23}, {"i24", p.i24},
            {"i25", p.i25}};
}
PmiEType2 pmi_etype2_from_json(const json& j) {
    PmiEType2 p;
    p.q1 = j.at("q1");
    p.q2 = j.at("q2");
    p.i12 = j.at("i12");
    p.n3 = j.at("n3").get<std::vector<std::vector<std::size_t>>>();
    p.i17 = bitmaps_from_json(j.at("i17"));
    p.i18 = j.at("i18").get<std::vector<std::size_t>>();
    p.i23 = j.at("i23").get<std::vector<std::array<std::size_t, 2>>>();
    p.i24 = j.at("i24").get<std::vector<std::vector<std::size_t>>>();
    p.i25 = j.at("i25").get<std::vector<std::vector<std::size_t>>>();
    return p;
}

json pmi_to_json(const PmiEType2PS& p) {
    return {{"kind", "etype2ps"}, {"i11", p.i11}, {"n3", p.n3},
            {"i17", bitmaps_to_json(p.i17)},      {"i18", p.i18},
            {"i23", p.i23},       {"i24", p.i24}, {"i25", p.i25}};
}
PmiEType2PS pmi_etype2_ps_from_json(const json& j) {
    PmiEType2PS p;
    p.i11 = j.at("i11");
    p.n3 = j.at("n3").get<std::vector<std::vector<std::size_t>>>();
    p.i17 = bitmaps_from_json(j.at("i17"));
    p.i18 = j.at("i18").get<std::vector<std::size_t>>();
    p.i23 = j.at("i23").get<std::vector<std::array<std::size_t, 2>>>();
    p.i24 = j.at("i24").get<std::vector<std::vector<std::size_t>>>();
    p.i25 = j.at("i25").get<std::vector<std::vector<std::size_t>>>();
    return p;
}

json pmi_to_json(const PmiFeType2PS& p) {
    return {{"kind", "fetype2ps"},  {"port_choice", p.port_choice},
            {"n3", p.n3},           {"i17", bitmaps_to_json(p.i17)},
            {"i18", p.i18},         {"i23", p.i23},
            {"i24", p.i24},         {"i25", p.i25}};
}
PmiFeType2PS pmi_fetype2ps_from_json(const json& j) {
    PmiFeType2PS p;
    p.port_choice = j.at("port_choice");
    p.n3 = j.at("n3").get<std::vector<std::size_t>>();
    p.i17 = bitmaps_from_json(j.at("i17"));
    p.i18 = j.at("i18").get<std::vector<std::size_t>>();
    p.i23 = j.at("i23").get<std::vector<std::array<std::size_t, 2>>>();
    p.i24 = j.at("i24").get<std::vector<std::vector<std::size_t>>>();
    p.i25 = j.at("i25").get<std::vector<std::vector<std::size_t>>>();
    return p;
}

// ---- shared helpers -------------------------------------------------------

std::string hex_of(const Payload& p) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (const auto b : p.bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

Payload payload_of_hex(const std::string& hex, std::size_t bits) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex payload");
    Payload p;
    p.bits = bits;
    for (std::size_t i = 0; i < hex.size(); i += 2)
        p.bytes.push_back(static_cast<std::uint8_t>(
            std::stoul(hex.substr(i, 2), nullptr, 16)));
    return p;
}

void print_precoder(std::ostream& os, const Precoder& w) {
    char buf[96];
    for (std::size_t t = 0; t < w.n_subbands; ++t) {
        os << "subband " << t << "\n";
        for (std::size_t row = 0; row < w.n_rows; ++row) {
            for (std::size_t l = 0; l < w.n_layers; ++l) {
                const cplx z = w.col(t, l)[row];
                std::snprintf(buf, sizeof buf, "%s(%.9g,%.9g)", l ? " " : "",
                              z.real(), z.imag());
                os << buf;
            }
            os << "\n";
        }
    }
}

ChannelRealization make_channel(const RunConfig& rc) {
    Rng rng(rc.seed);
    const auto ps = random_pathset(rng, rc.n_paths, rc.n_3);
    return gen_channel(ps, rc.antenna(), rc.n_rx, rc.n_3, rng.bits());
}

std::ostream& open_output(const RunConfig& rc, std::ofstream& file) {
    if (rc.output.empty()) return std::cout;
    file.open(rc.output);
    if (!file) throw std::runtime_error("cannot open output: " + rc.output);
    return file;
}

struct EncodeResult {
    json pmi;
    Payload payload;
    OverheadReport report;
};

EncodeResult run_encoder(const RunConfig& rc, const ChannelRealization& h) {
    const auto kind = kind_from_name(rc.kind);
    const AntennaConfig cfg = rc.antenna();
    EncodeResult out;
    switch (kind) {
        case CodebookKind::TYPE1_SP: {
            const auto pmi = encode_type1_sp(h, cfg, rc.rank);
            out.pmi = pmi_to_json(pmi);
            out.payload = serialize_pmi(pmi, cfg, rc.rank, rc.n_3);
            out.report = report_for(pmi, cfg, rc.rank, rc.n_3);
            break;
        }
        case CodebookKind::TYPE1_MP: {
            const auto pmi = encode_type1_mp(h, cfg, rc.rank, rc.c_m);
            out.pmi = pmi_to_json(pmi);
            out.payload = serialize_pmi(pmi, cfg, rc.rank, rc.c_m, rc.n_3);
            out.report = report_for(pmi, cfg, rc.rank, rc.c_m, rc.n_3);
            break;
        }
        case CodebookKind::TYPE2: {
            const auto c = type2_config(rc);
            const auto [pmi, rep] = encode_type2(h, cfg, c);
            out.pmi = pmi_to_json(pmi);
            out.payload = serialize_pmi(pmi, cfg, c);
            out.report = report_for(pmi, cfg, c);
            break;
        }
        case CodebookKind::TYPE2_PS: {
            const auto c = type2_ps_config(rc);
            const auto [pmi, rep] = encode_type2_ps(h, c);
            out.pmi = pmi_to_json(pmi);
            out.payload = serialize_pmi(pmi, c);
            out.report = report_for(pmi, c);
            break;
        }
        case CodebookKind::ETYPE2: {
            const auto p = etype2_params(rc);
            const auto pmi = encode_etype2(h, cfg, p, rc.rank, rc.n_psk);
            out.pmi = pmi_to_json(pmi);
            out.payload = serialize_pmi(pmi, cfg, p, rc.rank, rc.n_psk);
            out.report = report_for(pmi, cfg, p, rc.rank, rc.n_psk);
            break;
        }
        case CodebookKind::ETYPE2_PS: {
            const auto c = etype2_ps_config(rc);
            const auto pmi = encode_etype2_ps(h, c, rc.rank, rc.n_psk);
            out.pmi = pmi_to_json(pmi);
            out.payload = serialize_pmi(pmi, c, rc.rank, rc.n_psk);
            out.report = report_for(pmi, c, rc.rank, rc.n_psk);
            break;
        }
        case CodebookKind::FETYPE2_PS: {
            const auto p = fe_params(rc);
            const auto pmi = encode_fetype2ps(h, p, rc.rank, rc.n_psk);
            out.pmi = pmi_to_json(pmi);
            out.payload = serialize_pmi(pmi, p, rc.rank, rc.n_psk);
            out.report = report_for(pmi, p, rc.rank, rc.n_psk);
            break;
        }
    }
    return out;
}

// seeded channel plus, for port-selection kinds, the gNB port precoders
// and the effective channel the UE actually measures (Type II / Enhanced
// Type II PS use fixed orthogonal-DFT ports; Further Enhanced derives its
// ports from the uplink)
struct PreparedChannel {
    ChannelRealization dl;
    std::optional<PortPrecoders> ports;
    ChannelRealization measured;
};

PreparedChannel channel_for_kind(const RunConfig& rc) {
    const auto kind = kind_from_name(rc.kind);
    const AntennaConfig cfg = rc.antenna();
    PreparedChannel out;
    out.dl = make_channel(rc);
    if (kind == CodebookKind::TYPE2_PS || kind == CodebookKind::ETYPE2_PS) {
        const std::size_t pp = cfg.ports_per_pol();
        PortPrecoders ports;
        ports.per_pol = pp;
        ports.n_3 = rc.n_3;
        ports.n_pairs = pp;
        ports.data.resize(pp * rc.n_3 * pp);
        const double inv = 1.0 / std::sqrt(static_cast<double>(pp));
        for (std::size_t j = 0; j < pp; ++j) {
            const auto [x1, x2] = subgrid_position(cfg, j);
            const auto w = rotated_beam(cfg, 0, 0, x1, x2);
            for (std::size_t t = 0; t < rc.n_3; ++t)
                for (std::size_t e = 0; e < pp; ++e)
                    ports.vec(j, t)[e] = inv * w.entries[e];
        }
        out.measured = effective_port_channel(out.dl, ports);
        out.ports = std::move(ports);
    } else if (kind == CodebookKind::FETYPE2_PS) {
        const auto ul =
            gen_ul_from_dl(out.dl, Rng::stream(out.dl.seed, 0x756cULL).bits());
        auto ports =
            gnb_port_precoders(ul, cfg, cfg.ports_per_pol(),
                               rc.port_mode == "dft" ? PortMode::DFT_BASED
                                                     : PortMode::EIGEN_BASED);
        out.measured = effective_port_channel(out.dl, ports);
        out.ports = std::move(ports);
    } else {
        out.measured = out.dl;
    }
    return out;
}

// ---- subcommands -----------------------------------------------------------

int cmd_codeword(const RunConfig& rc, std::size_t m1, std::size_t m2,
                 std::size_t n, const std::vector<std::size_t>& i14,
                 const std::string& pmi_json) {
    const auto kind = kind_from_name(rc.kind);
    const AntennaConfig cfg = rc.antenna();
    std::ofstream file;
    std::ostream& os = open_output(rc, file);

    Precoder w;
    switch (kind) {
        case CodebookKind::TYPE1_SP: {
            PmiType1SP pmi{m1, m2, std::vector<std::size_t>(rc.n_3, n)};
            w = decode_type1_sp(pmi, cfg, rc.rank);
            break;
        }
        case CodebookKind::TYPE1_MP: {
            PmiType1MP pmi;
            pmi.i11 = m1;
            pmi.i12 = m2;
            pmi.i14 = i14;
            pmi.i2.assign(rc.n_3, Type1MpSubband{n, 0, 0});
            w = decode_type1_mp(pmi, cfg, rc.rank, rc.c_m);
            break;
        }
        case CodebookKind::TYPE2:
            w = decode_type2(pmi_type2_from_json(json::parse(pmi_json)), cfg,
                             type2_config(rc));
            break;
        case CodebookKind::TYPE2_PS:
            w = decode_type2_ps(pmi_type2_ps_from_json(json::parse(pmi_json)),
                                type2_ps_config(rc));
            break;
        case CodebookKind::ETYPE2:
            w = decode_etype2(pmi_etype2_from_json(json::parse(pmi_json)), cfg,
                              etype2_params(rc), rc.rank, rc.n_psk);
            break;
        case CodebookKind::ETYPE2_PS:
            w = decode_etype2_ps(
                pmi_etype2_ps_from_json(json::parse(pmi_json)),
                etype2_ps_config(rc), rc.rank, rc.n_psk);
            break;
        case CodebookKind::FETYPE2_PS: {
            const auto ports =
                PortPrecoders::identity(cfg.ports_per_pol(), rc.n_3);
            w = decode_fetype2ps(pmi_fetype2ps_from_json(json::parse(pmi_json)),
                                 ports, fe_params(rc), rc.rank, rc.n_psk);
            break;
        }
    }
    print_precoder(os, w);
    return 0;
}

int cmd_encode(const RunConfig& rc) {
    const auto prep = channel_for_kind(rc);
    const auto enc = run_encoder(rc, prep.measured);
    std::ofstream file;
    std::ostream& os = open_output(rc, file);
    json out = {{"pmi", enc.pmi},
                {"payload_hex", hex_of(enc.payload)},
                {"payload_bits", enc.payload.bits},
                {"indicator_count", enc.report.indicator_count},
                {"serialized_bits", enc.report.serialized_bits},
                {"complexity_ops", enc.report.complexity_ops}};
    os << out.dump(2) << "\n";
    return 0;
}

Precoder decode_from_json(const RunConfig& rc, const json& jpmi) {
    const auto kind = kind_from_name(rc.kind);
    const AntennaConfig cfg = rc.antenna();
    switch (kind) {
        case CodebookKind::TYPE1_SP:
            return decode_type1_sp(pmi_type1_sp_from_json(jpmi), cfg, rc.rank);
        case CodebookKind::TYPE1_MP:
            return decode_type1_mp(pmi_type1_mp_from_json(jpmi), cfg, rc.rank,
                                   rc.c_m);
        case CodebookKind::TYPE2:
            return decode_type2(pmi_type2_from_json(jpmi), cfg, type2_config(rc));
        case CodebookKind::TYPE2_PS:
            return decode_type2_ps(pmi_type2_ps_from_json(jpmi),
                                   type2_ps_config(rc));
        case CodebookKind::ETYPE2:
            return decode_etype2(pmi_etype2_from_json(jpmi), cfg,
                                 etype2_params(rc), rc.rank, rc.n_psk);
        case CodebookKind::ETYPE2_PS:
            return decode_etype2_ps(pmi_etype2_ps_from_json(jpmi),
                                    etype2_ps_config(rc), rc.rank, rc.n_psk);
        case CodebookKind::FETYPE2_PS:
            return decode_fetype2ps(
                pmi_fetype2ps_from_json(jpmi),
                PortPrecoders::identity(cfg.ports_per_pol(), rc.n_3),
                fe_params(rc), rc.rank, rc.n_psk);
    }
    throw std::invalid_argument("decode: unknown kind");
}

int cmd_decode(const RunConfig& rc, const std::string& pmi_arg,
               const std::string& payload_hex, std::size_t payload_bits) {
    json jpmi;
    if (!payload_hex.empty()) {
        const auto pay = payload_of_hex(payload_hex, payload_bits);
        const auto kind = kind_from_name(rc.kind);
        const AntennaConfig cfg = rc.antenna();
        switch (kind) {
            case CodebookKind::TYPE1_SP:
                jpmi = pmi_to_json(parse_type1_sp(pay, cfg, rc.rank, rc.n_3));
                break;
            case CodebookKind::TYPE1_MP:
                jpmi = pmi_to_json(
                    parse_type1_mp(pay, cfg, rc.rank, rc.c_m, rc.n_3));
                break;
            case CodebookKind::TYPE2:
                jpmi = pmi_to_json(parse_type2(pay, cfg, type2_config(rc)));
                break;
            case CodebookKind::TYPE2_PS:
                jpmi = pmi_to_json(parse_type2_ps(pay, type2_ps_config(rc)));
                break;
            case CodebookKind::ETYPE2:
                jpmi = pmi_to_json(
                    parse_etype2(pay, cfg, etype2_params(rc), rc.rank, rc.n_psk));
                break;
            case CodebookKind::ETYPE2_PS:
                jpmi = pmi_to_json(parse_etype2_ps(pay, etype2_ps_config(rc),
                                                   rc.rank, rc.n_psk));
                break;
            case CodebookKind::FETYPE2_PS:
                jpmi = pmi_to_json(
                    parse_fetype2ps(pay, fe_params(rc), rc.rank, rc.n_psk));
                break;
        }
    } else {
        std::string text = pmi_arg;
        if (!text.empty() && text[0] != '{') {  // treat as a file path
            std::ifstream in(text);
            if (!in) throw CLI::ValidationError("--pmi", "cannot open " + text);
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        jpmi = json::parse(text);
        if (jpmi.contains("pmi")) jpmi = jpmi.at("pmi");  // encode output
    }
    const auto w = decode_from_json(rc, jpmi);
    std::ofstream file;
    std::ostream& os = open_output(rc, file);
    print_precoder(os, w);
    return 0;
}

int cmd_roundtrip(const RunConfig& rc) {
    const auto prep = channel_for_kind(rc);
    const auto enc = run_encoder(rc, prep.measured);

    // payload -> parse -> decode, then compare against the direct targets
    const auto kind = kind_from_name(rc.kind);
    const AntennaConfig cfg = rc.antenna();
    json parsed;
    Precoder w;
    switch (kind) {
        case CodebookKind::TYPE1_SP: {
            const auto pmi = parse_type1_sp(enc.payload, cfg, rc.rank, rc.n_3);
            parsed = pmi_to_json(pmi);
            w = decode_type1_sp(pmi, cfg, rc.rank);
            break;
        }
        case CodebookKind::TYPE1_MP: {
            const auto pmi =
                parse_type1_mp(enc.payload, cfg, rc.rank, rc.c_m, rc.n_3);
            parsed = pmi_to_json(pmi);
            w = decode_type1_mp(pmi, cfg, rc.rank, rc.c_m);
            break;
        }
        case CodebookKind::TYPE2: {
            const auto pmi = parse_type2(enc.payload, cfg, type2_config(rc));
            parsed = pmi_to_json(pmi);
            w = decode_type2(pmi, cfg, type2_config(rc));
            break;
        }
        case CodebookKind::TYPE2_PS: {
            const auto pmi = parse_type2_ps(enc.payload, type2_ps_config(rc));
            parsed = pmi_to_json(pmi);
            w = apply_port_precoding(*prep.ports,
                                     decode_type2_ps(pmi, type2_ps_config(rc)));
            break;
        }
        case CodebookKind::ETYPE2: {
            const auto pmi = parse_etype2(enc.payload, cfg, etype2_params(rc),
                                          rc.rank, rc.n_psk);
            parsed = pmi_to_json(pmi);
            w = decode_etype2(pmi, cfg, etype2_params(rc), rc.rank, rc.n_psk);
            break;
        }
        case CodebookKind::ETYPE2_PS: {
            const auto pmi = parse_etype2_ps(enc.payload, etype2_ps_config(rc),
                                             rc.rank, rc.n_psk);
            parsed = pmi_to_json(pmi);
            w = apply_port_precoding(
                *prep.ports,
                decode_etype2_ps(pmi, etype2_ps_config(rc), rc.rank, rc.n_psk));
            break;
        }
        case CodebookKind::FETYPE2_PS: {
            const auto pmi =
                parse_fetype2ps(enc.payload, fe_params(rc), rc.rank, rc.n_psk);
            parsed = pmi_to_json(pmi);
            w = decode_fetype2ps(pmi, *prep.ports, fe_params(rc), rc.rank,
                                 rc.n_psk);
            break;
        }
    }

    if (parsed != enc.pmi) throw std::runtime_error("payload round trip broke");
    // reconstruction error against the true downlink directions; the
    // port-selection kinds are composed with their gNB port precoders so
    // every kind is measured in the antenna domain
    const double nmse = chordal_nmse(w, csi_targets(prep.dl, rc.rank, true));

    std::ofstream file;
    std::ostream& os = open_output(rc, file);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "nmse %.9g\nindicator_count %zu\nserialized_bits %zu\n",
                  nmse, enc.report.indicator_count, enc.report.serialized_bits);
    os << buf << "payload " << hex_of(enc.payload) << "\n";
    return 0;
}

int cmd_overhead(const RunConfig& rc, const std::vector<std::size_t>& m_nz,
                 const std::vector<std::size_t>& m_vr) {
    std::ofstream file;
    std::ostream& os = open_output(rc, file);
    os << "kind,indicator_count,complexity_ops\n";
    for (const auto kind :
         {CodebookKind::TYPE1_SP, CodebookKind::TYPE1_MP, CodebookKind::TYPE2,
          CodebookKind::TYPE2_PS, CodebookKind::ETYPE2, CodebookKind::ETYPE2_PS,
          CodebookKind::FETYPE2_PS}) {
        OverheadParams p;
        p.rank = rc.rank;
        p.n_3 = rc.n_3;
        p.l_beams = rc.l_beams;
        p.m_nz = m_nz;
        p.m_vr = m_vr;
        p.subband_amplitude = rc.subband_amplitude;
        p.ng = rc.ng == 1 ? 2 : rc.ng;  // multi-panel row needs a panel count
        p.c_m = rc.c_m;
        p.n_big = rc.n_big;
        p.n1 = rc.n1;
        p.n2 = rc.n2;
        p.d = rc.d;
        if (kind == CodebookKind::ETYPE2 || kind == CodebookKind::ETYPE2_PS)
            p.m_v = etype2_params(rc).m_v();
        if (kind == CodebookKind::FETYPE2_PS) p.m_v = rc.m;
        os << kind_name(kind) << "," << overhead_count(kind, p) << ","
           << complexity_estimate(kind, p) << "\n";
    }
    return 0;
}

int cmd_simulate(const RunConfig& rc, const std::vector<std::string>& kinds) {
    std::vector<EvalConfig> grid;
    for (const auto& name : kinds) {
        EvalConfig ec;
        ec.cfg = rc.antenna();
        ec.n_3 = rc.n_3;
        ec.l_beams = rc.l_beams;
        ec.subband_amplitude = rc.subband_amplitude;
        ec.n_psk = rc.n_psk;
        ec.p_v = Rational::parse(rc.p_v);
        ec.beta = Rational::parse(rc.beta);
        ec.r_cfg = rc.r_cfg;
        ec.d = rc.d;
        ec.alpha = Rational::parse(rc.alpha);
        ec.m = rc.m;
        ec.n_big = rc.n_big;
        ec.c_m = rc.c_m;
        if (name == "genie") {
            ec.genie = true;
        } else if (name == "fetype2ps-eigen") {
            ec.kind = CodebookKind::FETYPE2_PS;
            ec.port_mode = PortMode::EIGEN_BASED;
        } else if (name == "fetype2ps-dft") {
            ec.kind = CodebookKind::FETYPE2_PS;
            ec.port_mode = PortMode::DFT_BASED;
        } else {
            ec.kind = kind_from_name(name);
        }
        grid.push_back(ec);
    }
    const auto rows = sweep(grid, rc.users, rc.n_rx, rc.n_paths, rc.snr_db,
                            rc.drops, rc.seed);
    std::ofstream file;
    std::ostream& os = open_output(rc, file);
    os << sweep_csv(rows, rc.users, rc.snr_db, rc.drops);
    if (!os) throw std::runtime_error("write failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"5G NR codebook toolbox: PMI encoding, precoder "
                 "reconstruction, overhead tables and MU-MIMO sweeps"};
    app.require_subcommand(1);

    RunConfig rc;
    if (const char* env = std::getenv("NR_CB_SEED"))
        rc.seed = std::strtoull(env, nullptr, 10);

    std::string config_path;
    // shared configuration flags, attached to every subcommand
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--kind", rc.kind, "codebook kind");
        sub->add_option("--n1", rc.n1);
        sub->add_option("--n2", rc.n2);
        sub->add_option("--o1", rc.o1);
        sub->add_option("--o2", rc.o2);
        sub->add_option("--ng", rc.ng);
        sub->add_option("--n3", rc.n_3, "subband count");
        sub->add_option("--rank", rc.rank);
        sub->add_option("--L", rc.l_beams);
        sub->add_option("--p-v", rc.p_v);
        sub->add_option("--beta", rc.beta);
        sub->add_option("--R", rc.r_cfg);
        sub->add_option("--d", rc.d);
        sub->add_option("--alpha", rc.alpha);
        sub->add_option("--m", rc.m);
        sub->add_option("--N", rc.n_big);
        sub->add_option("--n-psk", rc.n_psk);
        sub->add_flag("--subband-amplitude,!--no-subband-amplitude",
                      rc.subband_amplitude);
        sub->add_option("--c-m", rc.c_m);
        sub->add_option("--K", rc.users);
        sub->add_option("--snr-db", rc.snr_db);
        sub->add_option("--drops", rc.drops);
        sub->add_option("--seed", rc.seed);
        sub->add_option("--n-rx", rc.n_rx);
        sub->add_option("--paths", rc.n_paths);
        sub->add_option("--port-mode", rc.port_mode)
            ->check(CLI::IsMember({"eigen", "dft"}));
        sub->add_option("--output", rc.output, "output file (default stdout)");
    };

    auto* codeword = app.add_subcommand("codeword", "decode explicit indices");
    std::size_t m1 = 0, m2 = 0, n = 0;
    std::vector<std::size_t> i14;
    std::string pmi_json = "{}";
    add_common(codeword);
    codeword->add_option("--m1", m1, "horizontal beam index");
    codeword->add_option("--m2", m2, "vertical beam index");
    codeword->add_option("--n", n, "co-phase index");
    codeword->add_option("--i14", i14, "multi-panel co-phase indices");
    codeword->add_option("--pmi", pmi_json, "PMI JSON for multi-beam kinds");

    auto* encode = app.add_subcommand("encode", "encode a seeded channel");
    add_common(encode);

    auto* decode = app.add_subcommand("decode", "reconstruct a precoder");
    std::string pmi_arg, payload_hex;
    std::size_t payload_bits = 0;
    add_common(decode);
    decode->add_option("--pmi", pmi_arg, "PMI JSON (inline or a file path)");
    decode->add_option("--payload", payload_hex, "payload hex string");
    decode->add_option("--payload-bits", payload_bits,
                       "bit length of --payload");

    auto* roundtrip = app.add_subcommand(
        "roundtrip", "encode, serialize, parse, decode, report fidelity");
    add_common(roundtrip);

    auto* overhead = app.add_subcommand("overhead", "per-kind overhead table");
    std::vector<std::size_t> m_nz{4}, m_vr{2};
    add_common(overhead);
    overhead->add_option("--m-nz", m_nz, "per-layer reported coefficients");
    overhead->add_option("--m-vr", m_vr, "per-layer full-resolution counts");

    auto* simulate = app.add_subcommand("simulate", "MU-MIMO sweep to CSV");
    std::vector<std::string> kinds{"type1sp", "type2", "etype2"};
    add_common(simulate);
    simulate->add_option("--kinds", kinds,
                         "codebooks to sweep (including genie, "
                         "fetype2ps-eigen, fetype2ps-dft)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "cannot open config: " << config_path << "\n";
                return 2;
            }
            RunConfig from_file;
            apply_json(from_file, json::parse(in));
            // flags win: re-parse over the file-backed defaults
            rc = from_file;
            app.clear();
            app.parse(argc, argv);  // flags re-applied over file values
        }

        if (app.got_subcommand(codeword))
            return cmd_codeword(rc, m1, m2, n, i14, pmi_json);
        if (app.got_subcommand(encode)) return cmd_encode(rc);
        if (app.got_subcommand(decode))
            return cmd_decode(rc, pmi_arg, payload_hex, payload_bits);
        if (app.got_subcommand(roundtrip)) return cmd_roundtrip(rc);
        if (app.got_subcommand(overhead)) return cmd_overhead(rc, m_nz, m_vr);
        if (app.got_subcommand(simulate)) return cmd_simulate(rc, kinds);
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
