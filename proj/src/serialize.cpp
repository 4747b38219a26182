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

#include "nrcb/serialize.hpp"

#include "nrcb/bitio.hpp"
#include "nrcb/quantizers.hpp"

#include <stdexcept>

namespace nrcb {
namespace {

Payload finish(const BitWriter& w) { return Payload{w.bytes(), w.bit_count()}; }

std::size_t cophase_width(std::size_t rank) { return rank == 1 ? 2 : 1; }

}  // namespace

// ---- Type I single panel ---------------------------------------------

Payload serialize_pmi(const PmiType1SP& pmi, const AntennaConfig& cfg,
                      std::size_t rank, std::size_t n_3) {
    if (pmi.i2.size() != n_3)
        throw std::invalid_argument("serialize type1 sp: subband count");
    BitWriter w;
    w.put(pmi.i11, bits_for(cfg.o1 * cfg.n1));
    w.put(pmi.i12, bits_for(cfg.o2 * cfg.n2));
    for (const std::size_t n : pmi.i2) w.put(n, cophase_width(rank));
    return finish(w);
}

PmiType1SP parse_type1_sp(const Payload& p, const AntennaConfig& cfg,
                          std::size_t rank, std::size_t n_3) {
    BitReader r(p.bytes);
    PmiType1SP pmi;
    pmi.i11 = r.get(bits_for(cfg.o1 * cfg.n1));
    pmi.i12 = r.get(bits_for(cfg.o2 * cfg.n2));
    pmi.i2.resize(n_3);
    for (auto& n : pmi.i2) n = r.get(cophase_width(rank));
    return pmi;
}

// ---- Type I multi panel ------------------------------------------------

Payload serialize_pmi(const PmiType1MP& pmi, const AntennaConfig& cfg,
                      std::size_t rank, std::size_t c_m, std::size_t n_3) {
    const std::size_t wb = c_m == 1 ? cfg.ng - 1 : 2;
    if (pmi.i14.size() != wb || pmi.i2.size() != n_3)
        throw std::invalid_argument("serialize type1 mp: field sizes");
    BitWriter w;
    w.put(pmi.i11, bits_for(cfg.o1 * cfg.n1));
    w.put(pmi.i12, bits_for(cfg.o2 * cfg.n2));
    for (const std::size_t p : pmi.i14) w.put(p, 2);
    for (const auto& sb : pmi.i2) {
        w.put(sb.n0, cophase_width(rank));
        if (c_m == 2) {
            w.put(sb.n1, 2);
            w.put(sb.n2, 2);
        }
    }
    return finish(w);
}

PmiType1MP parse_type1_mp(const Payload& p, const AntennaConfig& cfg,
                          std::size_t rank, std::size_t c_m, std::size_t n_3) {
    BitReader r(p.bytes);
    PmiType1MP pmi;
    pmi.i11 = r.get(bits_for(cfg.o1 * cfg.n1));
    pmi.i12 = r.get(bits_for(cfg.o2 * cfg.n2));
    pmi.i14.resize(c_m == 1 ? cfg.ng - 1 : 2);
    for (auto& v : pmi.i14) v = r.get(2);
    pmi.i2.resize(n_3);
    for (auto& sb : pmi.i2) {
        sb.n0 = r.get(cophase_width(rank));
        if (c_m == 2) {
            sb.n1 = r.get(2);
            sb.n2 = r.get(2);
        }
    }
    return pmi;
}

// ---- Type II (shared per-layer tail for the PS variant) ----------------

namespace {

void write_type2_layers(BitWriter& w, const std::vector<std::size_t>& i13,
                        const std::vector<std::vector<std::size_t>>& i14,
                        const std::vector<std::vector<std::size_t>>& i21,
                        const std::vector<std::vector<std::size_t>>& i22,
                        std::size_t rank, std::size_t two_l, std::size_t n_3,
                        bool i_s, std::size_t n_psk) {
    const std::size_t psk_step = n_psk / 4;
    for (std::size_t l = 0; l < rank; ++l) {
        if (i14[l][i13[l]] != 7)
            throw std::invalid_argument(
                "serialize type2: strongest beam amplitude must be 7");
        w.put(i13[l], bits_for(two_l));
        for (std::size_t i = 0; i < two_l; ++i)
            if (i != i13[l]) w.put(i14[l][i], 3);
        std::vector<std::size_t> reported;
        std::vector<bool> full_res;
        type2_report_sets(i14[l], i13[l], reported, full_res);
        std::vector<bool> is_reported(two_l, false);
        for (const std::size_t i : reported) is_reported[i] = true;
        for (std::size_t t = 0; t < n_3; ++t) {
            for (std::size_t i = 0; i < two_l; ++i) {
                const std::size_t c = i21[l][t * two_l + i];
                if (!is_reported[i]) {
                    if (c != 0 || (i_s && i22[l][t * two_l + i] != 1))
                        throw std::invalid_argument(
                            "serialize type2: non-canonical unreported entry");
                    continue;
                }
                if (full_res[i]) {
                    w.put(c, bits_for(n_psk));
                } else {
                    if (c % psk_step != 0)
                        throw std::invalid_argument(
                            "serialize type2: weak phase off the 4-PSK grid");
                    if (i_s && i22[l][t * two_l + i] != 1)
                        throw std::invalid_argument(
                            "serialize type2: weak subband amplitude must be 1");
                    w.put(c / psk_step, 2);  // weak beams carry 4-PSK
                }
            }
            if (i_s)
                for (const std::size_t i : reported)
                    if (full_res[i]) w.put(i22[l][t * two_l + i], 1);
        }
    }
}

void read_type2_layers(BitReader& r, std::vector<std::size_t>& i13,
                       std::vector<std::vector<std::size_t>>& i14,
                       std::vector<std::vector<std::size_t>>& i21,
                       std::vector<std::vector<std::size_t>>& i22,
                       std::size_t rank, std::size_t two_l, std::size_t n_3,
                       bool i_s, std::size_t n_psk) {
    const std::size_t psk_step = n_psk / 4;
    i13.resize(rank);
    i14.assign(rank, std::vector<std::size_t>(two_l, 0));
    i21.assign(rank, std::vector<std::size_t>(n_3 * two_l, 0));
    i22.clear();
    if (i_s) i22.assign(rank, std::vector<std::size_t>(n_3 * two_l, 1));
    for (std::size_t l = 0; l < rank; ++l) {
        i13[l] = r.get(bits_for(two_l));
        if (i13[l] >= two_l) throw std::out_of_range("parse type2: i13");
        for (std::size_t i = 0; i < two_l; ++i)
            i14[l][i] = i == i13[l] ? 7 : r.get(3);
        std::vector<std::size_t> reported;
        std::vector<bool> full_res;
        type2_report_sets(i14[l], i13[l], reported, full_res);
        for (std::size_t t = 0; t < n_3; ++t) {
            for (const std::size_t i : reported)
                i21[l][t * two_l + i] = full_res[i]
                                            ? r.get(bits_for(n_psk))
                                            : r.get(2) * psk_step;
            if (i_s)
                for (const std::size_t i : reported)
                    if (full_res[i]) i22[l][t * two_l + i] = r.get(1);
        }
    }
}

}  // namespace

Payload serialize_pmi(const PmiType2& pmi, const AntennaConfig& cfg,
                      const Type2Config& c) {
    c.validate(cfg);
    BitWriter w;
    w.put(pmi.q1, bits_for(cfg.o1));
    w.put(pmi.q2, bits_for(cfg.o2));
    w.put(pmi.i12, bits_for(binomial(cfg.n1 * cfg.n2, c.l_beams)));
    write_type2_layers(w, pmi.i13, pmi.i14, pmi.i21, pmi.i22, c.rank,
                       2 * c.l_beams, c.n_3, c.subband_amplitude, c.n_psk);
    return finish(w);
}

PmiType2 parse_type2(const Payload& p, const AntennaConfig& cfg,
                     const Type2Config& c) {
    c.validate(cfg);
    BitReader r(p.bytes);
    PmiType2 pmi;
    pmi.q1 = r.get(bits_for(cfg.o1));
    pmi.q2 = r.get(bits_for(cfg.o2));
    pmi.i12 = r.get(bits_for(binomial(cfg.n1 * cfg.n2, c.l_beams)));
    read_type2_layers(r, pmi.i13, pmi.i14, pmi.i21, pmi.i22, c.rank,
                      2 * c.l_beams, c.n_3, c.subband_amplitude, c.n_psk);
    return pmi;
}

Payload serialize_pmi(const PmiType2PS& pmi, const Type2PsConfig& c) {
    c.validate();
    BitWriter w;
    w.put(pmi.i11, bits_for(c.i11_range()));
    write_type2_layers(w, pmi.i13, pmi.i14, pmi.i21, pmi.i22, c.rank,
                       2 * c.l_beams, c.n_3, c.subband_amplitude, c.n_psk);
    return finish(w);
}

PmiType2PS parse_type2_ps(const Payload& p, const Type2PsConfig& c) {
    c.validate();
    BitReader r(p.bytes);
    PmiType2PS pmi;
    pmi.i11 = r.get(bits_for(c.i11_range()));
    read_type2_layers(r, pmi.i13, pmi.i14, pmi.i21, pmi.i22, c.rank,
                      2 * c.l_beams, c.n_3, c.subband_amplitude, c.n_psk);
    return pmi;
}

// ---- Enhanced Type II (shared tail for the PS variant) ------------------

namespace {

void write_etype2_layers(BitWriter& w,
                         const std::vector<std::vector<std::size_t>>& n3,
                         const std::vector<std::vector<std::uint8_t>>& i17,
                         const std::vector<std::size_t>& i18,
                         const std::vector<std::array<std::size_t, 2>>& i23,
                         const std::vector<std::vector<std::size_t>>& i24,
                         const std::vector<std::vector<std::size_t>>& i25,
                         std::size_t rank, std::size_t two_l, std::size_t m,
                         std::size_t n_3, std::size_t n_psk) {
    const std::size_t l_beams = two_l / 2;
    for (std::size_t l = 0; l < rank; ++l) {
        if (n3[l][0] != 0)
            throw std::invalid_argument("serialize etype2: n3 not remapped");
        const std::size_t strongest_pos = i18[l] * m;
        if (!i17[l][strongest_pos] || i24[l][strongest_pos] != 7 ||
            i25[l][strongest_pos] != 0 || i23[l][i18[l] / l_beams] != 15)
            throw std::invalid_argument(
                "serialize etype2: non-canonical strongest coefficient");
        for (std::size_t pos = 0; pos < two_l * m; ++pos)
            if (!i17[l][pos] && (i24[l][pos] != 0 || i25[l][pos] != 0))
                throw std::invalid_argument(
                    "serialize etype2: coefficient outside bitmap");
        for (std::size_t f = 1; f < m; ++f)  // bin 0 is implicit
            w.put(n3[l][f], bits_for(n_3));
        w.put(i18[l], bits_for(two_l));
        for (const auto b : i17[l]) w.put(b, 1);
        w.put(i23[l][1 - i18[l] / l_beams], 4);  // weaker polarization only
        for (std::size_t pos = 0; pos < two_l * m; ++pos)
            if (i17[l][pos] && pos != strongest_pos) w.put(i24[l][pos], 3);
        for (std::size_t pos = 0; pos < two_l * m; ++pos)
            if (i17[l][pos] && pos != strongest_pos)
                w.put(i25[l][pos], bits_for(n_psk));
    }
}

void read_etype2_layers(BitReader& r,
                        std::vector<std::vector<std::size_t>>& n3,
                        std::vector<std::vector<std::uint8_t>>& i17,
                        std::vector<std::size_t>& i18,
                        std::vector<std::array<std::size_t, 2>>& i23,
                        std::vector<std::vector<std::size_t>>& i24,
                        std::vector<std::vector<std::size_t>>& i25,
                        std::size_t rank, std::size_t two_l, std::size_t m,
                        std::size_t n_3, std::size_t n_psk) {
    const std::size_t l_beams = two_l / 2;
    n3.assign(rank, std::vector<std::size_t>(m, 0));
    i17.assign(rank, std::vector<std::uint8_t>(two_l * m, 0));
    i18.resize(rank);
    i23.assign(rank, {0, 0});
    i24.assign(rank, std::vector<std::size_t>(two_l * m, 0));
    i25.assign(rank, std::vector<std::size_t>(two_l * m, 0));
    for (std::size_t l = 0; l < rank; ++l) {
        for (std::size_t f = 1; f < m; ++f) n3[l][f] = r.get(bits_for(n_3));
        i18[l] = r.get(bits_for(two_l));
        if (i18[l] >= two_l) throw std::out_of_range("parse etype2: i18");
        for (auto& b : i17[l]) b = static_cast<std::uint8_t>(r.get(1));
        const std::size_t pol_star = i18[l] / l_beams;
        i23[l][pol_star] = 15;
        i23[l][1 - pol_star] = r.get(4);
        const std::size_t strongest_pos = i18[l] * m;
        if (!i17[l][strongest_pos])
            throw std::invalid_argument(
                "parse etype2: strongest coefficient missing from bitmap");
        i24[l][strongest_pos] = 7;
        for (std::size_t pos = 0; pos < two_l * m; ++pos)
            if (i17[l][pos] && pos != strongest_pos) i24[l][pos] = r.get(3);
        for (std::size_t pos = 0; pos < two_l * m; ++pos)
            if (i17[l][pos] && pos != strongest_pos)
                i25[l][pos] = r.get(bits_for(n_psk));
    }
}

}  // namespace

Payload serialize_pmi(const PmiEType2& pmi, const AntennaConfig& cfg,
                      const EType2Params& params, std::size_t rank,
                      std::size_t n_psk) {
    params.validate();
    BitWriter w;
    w.put(pmi.q1, bits_for(cfg.o1));
    w.put(pmi.q2, bits_for(cfg.o2));
    w.put(pmi.i12, bits_for(binomial(cfg.n1 * cfg.n2, params.l_beams)));
    write_etype2_layers(w, pmi.n3, pmi.i17, pmi.i18, pmi.i23, pmi.i24,
                        pmi.i25, rank, 2 * params.l_beams, params.m_v(),
                        params.n_3, n_psk);
    return finish(w);
}

PmiEType2 parse_etype2(const Payload& p, const AntennaConfig& cfg,
                       const EType2Params& params, std::size_t rank,
                       std::size_t n_psk) {
    params.validate();
    BitReader r(p.bytes);
    PmiEType2 pmi;
    pmi.q1 = r.get(bits_for(cfg.o1));
    pmi.q2 = r.get(bits_for(cfg.o2));
    pmi.i12 = r.get(bits_for(binomial(cfg.n1 * cfg.n2, params.l_beams)));
    read_etype2_layers(r, pmi.n3, pmi.i17, pmi.i18, pmi.i23, pmi.i24, pmi.i25,
                       rank, 2 * params.l_beams, params.m_v(), params.n_3,
                       n_psk);
    return pmi;
}

Payload serialize_pmi(const PmiEType2PS& pmi, const EType2PsConfig& c,
                      std::size_t rank, std::size_t n_psk) {
    c.validate();
    BitWriter w;
    w.put(pmi.i11, bits_for(c.i11_range()));
    write_etype2_layers(w, pmi.n3, pmi.i17, pmi.i18, pmi.i23, pmi.i24,
                        pmi.i25, rank, 2 * c.params.l_beams, c.params.m_v(),
                        c.params.n_3, n_psk);
    return finish(w);
}

PmiEType2PS parse_etype2_ps(const Payload& p, const EType2PsConfig& c,
                            std::size_t rank, std::size_t n_psk) {
    c.validate();
    BitReader r(p.bytes);
    PmiEType2PS pmi;
    pmi.i11 = r.get(bits_for(c.i11_range()));
    read_etype2_layers(r, pmi.n3, pmi.i17, pmi.i18, pmi.i23, pmi.i24, pmi.i25,
                       rank, 2 * c.params.l_beams, c.params.m_v(),
                       c.params.n_3, n_psk);
    return pmi;
}

// ---- Further Enhanced Type II Port Selection ----------------------------

Payload serialize_pmi(const PmiFeType2PS& pmi, const FeParams& params,
                      std::size_t rank, std::size_t n_psk) {
    params.validate();
    const std::size_t k = params.k_pairs();
    const std::size_t two_k = 2 * k;
    const std::size_t m = params.m;
    BitWriter w;
    w.put(pmi.port_choice, bits_for(binomial(params.n_ports / 2, k)));
    if (pmi.n3.size() != m || pmi.n3[0] != 0 ||
        (m == 2 && (pmi.n3[1] < 1 || pmi.n3[1] >= params.n_3)))
        throw std::invalid_argument("serialize fetype2ps: bad n3");
    if (m == 2) w.put(pmi.n3[1] - 1, bits_for(params.n_3 - 1));  // i16
    for (std::size_t l = 0; l < rank; ++l) {
        if (!pmi.i17[l][pmi.i18[l]] || pmi.i24[l][pmi.i18[l]] != 7 ||
            pmi.i25[l][pmi.i18[l]] != 0)
            throw std::invalid_argument(
                "serialize fetype2ps: non-canonical strongest coefficient");
        for (std::size_t pos = 0; pos < two_k * m; ++pos)
            if (!pmi.i17[l][pos] &&
                (pmi.i24[l][pos] != 0 || pmi.i25[l][pos] != 0))
                throw std::invalid_argument(
                    "serialize fetype2ps: coefficient outside bitmap");
        w.put(pmi.i18[l], bits_for(two_k * m));
        for (const auto b : pmi.i17[l]) w.put(b, 1);
        w.put(pmi.i23[l][1 - (pmi.i18[l] / m) / k], 4);
        for (std::size_t pos = 0; pos < two_k * m; ++pos)
            if (pmi.i17[l][pos] && pos != pmi.i18[l]) w.put(pmi.i24[l][pos], 3);
        for (std::size_t pos = 0; pos < two_k * m; ++pos)
            if (pmi.i17[l][pos] && pos != pmi.i18[l])
                w.put(pmi.i25[l][pos], bits_for(n_psk));
    }
    return finish(w);
}

PmiFeType2PS parse_fetype2ps(const Payload& p, const FeParams& params,
                             std::size_t rank, std::size_t n_psk) {
    params.validate();
    const std::size_t k = params.k_pairs();
    const std::size_t two_k = 2 * k;
    const std::size_t m = params.m;
    BitReader r(p.bytes);
    PmiFeType2PS pmi;
    pmi.port_choice = r.get(bits_for(binomial(params.n_ports / 2, k)));
    pmi.n3.assign(m, 0);
    if (m == 2) pmi.n3[1] = r.get(bits_for(params.n_3 - 1)) + 1;
    pmi.i17.assign(rank, std::vector<std::uint8_t>(two_k * m, 0));
    pmi.i18.resize(rank);
    pmi.i23.assign(rank, {0, 0});
    pmi.i24.assign(rank, std::vector<std::size_t>(two_k * m, 0));
    pmi.i25.assign(rank, std::vector<std::size_t>(two_k * m, 0));
    for (std::size_t l = 0; l < rank; ++l) {
        pmi.i18[l] = r.get(bits_for(two_k * m));
        if (pmi.i18[l] >= two_k * m)
            throw std::out_of_range("parse fetype2ps: i18");
        for (auto& b : pmi.i17[l]) b = static_cast<std::uint8_t>(r.get(1));
        if (!pmi.i17[l][pmi.i18[l]])
            throw std::invalid_argument(
                "parse fetype2ps: strongest coefficient missing from bitmap");
        const std::size_t pol_star = (pmi.i18[l] / m) / k;
        pmi.i23[l][pol_star] = 15;
        pmi.i23[l][1 - pol_star] = r.get(4);
        pmi.i24[l][pmi.i18[l]] = 7;
        for (std::size_t pos = 0; pos < two_k * m; ++pos)
            if (pmi.i17[l][pos] && pos != pmi.i18[l])
                pmi.i24[l][pos] = r.get(3);
        for (std::size_t pos = 0; pos < two_k * m; ++pos)
            if (pmi.i17[l][pos] && pos != pmi.i18[l])
                pmi.i25[l][pos] = r.get(bits_for(n_psk));
    }
    return pmi;
}

}  // namespace nrcb
