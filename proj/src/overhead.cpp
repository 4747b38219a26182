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

#include "nrcb/overhead.hpp"

#include <numeric>
#include <stdexcept>

namespace nrcb {

const char* kind_name(CodebookKind kind) {
    switch (kind) {
        case CodebookKind::TYPE1_SP: return "type1sp";
        case CodebookKind::TYPE1_MP: return "type1mp";
        case CodebookKind::TYPE2: return "type2";
        case CodebookKind::TYPE2_PS: return "type2ps";
        case CodebookKind::ETYPE2: return "etype2";
        case CodebookKind::ETYPE2_PS: return "etype2ps";
        case CodebookKind::FETYPE2_PS: return "fetype2ps";
    }
    throw std::invalid_argument("kind_name: unknown kind");
}

CodebookKind kind_from_name(const std::string& name) {
    for (const auto kind :
         {CodebookKind::TYPE1_SP, CodebookKind::TYPE1_MP, CodebookKind::TYPE2,
          CodebookKind::TYPE2_PS, CodebookKind::ETYPE2, CodebookKind::ETYPE2_PS,
          CodebookKind::FETYPE2_PS})
        if (name == kind_name(kind)) return kind;
    throw std::invalid_argument("unknown codebook kind: " + name);
}

namespace {

std::size_t sum(const std::vector<std::size_t>& v) {
    return std::accumulate(v.begin(), v.end(), std::size_t{0});
}

void need_layers(const OverheadParams& p, bool need_vr = false) {
    if (p.m_nz.size() != p.rank)
        throw std::invalid_argument("overhead: per-layer m_nz required");
    if (need_vr && p.m_vr.size() != p.rank)
        throw std::invalid_argument("overhead: per-layer m_vr required");
}

}  // namespace

std::size_t overhead_count(CodebookKind kind, const OverheadParams& p) {
    if (p.rank == 0) throw std::invalid_argument("overhead: rank");
    if (p.n_3 == 0 && kind != CodebookKind::FETYPE2_PS)
        throw std::invalid_argument("overhead: n_3");
    switch (kind) {
        case CodebookKind::TYPE1_SP:
            return (p.rank <= 2 ? 2 : 3) + p.n_3;
        case CodebookKind::TYPE1_MP:
            if (p.ng == 2 && p.c_m == 1) return 6 + p.n_3;
            if (p.ng == 2 && p.c_m == 2) return 7 + p.n_3;
            if (p.ng == 4 && p.c_m == 1) return 8 + p.n_3;
            throw std::invalid_argument("overhead: invalid (ng, c_m) branch");
        case CodebookKind::TYPE2:
        case CodebookKind::TYPE2_PS: {
            const std::size_t base = kind == CodebookKind::TYPE2 ? 2 : 1;
            if (!p.subband_amplitude) {
                need_layers(p);
                return base + p.rank + (p.n_3 + 1) * sum(p.m_nz);
            }
            need_layers(p, true);
            std::size_t acc = base + p.rank;
            for (std::size_t l = 0; l < p.rank; ++l)
                acc += 2 * p.n_3 * p.m_vr[l] + p.m_nz[l];
            return acc;
        }
        case CodebookKind::ETYPE2:
        case CodebookKind::ETYPE2_PS: {
            need_layers(p);
            const std::size_t base =
                (kind == CodebookKind::ETYPE2 ? 2 : 1) + (p.n_3 > 19 ? 1 : 0);
            return base + p.rank + 2 * p.l_beams * p.m_v * p.rank +
                   2 * sum(p.m_nz);
        }
        case CodebookKind::FETYPE2_PS: {
            if (p.n_big != 2 && p.n_big != 4)
                throw std::invalid_argument("overhead: N must be 2 or 4");
            const std::size_t base = p.n_big == 2 ? 1 : 2;
            if (p.rank <= 2)
                return base + 4 * p.l_beams * p.m_v * p.rank;
            need_layers(p);
            return base + 2 * p.m_v * p.l_beams * p.rank + 2 * sum(p.m_nz);
        }
    }
    throw std::invalid_argument("overhead_count: unknown kind");
}

std::size_t complexity_estimate(CodebookKind kind, const OverheadParams& p) {
    switch (kind) {
        case CodebookKind::TYPE1_SP:
            return 2 * p.n1 * p.n2 * p.rank;
        case CodebookKind::TYPE1_MP:
            return 2 * p.ng * p.n1 * p.n2 * p.rank;
        case CodebookKind::TYPE2:
            return 2 * p.rank * p.l_beams * p.n1 * p.n2;
        case CodebookKind::TYPE2_PS:
            return 2 * p.rank * p.l_beams * p.d;
        case CodebookKind::ETYPE2:
            return 2 * p.rank * p.l_beams * p.m_v * p.n1 * p.n2;
        case CodebookKind::ETYPE2_PS:
            return 2 * p.rank * p.l_beams * p.m_v * p.d;
        case CodebookKind::FETYPE2_PS:
            return 2 * p.rank * p.l_beams * p.l_beams * p.m_v;
    }
    throw std::invalid_argument("complexity_estimate: unknown kind");
}

// ---- Census of actual reports -------------------------------------------

std::size_t count_report_fields(const PmiType1SP& pmi) {
    return 2 + pmi.i2.size();
}

namespace {

std::size_t count_type2_layers(const std::vector<std::size_t>& i13,
                               const std::vector<std::vector<std::size_t>>& i14,
                               std::size_t n_3, bool i_s) {
    std::size_t acc = 0;
    for (std::size_t l = 0; l < i13.size(); ++l) {
        std::vector<std::size_t> reported;
        std::vector<bool> full_res;
        type2_report_sets(i14[l], i13[l], reported, full_res);
        std::size_t m_vr = 0;
        for (const bool f : full_res) m_vr += f;
        acc += 1 + reported.size();  // i13 and the wideband amplitudes
        acc += i_s ? 2 * n_3 * m_vr : n_3 * reported.size();
    }
    return acc;
}

std::size_t count_etype2_layers(
    const std::vector<std::vector<std::uint8_t>>& i17) {
    // per layer: delay vector, strongest index, wideband amplitude pair,
    // one indicator per bitmap bit, and the non-implicit coefficient pairs
    std::size_t acc = 0;
    for (const auto& bm : i17) {
        std::size_t pop = 0;
        for (const auto b : bm) pop += b != 0;
        acc += 3 + bm.size() + 2 * (pop - 1);
    }
    return acc;
}

}  // namespace

std::size_t count_report_fields(const PmiType2& pmi, const Type2Config& c) {
    return 2 + count_type2_layers(pmi.i13, pmi.i14, c.n_3, c.subband_amplitude);
}

std::size_t count_report_fields(const PmiType2PS& pmi, const Type2PsConfig& c) {
    return 1 + count_type2_layers(pmi.i13, pmi.i14, c.n_3, c.subband_amplitude);
}

std::size_t count_report_fields(const PmiEType2& pmi, const EType2Params&,
                                std::size_t) {
    // the delay bins ride in the per-layer vector indicator; the extra
    // wideband window indicator of the N_3 > 19 table branch has no
    // transmitted counterpart here (bins are sent directly)
    return 2 + count_etype2_layers(pmi.i17);
}

std::size_t count_report_fields(const PmiEType2PS& pmi, const EType2PsConfig&,
                                std::size_t) {
    return 1 + count_etype2_layers(pmi.i17);
}

std::size_t count_report_fields(const PmiFeType2PS& pmi, const FeParams& p,
                                std::size_t rank) {
    std::size_t acc = 1 + (p.m == 2 ? 1 : 0);  // port choice and i16
    for (std::size_t l = 0; l < rank; ++l) {
        std::size_t pop = 0;
        for (const auto b : pmi.i17[l]) pop += b != 0;
        acc += 2 + 2 * (pop - 1);          // i18, i23 and coefficient pairs
        if (rank > 2) acc += pmi.i17[l].size();  // bitmap only when compressed
    }
    return acc;
}

// ---- Combined reports ----------------------------------------------------

OverheadReport report_for(const PmiType1SP& pmi, const AntennaConfig& cfg,
                          std::size_t rank, std::size_t n_3) {
    OverheadParams p;
    p.rank = rank;
    p.n_3 = n_3;
    p.n1 = cfg.n1;
    p.n2 = cfg.n2;
    OverheadReport r;
    r.kind = CodebookKind::TYPE1_SP;
    r.indicator_count = overhead_count(r.kind, p);
    r.serialized_bits = serialize_pmi(pmi, cfg, rank, n_3).bits;
    r.complexity_ops = complexity_estimate(r.kind, p);
    return r;
}

OverheadReport report_for(const PmiType1MP& pmi, const AntennaConfig& cfg,
                          std::size_t rank, std::size_t c_m, std::size_t n_3) {
    OverheadParams p;
    p.rank = rank;
    p.n_3 = n_3;
    p.ng = cfg.ng;
    p.c_m = c_m;
    p.n1 = cfg.n1;
    p.n2 = cfg.n2;
    OverheadReport r;
    r.kind = CodebookKind::TYPE1_MP;
    r.indicator_count = overhead_count(r.kind, p);
    r.serialized_bits = serialize_pmi(pmi, cfg, rank, c_m, n_3).bits;
    r.complexity_ops = complexity_estimate(r.kind, p);
    return r;
}

namespace {

void fill_type2_counts(const std::vector<std::size_t>& i13,
                       const std::vector<std::vector<std::size_t>>& i14,
                       OverheadParams& p) {
    for (std::size_t l = 0; l < i13.size(); ++l) {
        std::vector<std::size_t> reported;
        std::vector<bool> full_res;
        type2_report_sets(i14[l], i13[l], reported, full_res);
        std::size_t m_vr = 0;
        for (const bool f : full_res) m_vr += f;
        p.m_nz.push_back(reported.size());
        p.m_vr.push_back(m_vr);
    }
}

std::vector<std::size_t> bitmap_pops(
    const std::vector<std::vector<std::uint8_t>>& i17) {
    std::vector<std::size_t> pops;
    for (const auto& bm : i17) {
        std::size_t pop = 0;
        for (const auto b : bm) pop += b != 0;
        pops.push_back(pop);
    }
    return pops;
}

}  // namespace

OverheadReport report_for(const PmiType2& pmi, const AntennaConfig& cfg,
                          const Type2Config& c) {
    OverheadParams p;
    p.rank = c.rank;
    p.n_3 = c.n_3;
    p.l_beams = c.l_beams;
    p.subband_amplitude = c.subband_amplitude;
    p.n1 = cfg.n1;
    p.n2 = cfg.n2;
    fill_type2_counts(pmi.i13, pmi.i14, p);
    OverheadReport r;
    r.kind = CodebookKind::TYPE2;
    r.indicator_count = overhead_count(r.kind, p);
    r.serialized_bits = serialize_pmi(pmi, cfg, c).bits;
    r.complexity_ops = complexity_estimate(r.kind, p);
    return r;
}

OverheadReport report_for(const PmiType2PS& pmi, const Type2PsConfig& c) {
    OverheadParams p;
    p.rank = c.rank;
    p.n_3 = c.n_3;
    p.l_beams = c.l_beams;
    p.subband_amplitude = c.subband_amplitude;
    p.d = c.d;
    fill_type2_counts(pmi.i13, pmi.i14, p);
    OverheadReport r;
    r.kind = CodebookKind::TYPE2_PS;
    r.indicator_count = overhead_count(r.kind, p);
    r.serialized_bits = serialize_pmi(pmi, c).bits;
    r.complexity_ops = complexity_estimate(r.kind, p);
    return r;
}

OverheadReport report_for(const PmiEType2& pmi, const AntennaConfig& cfg,
                          const EType2Params& params, std::size_t rank,
                          std::size_t n_psk) {
    OverheadParams p;
    p.rank = rank;
    p.n_3 = params.n_3;
    p.l_beams = params.l_beams;
    p.m_v = params.m_v();
    p.m_nz = bitmap_pops(pmi.i17);
    p.n1 = cfg.n1;
    p.n2 = cfg.n2;
    OverheadReport r;
    r.kind = CodebookKind::ETYPE2;
    r.indicator_count = overhead_count(r.kind, p);
    r.serialized_bits = serialize_pmi(pmi, cfg, params, rank, n_psk).bits;
    r.complexity_ops = complexity_estimate(r.kind, p);
    return r;
}

OverheadReport report_for(const PmiEType2PS& pmi, const EType2PsConfig& c,
                          std::size_t rank, std::size_t n_psk) {
    OverheadParams p;
    p.rank = rank;
    p.n_3 = c.params.n_3;
    p.l_beams = c.params.l_beams;
    p.m_v = c.params.m_v();
    p.m_nz = bitmap_pops(pmi.i17);
    p.d = c.d;
    OverheadReport r;
    r.kind = CodebookKind::ETYPE2_PS;
    r.indicator_count = overhead_count(r.kind, p);
    r.serialized_bits = serialize_pmi(pmi, c, rank, n_psk).bits;
    r.complexity_ops = complexity_estimate(r.kind, p);
    return r;
}

OverheadReport report_for(const PmiFeType2PS& pmi, const FeParams& params,
                          std::size_t rank, std::size_t n_psk) {
    OverheadParams p;
    p.rank = rank;
    p.n_3 = params.n_3;
    p.l_beams = params.k_pairs();
    p.m_v = params.m;
    p.m_nz = bitmap_pops(pmi.i17);
    p.n_big = params.n_big;
    OverheadReport r;
    r.kind = CodebookKind::FETYPE2_PS;
    r.indicator_count = overhead_count(r.kind, p);
    r.serialized_bits = serialize_pmi(pmi, params, rank, n_psk).bits;
    r.complexity_ops = complexity_estimate(r.kind, p);
    return r;
}

}  // namespace nrcb
