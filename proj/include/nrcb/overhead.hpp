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

#pragma once

#include "nrcb/etype2.hpp"
#include "nrcb/fetype2ps.hpp"
#include "nrcb/serialize.hpp"
#include "nrcb/type1.hpp"
#include "nrcb/type2.hpp"

#include <cstddef>
#include <string>
#include <vector>

// Feedback-overhead accounting: the indicator/coefficient counts of the
// standard comparison table plus the bit count of this library's canonical
// payload, and the gNB reconstruction complexity estimates.
//
// Counting conventions:
//  - i11 (including a (q1,q2) pair), i12, each per-layer scalar indicator
//    and each per-layer delay vector count as one indicator; bitmaps count
//    one per bit; each reported amplitude or phase coefficient counts one.
//  - Type II M_nz means coefficients actually reported per layer, i.e. the
//    nonzero wideband amplitudes excluding the per-layer strongest beam.
//    With subband amplitudes only the M_vr full-resolution coefficients'
//    subband fields are counted (the coarse 4-PSK phases of the remaining
//    reported beams ride along in the payload but not in the count).
//  - Enhanced Type II M_nz is the bitmap population including the
//    strongest coefficient, whose (amplitude, phase) pair is implicit.
//  - Further Enhanced branch N = 2 corresponds to one frequency basis
//    (no i16 indicator), N = 4 to two.

namespace nrcb {

enum class CodebookKind {
    TYPE1_SP,
    TYPE1_MP,
    TYPE2,
    TYPE2_PS,
    ETYPE2,
    ETYPE2_PS,
    FETYPE2_PS,
};

const char* kind_name(CodebookKind kind);
CodebookKind kind_from_name(const std::string& name);

struct OverheadParams {
    std::size_t rank = 1;
    std::size_t n_3 = 1;
    std::size_t l_beams = 0;
    std::size_t m_v = 0;
    std::vector<std::size_t> m_nz;  // per layer, kind-specific semantics
    std::vector<std::size_t> m_vr;  // per layer (Type II subband mode)
    bool subband_amplitude = false;
    std::size_t ng = 1, c_m = 1;  // Type I multi-panel branch
    std::size_t n_big = 2;        // Further Enhanced branch N
    std::size_t n1 = 0, n2 = 0;   // complexity inputs
    std::size_t d = 1;
};

std::size_t overhead_count(CodebookKind kind, const OverheadParams& p);
std::size_t complexity_estimate(CodebookKind kind, const OverheadParams& p);

struct OverheadReport {
    CodebookKind kind = CodebookKind::TYPE1_SP;
    std::size_t indicator_count = 0;
    std::size_t serialized_bits = 0;
    std::size_t complexity_ops = 0;
};

// Indicator census of an actual report under the conventions above; equals
// overhead_count for every kind whose accounting the table derives from
// transmitted fields (all but Type I multi-panel).
std::size_t count_report_fields(const PmiType1SP& pmi);
std::size_t count_report_fields(const PmiType2& pmi, const Type2Config& c);
std::size_t count_report_fields(const PmiType2PS& pmi, const Type2PsConfig& c);
std::size_t count_report_fields(const PmiEType2& pmi, const EType2Params& p,
                                std::size_t rank);
std::size_t count_report_fields(const PmiEType2PS& pmi,
                                const EType2PsConfig& c, std::size_t rank);
std::size_t count_report_fields(const PmiFeType2PS& pmi, const FeParams& p,
                                std::size_t rank);

// Full accounting (table count, payload bits, complexity) for a report.
OverheadReport report_for(const PmiType1SP& pmi, const AntennaConfig& cfg,
                          std::size_t rank, std::size_t n_3);
OverheadReport report_for(const PmiType1MP& pmi, const AntennaConfig& cfg,
                          std::size_t rank, std::size_t c_m, std::size_t n_3);
OverheadReport report_for(const PmiType2& pmi, const AntennaConfig& cfg,
                          const Type2Config& c);
OverheadReport report_for(const PmiType2PS& pmi, const Type2PsConfig& c);
OverheadReport report_for(const PmiEType2& pmi, const AntennaConfig& cfg,
                          const EType2Params& params, std::size_t rank,
                          std::size_t n_psk);
OverheadReport report_for(const PmiEType2PS& pmi, const EType2PsConfig& c,
                          std::size_t rank, std::size_t n_psk);
OverheadReport report_for(const PmiFeType2PS& pmi, const FeParams& params,
                          std::size_t rank, std::size_t n_psk);

}  // namespace nrcb
