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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nrcb {

// Exact rational for the configuration fractions (p_v, beta, alpha); the
// derived quantities ceil(p_v*n_3/r) and floor(2*L*M*rank*beta) must not
// go through floating point.
struct Rational {
    std::size_t num = 0;
    std::size_t den = 1;

    constexpr bool operator==(const Rational& o) const {
        return num * o.den == o.num * den;
    }

    std::size_t ceil_mul(std::size_t x, std::size_t extra_den = 1) const {
        if (den == 0 || extra_den == 0)
            throw std::invalid_argument("Rational: zero denominator");
        const std::size_t d = den * extra_den;
        return (num * x + d - 1) / d;
    }
    std::size_t floor_mul(std::size_t x) const {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        return num * x / den;
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    static Rational parse(const std::string& s) {  // "3/4", "1" or "0.25"
        const auto slash = s.find('/');
        if (slash != std::string::npos) {
            const std::size_t n = std::stoull(s.substr(0, slash));
            const std::size_t d = std::stoull(s.substr(slash + 1));
            if (d == 0) throw std::invalid_argument("Rational: zero denominator");
            return {n, d};
        }
        const auto dot = s.find('.');
        if (dot == std::string::npos) return {std::stoull(s), 1};
        const std::string frac = s.substr(dot + 1);
        std::size_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        return {std::stoull(s.substr(0, dot)) * den + std::stoull(frac), den};
    }

    std::string str() const {
        return den == 1 ? std::to_string(num)
                        : std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace nrcb
