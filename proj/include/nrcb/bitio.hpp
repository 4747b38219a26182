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
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nrcb {

// width of a field whose values live in [0, range): ceil(log2(range))
inline std::size_t bits_for(std::uint64_t range) {
    if (range == 0) throw std::invalid_argument("bits_for: empty range");
    std::size_t bits = 0;
    std::uint64_t span = 1;
    while (span < range) {
        span <<= 1;
        ++bits;
    }
    return bits;
}

// MSB-first bit stream; the last byte is zero-padded.
class BitWriter {
  public:
    void put(std::uint64_t value, std::size_t width) {
        if (width > 64) throw std::invalid_argument("BitWriter: width");
        if (width < 64 && value >> width)
            throw std::invalid_argument("BitWriter: value exceeds field width");
        for (std::size_t i = width; i-- > 0;) {
            const std::size_t byte = bits_ / 8, off = 7 - bits_ % 8;
            if (byte == bytes_.size()) bytes_.push_back(0);
            bytes_[byte] |= static_cast<std::uint8_t>(((value >> i) & 1) << off);
            ++bits_;
        }
    }
    std::size_t bit_count() const { return bits_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bits_ = 0;
};

class BitReader {
  public:
    BitReader(const std::uint8_t* data, std::size_t n_bytes)
        : data_(data), n_bits_(8 * n_bytes) {}
    explicit BitReader(const std::vector<std::uint8_t>& bytes)
        : BitReader(bytes.data(), bytes.size()) {}

    std::uint64_t get(std::size_t width) {
        if (width > 64) throw std::invalid_argument("BitReader: width");
        if (pos_ + width > n_bits_)
            throw std::out_of_range("BitReader: read past end of payload");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < width; ++i) {
            const std::size_t byte = pos_ / 8, off = 7 - pos_ % 8;
            v = (v << 1) | ((data_[byte] >> off) & 1);
            ++pos_;
        }
        return v;
    }
    std::size_t position() const { return pos_; }

  private:
    const std::uint8_t* data_;
    std::size_t n_bits_;
    std::size_t pos_ = 0;
};

}  // namespace nrcb
