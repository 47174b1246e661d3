#pragma once

#include <cstdint>

#include "rdhei/bits.hpp"

namespace rdhei {

// Adaptive binary arithmetic coder used to compress the sparse label maps
// L1 and L2. The coder is frozen as part of container version 1:
//
//   * 32-bit low/high interval registers,
//   * a single adaptive context with symbol counts initialized to (1,1),
//   * counts halved (rounding up, never below 1) once c0+c1 reaches 2^16,
//   * pending-bit (underflow) renormalization, CACM-style two-way
//     termination: one disambiguating bit plus outstanding underflow bits.
//
// Identical input yields identical output on every platform; the decoder
// consumes at most 64 phantom zero bits past the end of a well-formed code
// before declaring the stream corrupt.

namespace detail {

inline constexpr std::uint32_t kAcHalf = 0x80000000u;
inline constexpr std::uint32_t kAcQuarter = 0x40000000u;
inline constexpr std::uint32_t kAcThreeQuarter = 0xC0000000u;
inline constexpr std::uint32_t kAcMaxTotal = 1u << 16;

struct BitCounts {
    std::uint32_t c0 = 1;
    std::uint32_t c1 = 1;

    std::uint32_t total() const { return c0 + c1; }

    void update(std::uint8_t bit) {
        if (bit)
            ++c1;
        else
            ++c0;
        if (c0 + c1 >= kAcMaxTotal) {
            c0 = (c0 + 1) >> 1;
            c1 = (c1 + 1) >> 1;
        }
    }
};

} // namespace detail

inline BitSeq ac_encode(const BitSeq& bits) {
    if (bits.empty())
        return {};

    BitSeq out;
    detail::BitCounts model;
    std::uint32_t low = 0;
    std::uint32_t high = 0xFFFFFFFFu;
    std::uint64_t pending = 0;

    auto emit = [&](std::uint8_t bit) {
        out.push_back(bit);
        for (; pending > 0; --pending)
            out.push_back(static_cast<std::uint8_t>(bit ^ 1u));
    };

    for (std::uint8_t bit : bits) {
        const std::uint64_t range = static_cast<std::uint64_t>(high) - low + 1;
        const std::uint32_t split =
            low + static_cast<std::uint32_t>(range * model.c0 / model.total()) - 1;
        if (bit)
            low = split + 1;
        else
            high = split;

        for (;;) {
            if (high < detail::kAcHalf) {
                emit(0);
            } else if (low >= detail::kAcHalf) {
                emit(1);
                low -= detail::kAcHalf;
                high -= detail::kAcHalf;
            } else if (low >= detail::kAcQuarter && high < detail::kAcThreeQuarter) {
                ++pending;
                low -= detail::kAcQuarter;
                high -= detail::kAcQuarter;
            } else {
                break;
            }
            low <<= 1;
            high = (high << 1) | 1u;
        }
        model.update(bit);
    }

    ++pending;
    emit(low < detail::kAcQuarter ? 0 : 1);
    return out;
}

inline BitSeq ac_decode(const BitSeq& code, std::size_t n) {
    BitSeq out;
    if (n == 0)
        return out;
    out.reserve(n);

    detail::BitCounts model;
    std::uint32_t low = 0;
    std::uint32_t high = 0xFFFFFFFFu;
    std::uint32_t value = 0;
    std::size_t pos = 0;
    std::size_t phantom = 0;

    auto read_bit = [&]() -> std::uint32_t {
        if (pos < code.size())
            return code[pos++];
        if (++phantom > 64)
            fail("DecodeOverrun", "code exhausted after " + std::to_string(out.size()) +
                                      " of " + std::to_string(n) + " symbols");
        return 0;
    };

    for (int i = 0; i < 32; ++i)
        value = (value << 1) | read_bit();

    for (std::size_t s = 0; s < n; ++s) {
        const std::uint64_t range = static_cast<std::uint64_t>(high) - low + 1;
        const std::uint32_t split =
            low + static_cast<std::uint32_t>(range * model.c0 / model.total()) - 1;
        std::uint8_t bit;
        if (value <= split) {
            bit = 0;
            high = split;
        } else {
            bit = 1;
            low = split + 1;
        }

        for (;;) {
            if (high < detail::kAcHalf) {
                // nothing to subtract
            } else if (low >= detail::kAcHalf) {
                low -= detail::kAcHalf;
                high -= detail::kAcHalf;
                value -= detail::kAcHalf;
            } else if (low >= detail::kAcQuarter && high < detail::kAcThreeQuarter) {
                low -= detail::kAcQuarter;
                high -= detail::kAcQuarter;
                value -= detail::kAcQuarter;
            } else {
                break;
            }
            low <<= 1;
            high = (high << 1) | 1u;
            value = (value << 1) | read_bit();
        }
        model.update(bit);
        out.push_back(bit);
    }
    return out;
}

} // namespace rdhei
