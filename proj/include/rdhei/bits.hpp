#pragma once

#include <cstdint>
#include <vector>

#include "rdhei/error.hpp"

namespace rdhei {

// Unpacked bit sequence, one byte per bit (values 0/1). Sizes here are small
// (label maps, aux records), so the loose representation keeps the bit-level
// wire code readable.
using BitSeq = std::vector<std::uint8_t>;

inline void append_uint(BitSeq& out, std::uint64_t value, int width) {
    for (int b = width - 1; b >= 0; --b)
        out.push_back(static_cast<std::uint8_t>((value >> b) & 1u));
}

inline void append_bits(BitSeq& out, const BitSeq& bits) {
    out.insert(out.end(), bits.begin(), bits.end());
}

// Sequential reader over a BitSeq; all multi-bit integers are MSB-first.
class BitReader {
public:
    explicit BitReader(const BitSeq& bits) : bits_(&bits) {}

    bool exhausted() const { return pos_ >= bits_->size(); }
    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bits_->size() - pos_; }

    std::uint8_t bit() {
        if (pos_ >= bits_->size())
            fail("MalformedAux", "bit stream exhausted");
        return (*bits_)[pos_++];
    }

    std::uint64_t uint(int width) {
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i)
            v = (v << 1) | bit();
        return v;
    }

    BitSeq take(std::size_t n) {
        if (remaining() < n)
            fail("MalformedAux", "bit stream exhausted");
        BitSeq out(bits_->begin() + static_cast<std::ptrdiff_t>(pos_),
                   bits_->begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return out;
    }

private:
    const BitSeq* bits_;
    std::size_t pos_ = 0;
};

inline BitSeq bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
    BitSeq out;
    out.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes)
        append_uint(out, b, 8);
    return out;
}

inline std::vector<std::uint8_t> bits_to_bytes(const BitSeq& bits) {
    if (bits.size() % 8 != 0)
        fail("MalformedAux", "bit count not a multiple of 8");
    std::vector<std::uint8_t> out(bits.size() / 8);
    for (std::size_t i = 0; i < bits.size(); ++i)
        out[i / 8] = static_cast<std::uint8_t>((out[i / 8] << 1) | bits[i]);
    return out;
}

} // namespace rdhei
