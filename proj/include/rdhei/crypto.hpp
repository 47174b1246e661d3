#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "rdhei/prediction.hpp"
#include "rdhei/wire.hpp"

namespace rdhei {

// 256-bit key parsed from a 64-hex-character string. The same structure
// serves both roles; domain separation happens in the stream labels, so an
// encryption key can never be replayed as a data-hiding key.
struct KeyMaterial {
    std::array<std::uint8_t, 32> bytes{};
};

inline constexpr std::string_view kLabelMatrix = "RDHEI-H";  // Eq.-(7) matrix, under Ke
inline constexpr std::string_view kLabelPayload = "RDHEI-P"; // payload stream, under Kd

inline KeyMaterial parse_key_hex(std::string_view hex) {
    if (hex.size() != 64)
        fail("MalformedKey", "key must be 64 hex characters, got " + std::to_string(hex.size()));
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        fail("MalformedKey", std::string("invalid hex character '") + c + "'");
    };
    KeyMaterial key;
    for (std::size_t i = 0; i < 32; ++i)
        key.bytes[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    return key;
}

namespace detail {

// ChaCha20 block function (RFC 8439). Deterministic across platforms;
// verified against the RFC test vector in the unit suite.
inline void chacha20_block(const std::array<std::uint8_t, 32>& key, std::uint32_t counter,
                           const std::array<std::uint8_t, 12>& nonce,
                           std::array<std::uint8_t, 64>& out) {
    auto load32 = [](const std::uint8_t* p) {
        return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
               (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
    };
    std::array<std::uint32_t, 16> state = {
        0x61707865u, 0x3320646eu, 0x79622d32u, 0x6b206574u,
        load32(key.data()),      load32(key.data() + 4),
        load32(key.data() + 8),  load32(key.data() + 12),
        load32(key.data() + 16), load32(key.data() + 20),
        load32(key.data() + 24), load32(key.data() + 28),
        counter,
        load32(nonce.data()),    load32(nonce.data() + 4), load32(nonce.data() + 8)};

    std::array<std::uint32_t, 16> x = state;
    auto rotl = [](std::uint32_t v, int n) { return (v << n) | (v >> (32 - n)); };
    auto quarter = [&](int a, int b, int c, int d) {
        x[a] += x[b]; x[d] ^= x[a]; x[d] = rotl(x[d], 16);
        x[c] += x[d]; x[b] ^= x[c]; x[b] = rotl(x[b], 12);
        x[a] += x[b]; x[d] ^= x[a]; x[d] = rotl(x[d], 8);
        x[c] += x[d]; x[b] ^= x[c]; x[b] = rotl(x[b], 7);
    };
    for (int round = 0; round < 10; ++round) {
        quarter(0, 4, 8, 12);
        quarter(1, 5, 9, 13);
        quarter(2, 6, 10, 14);
        quarter(3, 7, 11, 15);
        quarter(0, 5, 10, 15);
        quarter(1, 6, 11, 12);
        quarter(2, 7, 8, 13);
        quarter(3, 4, 9, 14);
    }
    for (int i = 0; i < 16; ++i) {
        const std::uint32_t v = x[i] + state[i];
        out[4 * i + 0] = static_cast<std::uint8_t>(v & 0xFF);
        out[4 * i + 1] = static_cast<std::uint8_t>((v >> 8) & 0xFF);
        out[4 * i + 2] = static_cast<std::uint8_t>((v >> 16) & 0xFF);
        out[4 * i + 3] = static_cast<std::uint8_t>((v >> 24) & 0xFF);
    }
}

inline std::array<std::uint8_t, 12> label_nonce(std::string_view label) {
    std::array<std::uint8_t, 12> nonce{};
    std::memcpy(nonce.data(), label.data(), std::min<std::size_t>(label.size(), 12));
    return nonce;
}

} // namespace detail

inline std::vector<std::uint8_t> keystream_bytes(const KeyMaterial& key, std::string_view label,
                                                 std::size_t n) {
    std::vector<std::uint8_t> out(n);
    const auto nonce = detail::label_nonce(label);
    std::array<std::uint8_t, 64> block;
    std::uint32_t counter = 0;
    for (std::size_t off = 0; off < n; off += 64) {
        detail::chacha20_block(key.bytes, counter++, nonce, block);
        std::memcpy(out.data() + off, block.data(), std::min<std::size_t>(64, n - off));
    }
    return out;
}

// The pseudo-random matrix H decomposed into bit planes: keystream byte
// (i,j) row-major, plane k = bit 8-k.
inline PlaneSet keystream_planes(const KeyMaterial& ke, int width, int height) {
    const std::vector<std::uint8_t> h =
        keystream_bytes(ke, kLabelMatrix, static_cast<std::size_t>(width) * height);
    PlaneSet out;
    out.allocate(width, height);
    for (std::size_t idx = 0; idx < h.size(); ++idx)
        for (int k = 1; k <= 8; ++k)
            out.plane[k - 1][idx] = static_cast<std::uint8_t>((h[idx] >> (8 - k)) & 1);
    return out;
}

// XOR every plane bit with the keyed matrix, leaving aux positions and the
// reserved header block untouched. Involution on the encrypted set and the
// identity on the excluded set.
inline PlaneSet encrypt_planes(const PlaneSet& planes, const KeyMaterial& ke,
                               const AuxLayout& layout) {
    const PlaneSet h = keystream_planes(ke, planes.width, planes.height);
    PlaneSet out = planes;
    const std::size_t n = static_cast<std::size_t>(planes.width) * planes.height;

    std::array<std::vector<bool>, 8> excluded;
    for (int p = 0; p < 8; ++p) {
        excluded[p].assign(n, false);
        for (std::uint32_t pos : layout.plane[p].auxPositions)
            excluded[p][pos] = true;
    }
    const int rb = reserved_block_index(planes.width, planes.height);
    for (int cell = 0; cell < kBlockCells; ++cell)
        excluded[0][block_cell_index(planes.width, rb, cell)] = true;

    for (int p = 0; p < 8; ++p)
        for (std::size_t idx = 0; idx < n; ++idx)
            if (!excluded[p][idx])
                out.plane[p][idx] ^= h.plane[p][idx];
    return out;
}

// Payload stream cipher under Kd; plain XOR, so applying it twice is the
// identity.
inline std::vector<std::uint8_t> cipher_payload(std::vector<std::uint8_t> data,
                                                const KeyMaterial& kd) {
    const std::vector<std::uint8_t> stream = keystream_bytes(kd, kLabelPayload, data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] ^= stream[i];
    return data;
}

} // namespace rdhei
