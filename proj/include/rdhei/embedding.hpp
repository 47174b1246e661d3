#pragma once

#include <cstdint>
#include <vector>

#include "rdhei/crypto.hpp"
#include "rdhei/wire.hpp"

namespace rdhei {

namespace detail {

// Frozen embedding order: planes ascending, each plane's payloadPositions
// as laid out (embeddable-NUB P cells, then free UB data cells).
inline std::vector<std::pair<int, std::uint32_t>> payload_position_sequence(const AuxLayout& layout) {
    std::vector<std::pair<int, std::uint32_t>> seq;
    seq.reserve(layout.totalPayloadBits);
    for (int p = 0; p < 8; ++p)
        for (std::uint32_t pos : layout.plane[p].payloadPositions)
            seq.emplace_back(p, pos);
    return seq;
}

inline std::uint32_t be32(const std::vector<std::uint8_t>& bytes, std::size_t off) {
    return (static_cast<std::uint32_t>(bytes[off]) << 24) |
           (static_cast<std::uint32_t>(bytes[off + 1]) << 16) |
           (static_cast<std::uint32_t>(bytes[off + 2]) << 8) |
           static_cast<std::uint32_t>(bytes[off + 3]);
}

} // namespace detail

// Data-hider stage: needs only the marked planes and Kd. The frame is a
// 32-bit payload bit count followed by the payload, encrypted as one Kd
// stream, written bit-by-bit into the payload positions.
inline PlaneSet embed(const PlaneSet& encrypted, const std::vector<std::uint8_t>& payload,
                      const KeyMaterial& kd) {
    const AuxPlan plan = parse_aux(encrypted);
    const std::uint64_t payloadBits = static_cast<std::uint64_t>(payload.size()) * 8;
    if (payloadBits > 0xFFFFFFFFull ||
        kPayloadPrefixBits + payloadBits > plan.layout.totalPayloadBits)
        fail("CapacityExceeded", std::to_string(payloadBits) + " payload bits + " +
                                     std::to_string(kPayloadPrefixBits) + " prefix exceed capacity " +
                                     std::to_string(plan.layout.totalPayloadBits));

    std::vector<std::uint8_t> frame;
    frame.reserve(4 + payload.size());
    frame.push_back(static_cast<std::uint8_t>((payloadBits >> 24) & 0xFF));
    frame.push_back(static_cast<std::uint8_t>((payloadBits >> 16) & 0xFF));
    frame.push_back(static_cast<std::uint8_t>((payloadBits >> 8) & 0xFF));
    frame.push_back(static_cast<std::uint8_t>(payloadBits & 0xFF));
    frame.insert(frame.end(), payload.begin(), payload.end());
    const BitSeq bits = bytes_to_bits(cipher_payload(std::move(frame), kd));

    const auto seq = detail::payload_position_sequence(plan.layout);
    PlaneSet out = encrypted;
    for (std::size_t i = 0; i < bits.size(); ++i)
        out.plane[seq[i].first][seq[i].second] = bits[i];
    return out;
}

inline std::vector<std::uint8_t> extract(const PlaneSet& marked, const KeyMaterial& kd) {
    const AuxPlan plan = parse_aux(marked);
    const auto seq = detail::payload_position_sequence(plan.layout);
    if (seq.size() < kPayloadPrefixBits)
        fail("MalformedAux", "payload capacity below the 32-bit prefix");

    BitSeq prefixBits;
    prefixBits.reserve(kPayloadPrefixBits);
    for (int i = 0; i < kPayloadPrefixBits; ++i)
        prefixBits.push_back(marked.plane[seq[i].first][seq[i].second]);
    std::vector<std::uint8_t> prefixBytes =
        cipher_payload(bits_to_bytes(prefixBits), kd); // stream offset 0
    const std::uint64_t payloadBits = detail::be32(prefixBytes, 0);

    if (payloadBits % 8 != 0 || kPayloadPrefixBits + payloadBits > seq.size())
        fail("PrefixOutOfRange", "decrypted prefix " + std::to_string(payloadBits) +
                                     " bits vs capacity " +
                                     std::to_string(seq.size() - kPayloadPrefixBits) +
                                     " (wrong key or corrupted image?)");

    const std::size_t bodyBytes = payloadBits / 8;
    BitSeq bodyBits;
    bodyBits.reserve(payloadBits);
    for (std::size_t i = 0; i < payloadBits; ++i)
        bodyBits.push_back(
            marked.plane[seq[kPayloadPrefixBits + i].first][seq[kPayloadPrefixBits + i].second]);
    const std::vector<std::uint8_t> stream = keystream_bytes(kd, kLabelPayload, 4 + bodyBytes);
    std::vector<std::uint8_t> body = bits_to_bytes(bodyBits);
    for (std::size_t i = 0; i < body.size(); ++i)
        body[i] ^= stream[4 + i];
    return body;
}

// Receiver with Ke: decrypt, restore every embeddable plane from its block
// predictors, undo the rearrangement, put the displaced header bits back,
// then invert the PE transform.
inline RasterImage recover(const PlaneSet& marked, const KeyMaterial& ke) {
    const AuxPlan plan = parse_aux(marked);
    PlaneSet planes = encrypt_planes(marked, ke, plan.layout);

    for (int p = 0; p < 8; ++p) {
        if (!plan.bundle.plane_flagged(p))
            continue;
        std::vector<std::uint8_t>& plane = planes.plane[p];
        const std::vector<std::uint8_t>& l2 = plan.l2[p];
        const BitSeq& nubFlags = plan.bundle.perPlane[p].nubFlags;
        const int blocks = static_cast<int>(l2.size());
        int nubCount = 0;
        for (std::uint8_t v : l2)
            nubCount += v;

        // Embeddable NUBs: each P cell equals the majority of its part
        // neighbors in the original block, by the embeddability rule.
        for (int slot = 0; slot < nubCount; ++slot) {
            if (nubFlags[slot])
                continue;
            for (int part = 0; part < 4; ++part) {
                int sum = 0;
                for (int c : kPartNeighborCells[part])
                    sum += plane[block_cell_index(planes.width, slot, c)];
                plane[block_cell_index(planes.width, slot, kPartPayloadCell[part])] =
                    sum >= 2 ? 1 : 0;
            }
        }
        // UBs: broadcast the untouched predictor cell over the data cells
        // (this also erases the already-parsed aux bits).
        for (int slot = nubCount; slot < blocks; ++slot) {
            const std::uint8_t v = plane[block_cell_index(planes.width, slot, kBlockCells - 1)];
            for (int cell = 0; cell < kUbDataBits; ++cell)
                plane[block_cell_index(planes.width, slot, cell)] = v;
        }

        plane = inverse_rearrange(plane, planes.width, planes.height, l2, p == 0);
    }

    const int rb = reserved_block_index(planes.width, planes.height);
    for (int cell = 0; cell < kBlockCells; ++cell)
        planes.plane[0][block_cell_index(planes.width, rb, cell)] =
            plan.bundle.global.headerBlockBits[cell];

    return reconstruct_image(planes_to_pe(planes, plan.l1));
}

} // namespace rdhei
