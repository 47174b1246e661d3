#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rdhei/arith.hpp"
#include "rdhei/bits.hpp"
#include "rdhei/blocks.hpp"
#include "rdhei/prediction.hpp"

namespace rdhei {

// Container version 1 auxiliary-data layout.
//
// Reserved header block: the last spatial 4x4 block of the MSB plane is
// excluded from classification, rearrangement and encryption. Its 16 cells
// hold, in local raster order:
//   cells 0..7  = plane flags (cell p-1 = 1 iff plane p is rearranged and
//                 carries an aux record)
//   cells 8..15 = container version byte, MSB first
// The 16 displaced original bits travel in the global record.
//
// Aux addressing: each flagged plane stores its record in UB data cells
// taken from the plane's end backwards - blocks in reverse scan order
// (skipping the reserved block on the MSB plane), cells 14..0 within each
// block, cell 15 (the UB predictor) never used. Because rearrangement packs
// UBs at the tail, the address sequence depends only on the plane
// dimensions, so a receiver can locate aux before decoding L2.
//
// Per-plane record (bit stream, integers MSB first):
//   mode(1) l2Len(16) l2Coded(l2Len) nubFlags(popcount of decoded L2)
// mode 0 = arithmetic-coded map, mode 1 = raw map (chosen per map, raw wins
// ties so records never expand pathologically).
//
// Global record, appended to the first flagged plane's record:
//   headerBlockBits(16) l1Mode(1) l1Len(32) l1Coded(l1Len)
//
// A plane is flagged embeddable iff its 15*ubCount UB data bits can hold its
// record (plus the global record if no earlier plane is flagged).

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr int kPlaneRecordHeaderBits = 17; // mode(1) + l2Len(16)
inline constexpr int kGlobalFixedBits = 16 + 1 + 32;
inline constexpr int kPayloadPrefixBits = 32;

struct PerPlaneRecord {
    std::uint8_t mode = 0;
    std::uint16_t l2Len = 0;
    BitSeq l2Coded;
    BitSeq nubFlags;

    bool operator==(const PerPlaneRecord&) const = default;
};

struct GlobalRecord {
    std::array<std::uint8_t, 16> headerBlockBits{};
    std::uint8_t l1Mode = 0;
    std::uint32_t l1Len = 0;
    BitSeq l1Coded;

    bool operator==(const GlobalRecord&) const = default;
};

struct AuxBundle {
    std::uint8_t planeFlags = 0;
    std::uint8_t version = kContainerVersion;
    std::array<PerPlaneRecord, 8> perPlane; // meaningful where flagged
    GlobalRecord global;
    int firstEmbeddable = -1;

    bool plane_flagged(int planeIdx) const { return (planeFlags >> planeIdx) & 1; }

    bool operator==(const AuxBundle&) const = default;
};

struct PlaneLayout {
    bool embeddable = false;
    std::uint32_t auxBits = 0;
    std::vector<std::uint32_t> auxPositions;     // aux stream order
    std::vector<std::uint32_t> payloadPositions; // NUB P cells, then free UB data cells
    std::uint64_t nubPayloadBits = 0;
    std::uint64_t ubPayloadBits = 0;
};

struct AuxLayout {
    int width = 0;
    int height = 0;
    std::array<PlaneLayout, 8> plane;
    std::uint64_t totalPayloadBits = 0;
};

// Bundle plus decoded label maps; what both the planner and the parser hand
// to the embedding/recovery stages.
struct AuxPlan {
    AuxBundle bundle;
    AuxLayout layout;
    std::array<std::vector<std::uint8_t>, 8> l2;
    std::vector<std::uint8_t> l1;
};

inline int classifiable_blocks(int width, int height, int planeIdx) {
    return (width / kBlockSize) * (height / kBlockSize) - (planeIdx == 0 ? 1 : 0);
}

inline int reserved_block_index(int width, int height) {
    return (width / kBlockSize) * (height / kBlockSize) - 1;
}

// First `count` plane-linear indices of the backward aux address sequence.
inline std::vector<std::uint32_t> aux_positions(int width, int height, int planeIdx,
                                                std::size_t count) {
    const int blocks = classifiable_blocks(width, height, planeIdx);
    if (count > static_cast<std::size_t>(blocks) * kUbDataBits)
        fail("LayoutMismatch", "aux stream of " + std::to_string(count) +
                                   " bits exceeds plane capacity");
    std::vector<std::uint32_t> out;
    out.reserve(count);
    for (int b = blocks - 1; b >= 0 && out.size() < count; --b)
        for (int cell = kUbDataBits - 1; cell >= 0 && out.size() < count; --cell)
            out.push_back(block_cell_index(width, b, cell));
    return out;
}

namespace detail {

struct CodedMap {
    std::uint8_t mode;
    BitSeq stored;
};

inline CodedMap encode_map(const BitSeq& map) {
    BitSeq coded = ac_encode(map);
    if (coded.size() >= map.size())
        return {1, map};
    return {0, std::move(coded)};
}

inline BitSeq decode_map(std::uint8_t mode, const BitSeq& stored, std::size_t n) {
    if (mode == 1) {
        if (stored.size() != n)
            fail("MalformedAux", "raw map length mismatch");
        return stored;
    }
    try {
        return ac_decode(stored, n);
    } catch (const Error& e) {
        fail("MalformedAux", std::string("label map decode failed (") + e.what() + ")");
    }
}

inline BitSeq record_bits(const PerPlaneRecord& rec) {
    BitSeq out;
    out.push_back(rec.mode);
    append_uint(out, rec.l2Len, 16);
    append_bits(out, rec.l2Coded);
    append_bits(out, rec.nubFlags);
    return out;
}

inline BitSeq global_bits(const GlobalRecord& g) {
    BitSeq out;
    for (std::uint8_t b : g.headerBlockBits)
        out.push_back(b);
    out.push_back(g.l1Mode);
    append_uint(out, g.l1Len, 32);
    append_bits(out, g.l1Coded);
    return out;
}

// Payload positions of one embeddable plane, over the rearranged plane:
// the four P cells of every embeddable NUB (slots in scan order, parts in
// quadrant order), then UB data cells in forward block order, skipping the
// cells the aux stream occupies.
inline PlaneLayout make_plane_layout(int width, int height, int planeIdx,
                                     const std::vector<std::uint8_t>& l2, const BitSeq& nubFlags,
                                     std::uint32_t auxBits) {
    PlaneLayout out;
    out.embeddable = true;
    out.auxBits = auxBits;
    out.auxPositions = aux_positions(width, height, planeIdx, auxBits);

    std::vector<bool> auxMask(static_cast<std::size_t>(width) * height, false);
    for (std::uint32_t pos : out.auxPositions)
        auxMask[pos] = true;

    const int blocks = static_cast<int>(l2.size());
    int nubCount = 0;
    for (std::uint8_t v : l2)
        nubCount += v;

    for (int slot = 0; slot < nubCount; ++slot) {
        if (nubFlags[slot])
            continue;
        for (int part = 0; part < 4; ++part)
            out.payloadPositions.push_back(block_cell_index(width, slot, kPartPayloadCell[part]));
    }
    out.nubPayloadBits = out.payloadPositions.size();

    for (int slot = nubCount; slot < blocks; ++slot) {
        for (int cell = 0; cell < kUbDataBits; ++cell) {
            const std::uint32_t pos = block_cell_index(width, slot, cell);
            if (!auxMask[pos])
                out.payloadPositions.push_back(pos);
        }
    }
    out.ubPayloadBits = out.payloadPositions.size() - out.nubPayloadBits;
    return out;
}

} // namespace detail

// Decide which planes carry aux, assemble the bundle and the full position
// layout. `l1` is the overflow map over all pixels, `headerBits` the
// original contents of the reserved block.
inline AuxPlan plan_layout(const std::array<BlockModel, 8>& models,
                           const std::vector<std::uint8_t>& l1,
                           const std::array<std::uint8_t, 16>& headerBits, int width, int height) {
    AuxPlan plan;
    plan.layout.width = width;
    plan.layout.height = height;
    plan.l1.assign(l1.begin(), l1.end());

    const detail::CodedMap l1Coded = detail::encode_map(plan.l1);
    plan.bundle.global.headerBlockBits = headerBits;
    plan.bundle.global.l1Mode = l1Coded.mode;
    plan.bundle.global.l1Len = static_cast<std::uint32_t>(l1Coded.stored.size());
    plan.bundle.global.l1Coded = l1Coded.stored;
    const std::size_t globalSize = kGlobalFixedBits + l1Coded.stored.size();

    for (int p = 0; p < 8; ++p) {
        const BlockModel& m = models[p];
        plan.l2[p].assign(m.l2.begin(), m.l2.end());

        const detail::CodedMap l2Coded = detail::encode_map(plan.l2[p]);
        const std::size_t recordSize =
            kPlaneRecordHeaderBits + l2Coded.stored.size() + m.nubFlags.size();
        const std::size_t need =
            recordSize + (plan.bundle.firstEmbeddable < 0 ? globalSize : 0);
        const std::size_t ubCapacity = static_cast<std::size_t>(m.ubCount) * kUbDataBits;
        if (ubCapacity < need)
            continue;

        PerPlaneRecord& rec = plan.bundle.perPlane[p];
        rec.mode = l2Coded.mode;
        rec.l2Len = static_cast<std::uint16_t>(l2Coded.stored.size());
        rec.l2Coded = l2Coded.stored;
        rec.nubFlags.assign(m.nubFlags.begin(), m.nubFlags.end());

        plan.bundle.planeFlags |= static_cast<std::uint8_t>(1u << p);
        if (plan.bundle.firstEmbeddable < 0)
            plan.bundle.firstEmbeddable = p;

        plan.layout.plane[p] = detail::make_plane_layout(
            width, height, p, plan.l2[p], rec.nubFlags, static_cast<std::uint32_t>(need));
        plan.layout.totalPayloadBits += plan.layout.plane[p].payloadPositions.size();
    }

    if (plan.bundle.firstEmbeddable < 0)
        fail("CapacityError", "no plane can carry its aux record plus the global record");
    return plan;
}

// Overwrite the reserved block with flags+version and write each flagged
// plane's record into its aux positions. Pure: planes in, planes out.
inline PlaneSet write_aux(const PlaneSet& rearranged, const AuxBundle& bundle,
                          const AuxLayout& layout) {
    PlaneSet out = rearranged;
    const int rb = reserved_block_index(out.width, out.height);
    for (int cell = 0; cell < 8; ++cell)
        out.plane[0][block_cell_index(out.width, rb, cell)] =
            static_cast<std::uint8_t>((bundle.planeFlags >> cell) & 1);
    for (int cell = 8; cell < 16; ++cell)
        out.plane[0][block_cell_index(out.width, rb, cell)] =
            static_cast<std::uint8_t>((bundle.version >> (15 - cell)) & 1);

    for (int p = 0; p < 8; ++p) {
        if (!bundle.plane_flagged(p))
            continue;
        BitSeq stream = detail::record_bits(bundle.perPlane[p]);
        if (p == bundle.firstEmbeddable)
            append_bits(stream, detail::global_bits(bundle.global));
        const PlaneLayout& pl = layout.plane[p];
        if (stream.size() != pl.auxPositions.size())
            fail("LayoutMismatch", "plane " + std::to_string(p + 1) + " record is " +
                                       std::to_string(stream.size()) + " bits, layout expects " +
                                       std::to_string(pl.auxPositions.size()));
        for (std::size_t i = 0; i < stream.size(); ++i)
            out.plane[p][pl.auxPositions[i]] = stream[i];
    }
    return out;
}

namespace detail {

// Lazy reader over a plane's backward aux address sequence.
class AuxStreamReader {
public:
    AuxStreamReader(const std::vector<std::uint8_t>& plane, int width, int height, int planeIdx)
        : plane_(&plane), width_(width),
          limit_(static_cast<std::size_t>(classifiable_blocks(width, height, planeIdx)) *
                 kUbDataBits) {
        blocks_ = classifiable_blocks(width, height, planeIdx);
    }

    std::size_t consumed() const { return pos_; }

    std::uint8_t bit() {
        if (pos_ >= limit_)
            fail("MalformedAux", "aux stream exceeds plane capacity");
        const std::size_t i = pos_++;
        const int b = blocks_ - 1 - static_cast<int>(i / kUbDataBits);
        const int cell = kUbDataBits - 1 - static_cast<int>(i % kUbDataBits);
        return (*plane_)[block_cell_index(width_, b, cell)];
    }

    std::uint64_t uint(int widthBits) {
        std::uint64_t v = 0;
        for (int i = 0; i < widthBits; ++i)
            v = (v << 1) | bit();
        return v;
    }

    BitSeq take(std::size_t n) {
        BitSeq out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(bit());
        return out;
    }

private:
    const std::vector<std::uint8_t>* plane_;
    int width_;
    int blocks_;
    std::size_t limit_;
    std::size_t pos_ = 0;
};

} // namespace detail

// Recover bundle + layout from the planes alone (no keys involved; aux and
// the reserved block are plaintext by construction).
inline AuxPlan parse_aux(const PlaneSet& planes) {
    AuxPlan plan;
    plan.layout.width = planes.width;
    plan.layout.height = planes.height;

    const int rb = reserved_block_index(planes.width, planes.height);
    std::uint8_t flags = 0;
    for (int cell = 0; cell < 8; ++cell)
        flags |= static_cast<std::uint8_t>(planes.plane[0][block_cell_index(planes.width, rb, cell)]
                                           << cell);
    std::uint8_t version = 0;
    for (int cell = 8; cell < 16; ++cell)
        version = static_cast<std::uint8_t>(
            (version << 1) | planes.plane[0][block_cell_index(planes.width, rb, cell)]);
    if (version != kContainerVersion)
        fail("VersionMismatch", "container version " + std::to_string(version) + ", expected " +
                                    std::to_string(kContainerVersion));
    if (flags == 0)
        fail("MalformedAux", "no plane is flagged as carrying auxiliary data");

    plan.bundle.planeFlags = flags;
    plan.bundle.version = version;

    for (int p = 0; p < 8; ++p) {
        if (!plan.bundle.plane_flagged(p))
            continue;
        detail::AuxStreamReader reader(planes.plane[p], planes.width, planes.height, p);
        PerPlaneRecord& rec = plan.bundle.perPlane[p];
        rec.mode = reader.bit();
        rec.l2Len = static_cast<std::uint16_t>(reader.uint(16));
        rec.l2Coded = reader.take(rec.l2Len);

        const int blocks = classifiable_blocks(planes.width, planes.height, p);
        plan.l2[p] = detail::decode_map(rec.mode, rec.l2Coded, static_cast<std::size_t>(blocks));
        std::size_t nubCount = 0;
        for (std::uint8_t v : plan.l2[p])
            nubCount += v;
        rec.nubFlags = reader.take(nubCount);

        if (plan.bundle.firstEmbeddable < 0) {
            plan.bundle.firstEmbeddable = p;
            GlobalRecord& g = plan.bundle.global;
            for (auto& b : g.headerBlockBits)
                b = reader.bit();
            g.l1Mode = reader.bit();
            g.l1Len = static_cast<std::uint32_t>(reader.uint(32));
            g.l1Coded = reader.take(g.l1Len);
            plan.l1 = detail::decode_map(g.l1Mode, g.l1Coded,
                                         static_cast<std::size_t>(planes.width) * planes.height);
        }

        const std::size_t auxBits = reader.consumed();
        const std::size_t ubCount = plan.l2[p].size() - nubCount;
        if (auxBits > ubCount * kUbDataBits)
            fail("MalformedAux", "plane " + std::to_string(p + 1) +
                                     " aux record does not fit its UB region");
        plan.layout.plane[p] = detail::make_plane_layout(planes.width, planes.height, p, plan.l2[p],
                                                         rec.nubFlags,
                                                         static_cast<std::uint32_t>(auxBits));
        plan.layout.totalPayloadBits += plan.layout.plane[p].payloadPositions.size();
    }
    return plan;
}

} // namespace rdhei
