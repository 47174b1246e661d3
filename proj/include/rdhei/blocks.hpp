#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "rdhei/bits.hpp"

namespace rdhei {

// Fixed 4x4 block geometry. Block scan order is row-major over the block
// grid; local positions are row-major within a block (0..15, position 15 is
// the UB predictor cell). Each block splits into four 2x2 parts; the part's
// payload cell P is the cell adjacent to the block center, its three
// remaining cells are the prediction neighbors.
inline constexpr int kBlockSize = 4;
inline constexpr int kBlockCells = 16;
inline constexpr int kUbDataBits = 15;      // all cells except the predictor
inline constexpr int kNubPayloadBits = 4;   // one P per part

// Local indices of the P cells, part order: top-left, top-right,
// bottom-left, bottom-right quadrant.
inline constexpr std::array<int, 4> kPartPayloadCell = {5, 6, 9, 10};
inline constexpr std::array<std::array<int, 3>, 4> kPartNeighborCells = {{
    {0, 1, 4},    // TL: cells around P=(1,1)
    {2, 3, 7},    // TR: cells around P=(1,2)
    {8, 12, 13},  // BL: cells around P=(2,1)
    {11, 14, 15}, // BR: cells around P=(2,2)
}};

// Per-plane block classification. l2 and permutation cover the classifiable
// blocks only (the MSB plane's reserved last block is excluded upstream).
struct BlockModel {
    int blockCols = 0;
    int blockRows = 0;
    bool reservedLast = false;            // MSB plane: last spatial block excluded
    std::vector<std::uint8_t> l2;         // scan order, 1 = NUB
    std::vector<std::uint8_t> nubFlags;   // NUB scan order, 0 = embeddable
    std::vector<std::uint32_t> permutation; // slot -> source block (NUBs first, stable)
    int nubCount = 0;
    int ubCount = 0;
    int embeddableNubCount = 0;

    int classifiable_blocks() const { return blockCols * blockRows - (reservedLast ? 1 : 0); }
};

// Plane-linear index of local cell `cell` of block `b` (scan order).
inline std::uint32_t block_cell_index(int width, int b, int cell) {
    const int blockCols = width / kBlockSize;
    const int br = b / blockCols;
    const int bc = b % blockCols;
    const int lr = cell / kBlockSize;
    const int lc = cell % kBlockSize;
    return static_cast<std::uint32_t>((br * kBlockSize + lr) * width + bc * kBlockSize + lc);
}

inline bool block_is_uniform(const std::vector<std::uint8_t>& plane, int width, int b) {
    const std::uint8_t first = plane[block_cell_index(width, b, 0)];
    for (int cell = 1; cell < kBlockCells; ++cell)
        if (plane[block_cell_index(width, b, cell)] != first)
            return false;
    return true;
}

// Embeddability of one NUB: every part's P cell must equal the majority of
// its three neighbors (P=0 with neighbor sum <= 1, P=1 with sum >= 2).
// Returns the block flag (0 = embeddable) plus per-part verdicts.
struct NubVerdict {
    std::uint8_t flag = 1;
    std::array<bool, 4> partPasses{};
};

inline NubVerdict nub_embeddable(const std::array<std::uint8_t, kBlockCells>& block) {
    NubVerdict v;
    bool all = true;
    for (int part = 0; part < 4; ++part) {
        const int p = block[kPartPayloadCell[part]];
        int sum = 0;
        for (int c : kPartNeighborCells[part])
            sum += block[c];
        const bool pass = p ? (sum >= 2) : (sum <= 1);
        v.partPasses[part] = pass;
        all = all && pass;
    }
    v.flag = all ? 0 : 1;
    return v;
}

inline std::array<std::uint8_t, kBlockCells> extract_block(const std::vector<std::uint8_t>& plane,
                                                           int width, int b) {
    std::array<std::uint8_t, kBlockCells> out;
    for (int cell = 0; cell < kBlockCells; ++cell)
        out[cell] = plane[block_cell_index(width, b, cell)];
    return out;
}

inline BlockModel classify_blocks(const std::vector<std::uint8_t>& plane, int width, int height,
                                  bool reserveLast) {
    BlockModel m;
    m.blockCols = width / kBlockSize;
    m.blockRows = height / kBlockSize;
    m.reservedLast = reserveLast;
    const int blocks = m.classifiable_blocks();
    m.l2.resize(blocks);

    std::vector<std::uint32_t> nubs, ubs;
    for (int b = 0; b < blocks; ++b) {
        if (block_is_uniform(plane, width, b)) {
            m.l2[b] = 0;
            ubs.push_back(static_cast<std::uint32_t>(b));
        } else {
            m.l2[b] = 1;
            nubs.push_back(static_cast<std::uint32_t>(b));
            m.nubFlags.push_back(nub_embeddable(extract_block(plane, width, b)).flag);
        }
    }
    m.nubCount = static_cast<int>(nubs.size());
    m.ubCount = static_cast<int>(ubs.size());
    for (std::uint8_t f : m.nubFlags)
        if (f == 0)
            ++m.embeddableNubCount;

    m.permutation = std::move(nubs);
    m.permutation.insert(m.permutation.end(), ubs.begin(), ubs.end());
    return m;
}

// NUBs-first block permutation; cell contents are untouched.
inline std::vector<std::uint8_t> rearrange(const std::vector<std::uint8_t>& plane, int width,
                                           const BlockModel& m) {
    std::vector<std::uint8_t> out = plane;
    const int blocks = m.classifiable_blocks();
    for (int slot = 0; slot < blocks; ++slot) {
        const std::uint32_t src = m.permutation[slot];
        if (static_cast<int>(src) == slot)
            continue;
        for (int cell = 0; cell < kBlockCells; ++cell)
            out[block_cell_index(width, slot, cell)] = plane[block_cell_index(width, src, cell)];
    }
    return out;
}

inline std::vector<std::uint32_t> permutation_from_l2(const std::vector<std::uint8_t>& l2) {
    std::vector<std::uint32_t> nubs, ubs;
    for (std::uint32_t b = 0; b < l2.size(); ++b)
        (l2[b] ? nubs : ubs).push_back(b);
    nubs.insert(nubs.end(), ubs.begin(), ubs.end());
    return nubs;
}

inline std::vector<std::uint8_t> inverse_rearrange(const std::vector<std::uint8_t>& plane, int width,
                                                   int height, const std::vector<std::uint8_t>& l2,
                                                   bool reservedLast) {
    const int blocks = (width / kBlockSize) * (height / kBlockSize) - (reservedLast ? 1 : 0);
    if (static_cast<int>(l2.size()) != blocks)
        fail("LabelLengthMismatch", "L2 has " + std::to_string(l2.size()) + " labels for " +
                                        std::to_string(blocks) + " blocks");
    const std::vector<std::uint32_t> perm = permutation_from_l2(l2);
    std::vector<std::uint8_t> out = plane;
    for (int slot = 0; slot < blocks; ++slot) {
        const std::uint32_t dst = perm[slot];
        if (static_cast<int>(dst) == slot)
            continue;
        for (int cell = 0; cell < kBlockCells; ++cell)
            out[block_cell_index(width, static_cast<int>(dst), cell)] =
                plane[block_cell_index(width, slot, cell)];
    }
    return out;
}

} // namespace rdhei
