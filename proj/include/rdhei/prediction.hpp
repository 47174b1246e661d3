#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "rdhei/raster.hpp"

namespace rdhei {

// Prediction errors plus the overflow label map L1. First-row/first-column
// pixels are reference pixels: pe holds the raw sample and overflow is 0.
// Elsewhere pe is the MED prediction error, clamped to the overflow path
// (pe = raw sample, overflow = 1) whenever |error| would exceed 64.
struct PeImage {
    int width = 0;
    int height = 0;
    std::vector<std::int16_t> pe;
    std::vector<std::uint8_t> overflow; // L1

    std::int16_t at(int i, int j) const { return pe[static_cast<std::size_t>(i) * width + j]; }
    bool is_reference(int i, int j) const { return i == 0 || j == 0; }

    bool operator==(const PeImage&) const = default;
};

// Eight binary planes; plane index 0 is k=1 (MSB plane), index 7 is k=8
// (sign / LSB plane).
struct PlaneSet {
    int width = 0;
    int height = 0;
    std::array<std::vector<std::uint8_t>, 8> plane;

    void allocate(int w, int h) {
        width = w;
        height = h;
        for (auto& p : plane)
            p.assign(static_cast<std::size_t>(w) * h, 0);
    }

    bool operator==(const PlaneSet&) const = default;
};

// Median edge detector over the causal context: x1 upper-left diagonal,
// x2 upper, x3 left. The gradient branch may leave [0,255]; it is used
// unclamped, the overflow rule downstream absorbs any large error.
inline int med_predict(int x1, int x2, int x3) {
    const int lo = std::min(x2, x3);
    const int hi = std::max(x2, x3);
    if (x1 <= lo)
        return hi;
    if (x1 >= hi)
        return lo;
    return x2 + x3 - x1;
}

inline PeImage compute_pe(const RasterImage& img) {
    PeImage out;
    out.width = img.width;
    out.height = img.height;
    out.pe.resize(img.pixel_count());
    out.overflow.assign(img.pixel_count(), 0);

    for (int i = 0; i < img.height; ++i) {
        for (int j = 0; j < img.width; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * img.width + j;
            const int x = img.at(i, j);
            if (i == 0 || j == 0) {
                out.pe[idx] = static_cast<std::int16_t>(x);
                continue;
            }
            const int px = med_predict(img.at(i - 1, j - 1), img.at(i - 1, j), img.at(i, j - 1));
            const int e = x - px;
            if (e < -64 || e > 64) {
                out.pe[idx] = static_cast<std::int16_t>(x);
                out.overflow[idx] = 1;
            } else {
                out.pe[idx] = static_cast<std::int16_t>(e);
            }
        }
    }
    return out;
}

// Per-pixel plane layout (container version 1):
//   reference or overflow pixel, value x in [0,255]:
//     planes 1..7 = bits 7..1 of x, plane 8 = bit 0 of x
//   non-overflow pixel, error e in [-64,64]:
//     planes 1..7 = bits 6..0 of |e|, plane 8 = 1 iff e < 0
inline PlaneSet pe_to_planes(const PeImage& pe) {
    PlaneSet out;
    out.allocate(pe.width, pe.height);
    const std::size_t n = pe.pe.size();
    for (std::size_t idx = 0; idx < n; ++idx) {
        const int i = static_cast<int>(idx) / pe.width;
        const int j = static_cast<int>(idx) % pe.width;
        const int e = pe.pe[idx];
        if (pe.is_reference(i, j) || pe.overflow[idx]) {
            for (int k = 1; k <= 8; ++k)
                out.plane[k - 1][idx] = static_cast<std::uint8_t>((e >> (8 - k)) & 1);
        } else {
            const int mag = e < 0 ? -e : e;
            for (int k = 1; k <= 7; ++k)
                out.plane[k - 1][idx] = static_cast<std::uint8_t>((mag >> (7 - k)) & 1);
            out.plane[7][idx] = e < 0 ? 1 : 0;
        }
    }
    return out;
}

inline PeImage planes_to_pe(const PlaneSet& planes, const std::vector<std::uint8_t>& l1) {
    PeImage out;
    out.width = planes.width;
    out.height = planes.height;
    const std::size_t n = static_cast<std::size_t>(planes.width) * planes.height;
    out.pe.resize(n);
    out.overflow.assign(l1.begin(), l1.end());

    for (std::size_t idx = 0; idx < n; ++idx) {
        const int i = static_cast<int>(idx) / planes.width;
        const int j = static_cast<int>(idx) % planes.width;
        if (i == 0 || j == 0 || l1[idx]) {
            int x = 0;
            for (int k = 1; k <= 8; ++k)
                x |= planes.plane[k - 1][idx] << (8 - k);
            out.pe[idx] = static_cast<std::int16_t>(x);
            if (i == 0 || j == 0)
                out.overflow[idx] = 0;
        } else {
            int mag = 0;
            for (int k = 1; k <= 7; ++k)
                mag |= planes.plane[k - 1][idx] << (7 - k);
            if (mag > 64)
                fail("InconsistentLabels", "non-overflow magnitude " + std::to_string(mag) +
                                               " exceeds 64 at index " + std::to_string(idx));
            out.pe[idx] = static_cast<std::int16_t>(planes.plane[7][idx] ? -mag : mag);
        }
    }
    return out;
}

// Raster-order inverse of compute_pe. Sequential by construction: each
// prediction uses already-reconstructed neighbors.
inline RasterImage reconstruct_image(const PeImage& pe) {
    RasterImage out;
    out.width = pe.width;
    out.height = pe.height;
    out.samples.resize(pe.pe.size());

    for (int i = 0; i < pe.height; ++i) {
        for (int j = 0; j < pe.width; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * pe.width + j;
            int x;
            if (i == 0 || j == 0 || pe.overflow[idx]) {
                x = pe.pe[idx];
            } else {
                const int px = med_predict(out.at(i - 1, j - 1), out.at(i - 1, j), out.at(i, j - 1));
                x = px + pe.pe[idx];
            }
            if (x < 0 || x > 255)
                fail("RangeError", "reconstructed sample " + std::to_string(x) + " at (" +
                                       std::to_string(i) + "," + std::to_string(j) + ")");
            out.samples[idx] = static_cast<std::uint8_t>(x);
        }
    }
    return out;
}

// Bit-plane slicing of a plain raster (Eq.-(7)-style): plane k holds bit 8-k.
inline PlaneSet split_planes(const RasterImage& img) {
    PlaneSet out;
    out.allocate(img.width, img.height);
    for (std::size_t idx = 0; idx < img.pixel_count(); ++idx)
        for (int k = 1; k <= 8; ++k)
            out.plane[k - 1][idx] = static_cast<std::uint8_t>((img.samples[idx] >> (8 - k)) & 1);
    return out;
}

inline RasterImage merge_planes(const PlaneSet& planes) {
    RasterImage out;
    out.width = planes.width;
    out.height = planes.height;
    out.samples.resize(static_cast<std::size_t>(planes.width) * planes.height);
    for (std::size_t idx = 0; idx < out.samples.size(); ++idx) {
        int x = 0;
        for (int k = 1; k <= 8; ++k)
            x |= planes.plane[k - 1][idx] << (8 - k);
        out.samples[idx] = static_cast<std::uint8_t>(x);
    }
    return out;
}

} // namespace rdhei
