#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "rdhei/crypto.hpp"
#include "rdhei/prediction.hpp"
#include "rdhei/raster.hpp"

namespace testutil {

inline const char* kKeyEHex = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";
inline const char* kKeyDHex = "ffeeddccbbaa99887766554433221100ffeeddccbbaa99887766554433221100";

inline rdhei::KeyMaterial key_e() { return rdhei::parse_key_hex(kKeyEHex); }
inline rdhei::KeyMaterial key_d() { return rdhei::parse_key_hex(kKeyDHex); }

inline std::filesystem::path data_dir() {
#ifdef RDHEI_TEST_DATA_DIR
    return std::filesystem::path(RDHEI_TEST_DATA_DIR);
#else
    return std::filesystem::path("tests/data");
#endif
}

inline std::filesystem::path temp_file(const std::string& stem) {
    static std::atomic<unsigned> counter{0};
    return std::filesystem::temp_directory_path() /
           (stem + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
}

// Uniform noise image; exercises prediction/reconstruction, too hostile for
// capacity planning.
inline rdhei::RasterImage noise_image(std::mt19937& rng, int width, int height) {
    rdhei::RasterImage img;
    img.width = width;
    img.height = height;
    img.samples.resize(static_cast<std::size_t>(width) * height);
    for (auto& s : img.samples)
        s = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

// Photograph-like synthetic content: bilinearly upsampled coarse terrain
// plus a gradient, mild noise, and a few hard-edged patches. Smooth enough
// to reserve realistic capacity, rough enough to produce overflow pixels.
inline rdhei::RasterImage smooth_image(std::uint32_t seed, int width, int height) {
    std::mt19937 rng(seed);
    auto unif = [&](double lo, double hi) {
        return lo + (hi - lo) * (rng() / 4294967296.0);
    };

    const int cell = 1 << (3 + static_cast<int>(rng() % 3)); // 8,16,32
    const int gw = width / cell + 2;
    const int gh = height / cell + 2;
    std::vector<double> grid(static_cast<std::size_t>(gw) * gh);
    for (auto& g : grid)
        g = unif(0, 255);

    const double gx = unif(-40, 40) / width;
    const double gy = unif(-40, 40) / height;
    const double noiseAmp = unif(0.5, 3.0);

    rdhei::RasterImage img;
    img.width = width;
    img.height = height;
    img.samples.resize(static_cast<std::size_t>(width) * height);
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j) {
            const double fi = static_cast<double>(i) / cell;
            const double fj = static_cast<double>(j) / cell;
            const int i0 = static_cast<int>(fi), j0 = static_cast<int>(fj);
            const double ti = fi - i0, tj = fj - j0;
            const double v00 = grid[static_cast<std::size_t>(i0) * gw + j0];
            const double v01 = grid[static_cast<std::size_t>(i0) * gw + j0 + 1];
            const double v10 = grid[static_cast<std::size_t>(i0 + 1) * gw + j0];
            const double v11 = grid[static_cast<std::size_t>(i0 + 1) * gw + j0 + 1];
            double v = v00 * (1 - ti) * (1 - tj) + v01 * (1 - ti) * tj + v10 * ti * (1 - tj) +
                       v11 * ti * tj;
            v += gx * j * cell * 0.1 + gy * i * cell * 0.1;
            v += unif(-noiseAmp, noiseAmp);
            img.samples[static_cast<std::size_t>(i) * width + j] =
                static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    }

    // a few hard-edged rectangles to create prediction overflows
    const int patches = static_cast<int>(rng() % 4);
    for (int p = 0; p < patches; ++p) {
        const int pw = 4 + static_cast<int>(rng() % (width / 4));
        const int ph = 4 + static_cast<int>(rng() % (height / 4));
        const int pi = static_cast<int>(rng() % std::max(1, height - ph));
        const int pj = static_cast<int>(rng() % std::max(1, width - pw));
        const int delta = static_cast<int>(rng() % 200) - 100;
        for (int i = pi; i < pi + ph; ++i)
            for (int j = pj; j < pj + pw; ++j) {
                int v = img.samples[static_cast<std::size_t>(i) * width + j] + delta;
                img.samples[static_cast<std::size_t>(i) * width + j] =
                    static_cast<std::uint8_t>(std::clamp(v, 0, 255));
            }
    }
    return img;
}

inline rdhei::RasterImage constant_image(int width, int height, std::uint8_t value) {
    rdhei::RasterImage img;
    img.width = width;
    img.height = height;
    img.samples.assign(static_cast<std::size_t>(width) * height, value);
    return img;
}

// Random structurally-valid PeImage: reference pixels raw, elsewhere either
// a magnitude-bounded error or an overflow raw value. Built directly (not
// via compute_pe) so the plane round-trip is checked against an independent
// construction.
inline rdhei::PeImage random_pe_image(std::mt19937& rng, int width, int height) {
    rdhei::PeImage pe;
    pe.width = width;
    pe.height = height;
    pe.pe.resize(static_cast<std::size_t>(width) * height);
    pe.overflow.assign(pe.pe.size(), 0);
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * width + j;
            if (i == 0 || j == 0) {
                pe.pe[idx] = static_cast<std::int16_t>(rng() % 256);
            } else if (rng() % 10 == 0) {
                pe.overflow[idx] = 1;
                pe.pe[idx] = static_cast<std::int16_t>(rng() % 256);
            } else {
                pe.pe[idx] = static_cast<std::int16_t>(static_cast<int>(rng() % 129) - 64);
            }
        }
    }
    return pe;
}

inline std::vector<std::uint8_t> random_plane(std::mt19937& rng, int width, int height,
                                              double pOne = 0.5) {
    std::vector<std::uint8_t> plane(static_cast<std::size_t>(width) * height);
    for (auto& b : plane)
        b = (rng() / 4294967296.0) < pOne ? 1 : 0;
    return plane;
}

inline std::vector<std::uint8_t> random_bytes(std::mt19937& rng, std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out)
        b = static_cast<std::uint8_t>(rng() & 0xFF);
    return out;
}

inline rdhei::BitSeq random_bits(std::mt19937& rng, std::size_t n, double pOne = 0.5) {
    rdhei::BitSeq out(n);
    for (auto& b : out)
        b = (rng() / 4294967296.0) < pOne ? 1 : 0;
    return out;
}

} // namespace testutil
