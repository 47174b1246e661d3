#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "rdhei/error.hpp"

namespace rdhei {

// 8-bit grayscale raster, row-major. Dimensions are validated at load time:
// the block grid is fixed at 4x4, so M and N must be multiples of 4 (and at
// least 8), and the 16-bit L2 length field of the container caps the block
// count at 65535.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples;

    std::uint8_t at(int i, int j) const { return samples[static_cast<std::size_t>(i) * width + j]; }
    std::uint8_t& at(int i, int j) { return samples[static_cast<std::size_t>(i) * width + j]; }
    std::size_t pixel_count() const { return samples.size(); }

    bool operator==(const RasterImage&) const = default;
};

inline void validate_dimensions(int width, int height) {
    if (width < 8 || height < 8 || width % 4 != 0 || height % 4 != 0)
        fail("DimensionError", "dimensions must be >= 8 and divisible by 4, got " +
                                   std::to_string(width) + "x" + std::to_string(height));
    const long long blocks = static_cast<long long>(width / 4) * (height / 4);
    if (blocks > 65535)
        fail("DimensionError", "block count " + std::to_string(blocks) +
                                   " exceeds the 16-bit map length limit (65535)");
}

namespace detail {

// PGM header tokens are separated by whitespace; '#' starts a comment that
// runs to end of line. Exactly one whitespace byte (the token terminator)
// separates the maxval token from the raster data.
inline std::string pnm_token(std::istream& in) {
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            break;
        }
    }
    std::string tok;
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

inline int parse_pnm_int(const std::string& tok) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        fail("MalformedFormat", "expected integer in PGM header, got '" + tok + "'");
    return std::stoi(tok);
}

} // namespace detail

inline RasterImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail("IoError", "cannot open " + path);

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5')
        fail("MalformedFormat", path + ": not a binary PGM (magic P5)");

    const int width = detail::parse_pnm_int(detail::pnm_token(in));
    const int height = detail::parse_pnm_int(detail::pnm_token(in));
    const int maxval = detail::parse_pnm_int(detail::pnm_token(in));
    if (maxval != 255)
        fail("UnsupportedDepth", path + ": maxval " + std::to_string(maxval) + ", only 255 supported");
    validate_dimensions(width, height);

    RasterImage img;
    img.width = width;
    img.height = height;
    img.samples.resize(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(img.samples.data()),
            static_cast<std::streamsize>(img.samples.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.samples.size()))
        fail("MalformedFormat", path + ": truncated sample data");
    return img;
}

inline void store_pgm(const RasterImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail("IoError", "cannot create " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.samples.data()),
              static_cast<std::streamsize>(img.samples.size()));
    if (!out)
        fail("IoError", "write failed for " + path);
}

} // namespace rdhei
