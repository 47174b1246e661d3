#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "rdhei/blocks.hpp"
#include "rdhei/prediction.hpp"
#include "rdhei/raster.hpp"
#include "rdhei/wire.hpp"

namespace rdhei {

struct PlaneCapacity {
    bool embeddable = false;
    int ubCount = 0;
    int nubCount = 0;
    int embeddableNubs = 0;
    std::uint64_t auxBits = 0;
    std::uint64_t netBits = 0; // payload positions this plane contributes
};

// Reservation accounting. er is the paper's net-payload rate: the 32-bit
// length prefix counts as overhead, so maxPayloadBits is what a maximal
// embed run can actually carry.
struct CapacityReport {
    int width = 0;
    int height = 0;
    std::array<PlaneCapacity, 8> plane{};
    std::uint64_t totalNetBits = 0;
    std::uint64_t maxPayloadBits = 0;
    double er = 0.0;
    std::size_t overflowCount = 0;
    double overflowFraction = 0.0;
    bool ok = false;
    std::string diagnostic;
};

inline CapacityReport build_capacity_report(const std::array<BlockModel, 8>& models,
                                            const AuxLayout& layout,
                                            const std::vector<std::uint8_t>& overflow, int width,
                                            int height) {
    CapacityReport r;
    r.width = width;
    r.height = height;
    for (int p = 0; p < 8; ++p) {
        PlaneCapacity& pc = r.plane[p];
        pc.ubCount = models[p].ubCount;
        pc.nubCount = models[p].nubCount;
        pc.embeddableNubs = models[p].embeddableNubCount;
        pc.embeddable = layout.plane[p].embeddable;
        pc.auxBits = layout.plane[p].auxBits;
        pc.netBits = layout.plane[p].payloadPositions.size();
        r.totalNetBits += pc.netBits;
    }
    r.maxPayloadBits = r.totalNetBits > kPayloadPrefixBits ? r.totalNetBits - kPayloadPrefixBits : 0;
    r.er = static_cast<double>(r.maxPayloadBits) / (static_cast<double>(width) * height);
    for (std::uint8_t v : overflow)
        r.overflowCount += v;
    r.overflowFraction = static_cast<double>(r.overflowCount) / (static_cast<double>(width) * height);
    r.ok = true;
    return r;
}

// Run reservation planning without producing any file. On CapacityError the
// report comes back with ER 0 and the diagnostic filled in.
inline CapacityReport measure_er(const RasterImage& img) {
    validate_dimensions(img.width, img.height);
    const PeImage pe = compute_pe(img);
    const PlaneSet planes = pe_to_planes(pe);

    std::array<BlockModel, 8> models;
    for (int p = 0; p < 8; ++p)
        models[p] = classify_blocks(planes.plane[p], img.width, img.height, p == 0);

    std::array<std::uint8_t, 16> headerBits{};
    const int rb = reserved_block_index(img.width, img.height);
    for (int cell = 0; cell < kBlockCells; ++cell)
        headerBits[cell] = planes.plane[0][block_cell_index(img.width, rb, cell)];

    try {
        const AuxPlan plan = plan_layout(models, pe.overflow, headerBits, img.width, img.height);
        return build_capacity_report(models, plan.layout, pe.overflow, img.width, img.height);
    } catch (const Error& e) {
        CapacityReport r;
        r.width = img.width;
        r.height = img.height;
        for (int p = 0; p < 8; ++p) {
            r.plane[p].ubCount = models[p].ubCount;
            r.plane[p].nubCount = models[p].nubCount;
            r.plane[p].embeddableNubs = models[p].embeddableNubCount;
        }
        for (std::uint8_t v : pe.overflow)
            r.overflowCount += v;
        r.overflowFraction =
            static_cast<double>(r.overflowCount) / (static_cast<double>(img.width) * img.height);
        r.diagnostic = e.what();
        return r;
    }
}

inline double mse(const RasterImage& a, const RasterImage& b) {
    if (a.width != b.width || a.height != b.height)
        fail("DimensionMismatch", "images are " + std::to_string(a.width) + "x" +
                                      std::to_string(a.height) + " vs " + std::to_string(b.width) +
                                      "x" + std::to_string(b.height));
    double acc = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double d = static_cast<double>(a.samples[i]) - b.samples[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.samples.size());
}

inline std::array<std::uint64_t, 17> ones_per_block_histogram(const std::vector<std::uint8_t>& plane,
                                                              int width, int height) {
    std::array<std::uint64_t, 17> hist{};
    const int blocks = (width / kBlockSize) * (height / kBlockSize);
    for (int b = 0; b < blocks; ++b) {
        int ones = 0;
        for (int cell = 0; cell < kBlockCells; ++cell)
            ones += plane[block_cell_index(width, b, cell)];
        ++hist[ones];
    }
    return hist;
}

template <typename Counts>
inline double shannon_entropy(const Counts& counts) {
    double total = 0.0;
    for (const auto c : counts)
        total += static_cast<double>(c);
    if (total == 0.0)
        return 0.0;
    double h = 0.0;
    for (const auto c : counts) {
        if (c == 0)
            continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

struct HistogramReport {
    std::array<std::uint64_t, 256> bins{};
    double entropyBits = 0.0;
};

inline HistogramReport histogram_and_entropy(const RasterImage& img) {
    HistogramReport r;
    for (std::uint8_t s : img.samples)
        ++r.bins[s];
    r.entropyBits = shannon_entropy(r.bins);
    return r;
}

// Empirical entropy of the prediction errors over non-reference pixels
// (overflow pixels contribute their raw values, as stored).
inline double pe_entropy(const PeImage& pe) {
    std::array<std::uint64_t, 320> counts{}; // values -64..255, offset 64
    for (int i = 1; i < pe.height; ++i)
        for (int j = 1; j < pe.width; ++j)
            ++counts[pe.at(i, j) + 64];
    return shannon_entropy(counts);
}

namespace detail {

// Group adjacent bins so every group's expected count reaches 5 (classic
// validity rule); remainders fold into the last group.
template <std::size_t N>
inline std::vector<std::pair<int, int>> group_bins(const std::array<double, N>& expected) {
    std::vector<std::pair<int, int>> groups;
    int start = 0;
    double acc = 0.0;
    for (int i = 0; i < static_cast<int>(N); ++i) {
        acc += expected[i];
        if (acc >= 5.0) {
            groups.emplace_back(start, i);
            start = i + 1;
            acc = 0.0;
        }
    }
    if (start < static_cast<int>(N)) {
        if (groups.empty())
            groups.emplace_back(start, static_cast<int>(N) - 1);
        else
            groups.back().second = static_cast<int>(N) - 1;
    }
    return groups;
}

} // namespace detail

// Two-sample chi-squared homogeneity test over ones-per-block histograms.
inline double chi2_homogeneity_pvalue(const std::array<std::uint64_t, 17>& a,
                                      const std::array<std::uint64_t, 17>& b) {
    double totalA = 0, totalB = 0;
    std::array<double, 17> pooled{};
    for (int i = 0; i < 17; ++i) {
        totalA += static_cast<double>(a[i]);
        totalB += static_cast<double>(b[i]);
    }
    const double total = totalA + totalB;
    for (int i = 0; i < 17; ++i)
        pooled[i] = (static_cast<double>(a[i]) + b[i]) * std::min(totalA, totalB) / total;

    const auto groups = detail::group_bins(pooled);
    if (groups.size() < 2)
        return 1.0;
    double stat = 0.0;
    for (const auto& [lo, hi] : groups) {
        double ga = 0, gb = 0;
        for (int i = lo; i <= hi; ++i) {
            ga += static_cast<double>(a[i]);
            gb += static_cast<double>(b[i]);
        }
        const double ea = (ga + gb) * totalA / total;
        const double eb = (ga + gb) * totalB / total;
        stat += (ga - ea) * (ga - ea) / ea + (gb - eb) * (gb - eb) / eb;
    }
    const boost::math::chi_squared dist(static_cast<double>(groups.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

// Goodness of fit of a ones-per-block histogram against Binomial(16, 0.5).
inline double chi2_binomial_pvalue(const std::array<std::uint64_t, 17>& hist) {
    double total = 0;
    for (auto c : hist)
        total += static_cast<double>(c);
    std::array<double, 17> expected{};
    double binom = 1.0; // C(16,0) / 2^16 numerator walk
    for (int i = 0; i <= 16; ++i) {
        expected[i] = total * binom / 65536.0;
        binom = binom * (16 - i) / (i + 1);
    }
    const auto groups = detail::group_bins(expected);
    if (groups.size() < 2)
        return 1.0;
    double stat = 0.0;
    for (const auto& [lo, hi] : groups) {
        double o = 0, e = 0;
        for (int i = lo; i <= hi; ++i) {
            o += static_cast<double>(hist[i]);
            e += expected[i];
        }
        stat += (o - e) * (o - e) / e;
    }
    const boost::math::chi_squared dist(static_cast<double>(groups.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

} // namespace rdhei
