#include <catch2/catch_amalgamated.hpp>

#include "rdhei/prediction.hpp"
#include "testutil.hpp"

using namespace rdhei;

TEST_CASE("med predictor branches") {
    CHECK(med_predict(100, 100, 100) == 100);
    CHECK(med_predict(50, 100, 80) == 100); // x1 <= min -> max(x2,x3)
    CHECK(med_predict(90, 100, 80) == 90);  // gradient branch x2+x3-x1
    CHECK(med_predict(120, 100, 80) == 80); // x1 >= max -> min(x2,x3)
    // gradient branch may leave [0,255]; used unclamped
    CHECK(med_predict(200, 10, 201) == 11);
    CHECK(med_predict(254, 255, 254) == 255);
}

TEST_CASE("constant image has zero PE and no overflow") {
    const RasterImage img = testutil::constant_image(16, 16, 100);
    const PeImage pe = compute_pe(img);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            if (i == 0 || j == 0)
                CHECK(pe.at(i, j) == 100);
            else
                CHECK(pe.at(i, j) == 0);
        }
    CHECK(std::count(pe.overflow.begin(), pe.overflow.end(), 1) == 0);
}

TEST_CASE("overflow rule is exclusive at +-64") {
    // craft a 8x8 image with a controlled jump at (1,1)
    RasterImage img = testutil::constant_image(8, 8, 100);
    auto pe_at_11 = [&](int value) {
        img.at(1, 1) = static_cast<std::uint8_t>(value);
        return compute_pe(img);
    };
    // px at (1,1) is 100; e = value - 100
    PeImage pe = pe_at_11(164); // e = +64: kept
    CHECK(pe.at(1, 1) == 64);
    CHECK(pe.overflow[9] == 0);
    pe = pe_at_11(165); // e = +65: overflow stores raw value
    CHECK(pe.at(1, 1) == 165);
    CHECK(pe.overflow[9] == 1);
    pe = pe_at_11(36); // e = -64: kept
    CHECK(pe.at(1, 1) == -64);
    pe = pe_at_11(35); // e = -65: overflow
    CHECK(pe.at(1, 1) == 35);
    CHECK(pe.overflow[9] == 1);
}

namespace {

PeImage single_pe(int e, bool overflow) {
    PeImage pe;
    pe.width = 8;
    pe.height = 8;
    pe.pe.assign(64, 0);
    pe.overflow.assign(64, 0);
    pe.pe[9] = static_cast<std::int16_t>(e); // position (1,1)
    pe.overflow[9] = overflow ? 1 : 0;
    return pe;
}

std::array<int, 8> planes_at(const PlaneSet& ps, std::size_t idx) {
    std::array<int, 8> out;
    for (int k = 0; k < 8; ++k)
        out[k] = ps.plane[k][idx];
    return out;
}

} // namespace

TEST_CASE("plane layout of e = -5") {
    const PlaneSet ps = pe_to_planes(single_pe(-5, false));
    CHECK(planes_at(ps, 9) == std::array<int, 8>{0, 0, 0, 0, 1, 0, 1, 1});
}

TEST_CASE("plane layout of e = 0") {
    const PlaneSet ps = pe_to_planes(single_pe(0, false));
    CHECK(planes_at(ps, 9) == std::array<int, 8>{0, 0, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("plane layout of overflow x = 200") {
    const PlaneSet ps = pe_to_planes(single_pe(200, true));
    // 200 = 11001000b: planes 1..7 bits 7..1, plane 8 bit 0
    CHECK(planes_at(ps, 9) == std::array<int, 8>{1, 1, 0, 0, 1, 0, 0, 0});
}

TEST_CASE("plane 1 flags magnitude 64 exactly") {
    CHECK(pe_to_planes(single_pe(64, false)).plane[0][9] == 1);
    CHECK(pe_to_planes(single_pe(-64, false)).plane[0][9] == 1);
    CHECK(pe_to_planes(single_pe(63, false)).plane[0][9] == 0);
}

TEST_CASE("reference pixels store raw bits on all planes") {
    PeImage pe = single_pe(0, false);
    pe.pe[0] = 200; // (0,0) reference
    const PlaneSet ps = pe_to_planes(pe);
    CHECK(planes_at(ps, 0) == std::array<int, 8>{1, 1, 0, 0, 1, 0, 0, 0});
}

TEST_CASE("pe <-> planes bijectivity on random images") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 10000; ++trial) {
        const PeImage pe = testutil::random_pe_image(rng, 12, 12);
        const PeImage back = planes_to_pe(pe_to_planes(pe), pe.overflow);
        REQUIRE(back == pe);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const PeImage pe = testutil::random_pe_image(rng, 64, 64);
        REQUIRE(planes_to_pe(pe_to_planes(pe), pe.overflow) == pe);
    }
}

TEST_CASE("magnitude above 64 with overflow=0 is inconsistent") {
    PlaneSet ps = pe_to_planes(single_pe(0, false));
    // write |e| = 90 = 1011010b into planes 1..7 at a non-reference cell
    const int bits90[7] = {1, 0, 1, 1, 0, 1, 0};
    for (int k = 0; k < 7; ++k)
        ps.plane[k][9] = static_cast<std::uint8_t>(bits90[k]);
    std::vector<std::uint8_t> l1(64, 0);
    try {
        planes_to_pe(ps, l1);
        FAIL("expected InconsistentLabels");
    } catch (const Error& e) {
        CHECK(e.name() == "InconsistentLabels");
    }
}

TEST_CASE("reconstruct inverts compute_pe on random and natural images") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 1000; ++trial) {
        const RasterImage img = testutil::noise_image(rng, 16, 16);
        REQUIRE(reconstruct_image(compute_pe(img)) == img);
    }
    const RasterImage camera = load_pgm((testutil::data_dir() / "camera_512.pgm").string());
    CHECK(reconstruct_image(compute_pe(camera)) == camera);
    const RasterImage moon = load_pgm((testutil::data_dir() / "moon_512.pgm").string());
    CHECK(reconstruct_image(compute_pe(moon)) == moon);
}

TEST_CASE("corrupted PE triggers RangeError on reconstruction") {
    PeImage pe = single_pe(-5, false); // px at (1,1) is 0, x would be -5
    try {
        reconstruct_image(pe);
        FAIL("expected RangeError");
    } catch (const Error& e) {
        CHECK(e.name() == "RangeError");
    }
}

TEST_CASE("split/merge planes are inverse") {
    std::mt19937 rng(8);
    const RasterImage img = testutil::noise_image(rng, 32, 16);
    CHECK(merge_planes(split_planes(img)) == img);
}

TEST_CASE("overflow fraction depends only on the image") {
    const RasterImage camera = load_pgm((testutil::data_dir() / "camera_512.pgm").string());
    const PeImage a = compute_pe(camera);
    const PeImage b = compute_pe(camera);
    CHECK(a.overflow == b.overflow);
}
