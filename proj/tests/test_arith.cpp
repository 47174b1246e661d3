#include <catch2/catch_amalgamated.hpp>

#include "rdhei/arith.hpp"
#include "testutil.hpp"

using namespace rdhei;

TEST_CASE("empty sequence codes to empty output") {
    CHECK(ac_encode({}).empty());
    CHECK(ac_decode({}, 0).empty());
}

TEST_CASE("1024 zeros compress to at most 32 bits") {
    const BitSeq zeros(1024, 0);
    const BitSeq coded = ac_encode(zeros);
    CHECK(coded.size() <= 32);
    CHECK(ac_decode(coded, zeros.size()) == zeros);
}

TEST_CASE("all-zero inputs grow roughly logarithmically") {
    std::size_t prev = 0;
    for (std::size_t n : {1u << 8, 1u << 12, 1u << 16, 1u << 20}) {
        const std::size_t coded = ac_encode(BitSeq(n, 0)).size();
        CHECK(coded <= 96);
        CHECK(coded + 8 >= prev); // sanity: roughly monotone, never exploding
        prev = coded;
    }
}

TEST_CASE("round trip over random sequences") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = rng() % 300;
        const double p = (rng() % 100 + 1) / 101.0;
        const BitSeq bits = testutil::random_bits(rng, n, p);
        const BitSeq coded = ac_encode(bits);
        CHECK(ac_decode(coded, n) == bits);
    }
}

TEST_CASE("round trip at label-map scale") {
    std::mt19937 rng(99);
    for (double p : {0.001, 0.02, 0.5, 0.98}) {
        const BitSeq bits = testutil::random_bits(rng, 1u << 20, p);
        CHECK(ac_decode(ac_encode(bits), bits.size()) == bits);
    }
}

TEST_CASE("sparse inputs compress below 0.4 bits per symbol") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1024 + rng() % 8192;
        const double p = 0.001 + (rng() % 50) / 1000.0; // up to 0.05
        const BitSeq bits = testutil::random_bits(rng, n, p);
        const BitSeq coded = ac_encode(bits);
        CHECK(coded.size() < static_cast<std::size_t>(0.4 * static_cast<double>(n)));
    }
}

TEST_CASE("deterministic output") {
    std::mt19937 rng(77);
    const BitSeq bits = testutil::random_bits(rng, 5000, 0.1);
    CHECK(ac_encode(bits) == ac_encode(bits));
}

TEST_CASE("truncated code signals DecodeOverrun") {
    BitSeq bits(1000);
    for (std::size_t i = 0; i < bits.size(); ++i)
        bits[i] = i & 1; // incompressible under a single adaptive context
    BitSeq coded = ac_encode(bits);
    REQUIRE(coded.size() > 200);
    coded.resize(100);
    try {
        ac_decode(coded, bits.size());
        FAIL("expected DecodeOverrun");
    } catch (const Error& e) {
        CHECK(e.name() == "DecodeOverrun");
    }
}
