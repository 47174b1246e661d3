#include <catch2/catch_amalgamated.hpp>

#include "rdhei/crypto.hpp"
#include "rdhei/pipeline.hpp"
#include "testutil.hpp"

using namespace rdhei;

namespace {

std::string hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

} // namespace

TEST_CASE("key parsing") {
    const KeyMaterial k = parse_key_hex(
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
    CHECK(k.bytes[0] == 0x00);
    CHECK(k.bytes[31] == 0x1f);

    for (const char* bad : {"", "abcd", "zz112233445566778899aabbccddeeff"
                                        "00112233445566778899aabbccddeeff"}) {
        try {
            parse_key_hex(bad);
            FAIL("expected MalformedKey");
        } catch (const Error& e) {
            CHECK(e.name() == "MalformedKey");
        }
    }
}

TEST_CASE("chacha20 block matches RFC 8439 section 2.3.2") {
    std::array<std::uint8_t, 32> key;
    for (int i = 0; i < 32; ++i)
        key[i] = static_cast<std::uint8_t>(i);
    const std::array<std::uint8_t, 12> nonce = {0, 0, 0, 9, 0, 0, 0, 0x4a, 0, 0, 0, 0};
    std::array<std::uint8_t, 64> block;
    detail::chacha20_block(key, 1, nonce, block);
    CHECK(hex({block.begin(), block.end()}) ==
          "10f1e7e4d13b5915500fdd1fa32071c4c7d1f4c733c068030422aa9ac3d46c4e"
          "d2826446079faa0914c2d705d98b02a2b5129cd1de164eb9cbd083e8a2503c4e");
}

TEST_CASE("repo golden keystream vectors") {
    // Frozen for cross-platform / cross-implementation checks (see README).
    const KeyMaterial k = parse_key_hex(
        "0123456789abcdef0123456789abcdef0123456789abcdef0123456789abcdef");
    CHECK(hex(keystream_bytes(k, kLabelMatrix, 64)) ==
          "39f0433eb685bd26556bd9780282ea9be3e908f497007811679793aca3f2e472"
          "1944fa9815deb9bdac51b5babdcffd01c40c2982071003e9e1a3baa55401b6f7");
    CHECK(hex(keystream_bytes(k, kLabelPayload, 64)) ==
          "ee3929c26d9ac39072e232229ae1620028771709b9f6e96f5f65c9362868e35e"
          "86d0854b7f559641c0b3603ffbf6d9970eea286d7d44b88f7ca01e78e3140fd5");
}

TEST_CASE("keystream planes are deterministic and balanced") {
    const PlaneSet a = keystream_planes(testutil::key_e(), 512, 512);
    const PlaneSet b = keystream_planes(testutil::key_e(), 512, 512);
    CHECK(a == b);

    for (int p = 0; p < 8; ++p) {
        const auto ones = std::count(a.plane[p].begin(), a.plane[p].end(), 1);
        const double freq = static_cast<double>(ones) / (512.0 * 512.0);
        CHECK(freq > 0.49);
        CHECK(freq < 0.51);
    }
}

TEST_CASE("distinct keys give ~50% Hamming distance") {
    const PlaneSet a = keystream_planes(testutil::key_e(), 512, 512);
    const PlaneSet b = keystream_planes(testutil::key_d(), 512, 512);
    std::uint64_t diff = 0, total = 0;
    for (int p = 0; p < 8; ++p)
        for (std::size_t i = 0; i < a.plane[p].size(); ++i) {
            diff += a.plane[p][i] ^ b.plane[p][i];
            ++total;
        }
    const double frac = static_cast<double>(diff) / static_cast<double>(total);
    CHECK(frac > 0.49);
    CHECK(frac < 0.51);
}

TEST_CASE("matrix and payload streams are domain separated") {
    const auto h = keystream_bytes(testutil::key_e(), kLabelMatrix, 256);
    const auto p = keystream_bytes(testutil::key_e(), kLabelPayload, 256);
    CHECK(h != p);
}

TEST_CASE("encrypt_planes is an involution and skips excluded cells") {
    std::mt19937 rng(21);
    const RasterImage img = testutil::smooth_image(501, 64, 64);
    const ReservationResult res = reserve_and_encrypt(img, testutil::key_e());

    // involution on the encrypted output
    const PlaneSet once = encrypt_planes(res.encrypted, testutil::key_e(), res.layout);
    const PlaneSet twice = encrypt_planes(once, testutil::key_e(), res.layout);
    CHECK(twice == res.encrypted);

    // excluded-set audit: aux positions and the reserved block are identical
    // before and after encryption
    for (int p = 0; p < 8; ++p)
        for (std::uint32_t pos : res.layout.plane[p].auxPositions)
            CHECK(once.plane[p][pos] == res.encrypted.plane[p][pos]);
    const int rb = reserved_block_index(64, 64);
    for (int cell = 0; cell < kBlockCells; ++cell) {
        const auto idx = block_cell_index(64, rb, cell);
        CHECK(once.plane[0][idx] == res.encrypted.plane[0][idx]);
    }
    (void)rng;
}

TEST_CASE("cipher_payload basics") {
    CHECK(cipher_payload({}, testutil::key_d()).empty());

    std::mt19937 rng(22);
    const auto data = testutil::random_bytes(rng, 4096);
    const auto once = cipher_payload(data, testutil::key_d());
    CHECK(once != data);
    CHECK(cipher_payload(once, testutil::key_d()) == data);

    // constant plaintext -> keystream statistics show through
    const std::vector<std::uint8_t> zeros(100000, 0);
    const auto ct = cipher_payload(zeros, testutil::key_d());
    std::uint64_t ones = 0;
    for (std::uint8_t b : ct)
        ones += static_cast<std::uint64_t>(__builtin_popcount(b));
    const double freq = static_cast<double>(ones) / (8.0 * static_cast<double>(ct.size()));
    CHECK(freq > 0.49);
    CHECK(freq < 0.51);
}
