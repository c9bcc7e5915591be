#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medcrypt/blowfish.hpp"

#include <algorithm>

#include "medcrypt/errors.hpp"
#include "medcrypt/rng.hpp"
#include "unit/test_util.hpp"

using namespace medcrypt;
using namespace medcrypt::blowfish;
using testutil::u64_from_hex;

namespace {

constexpr testutil::KatVector kBlowfishKat[] = {
#include "vectors/blowfish_kat.inc"
};

}  // namespace

TEST_CASE("key length bounds follow the 32..448-bit scale") {
    Rng rng(1);
    CHECK_THROWS_AS(blowfish_init(rng.bytes(3)), KeyLengthError);
    CHECK_THROWS_AS(blowfish_init(rng.bytes(57)), KeyLengthError);
    CHECK_THROWS_AS(blowfish_init(rng.bytes(0)), KeyLengthError);
    CHECK_NOTHROW(blowfish_init(rng.bytes(4)));
    CHECK_NOTHROW(blowfish_init(rng.bytes(56)));
}

TEST_CASE("state holds 18 P entries and 4x256 S entries") {
    BlowfishState st = blowfish_init(Bytes{1, 2, 3, 4});
    CHECK(st.p.size() == 18);
    CHECK(st.s.size() == 4);
    for (const auto& box : st.s) CHECK(box.size() == 256);
}

TEST_CASE("published known-answer vectors, both directions") {
    for (const auto& v : kBlowfishKat) {
        BlowfishState st = blowfish_init(from_hex(v.key));
        std::uint64_t pt = u64_from_hex(v.plaintext);
        std::uint64_t ct = u64_from_hex(v.ciphertext);
        CHECK(blowfish_encrypt_block(pt, st) == ct);
        CHECK(blowfish_decrypt_block(ct, st) == pt);
    }
}

TEST_CASE("initialization is deterministic") {
    Bytes key = {9, 8, 7, 6, 5, 4, 3, 2, 1};
    BlowfishState a = blowfish_init(key);
    BlowfishState b = blowfish_init(key);
    CHECK(a.p == b.p);
    CHECK(a.s == b.s);
}

TEST_CASE("distinct keys yield distinct P arrays") {
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        Bytes k1 = rng.bytes(16);
        Bytes k2 = rng.bytes(16);
        if (k1 == k2) continue;
        CHECK(blowfish_init(k1).p != blowfish_init(k2).p);
    }
}

TEST_CASE("same block under different keys diverges") {
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        std::uint64_t block = rng.next_u64();
        BlowfishState a = blowfish_init(rng.bytes(8));
        BlowfishState b = blowfish_init(rng.bytes(8));
        CHECK(blowfish_encrypt_block(block, a) != blowfish_encrypt_block(block, b));
    }
}

TEST_CASE("round-trip across every legal key length class") {
    Rng rng(4);
    for (std::size_t key_len : {4u, 8u, 16u, 32u, 56u}) {
        for (int i = 0; i < 500; ++i) {
            BlowfishState st = blowfish_init(rng.bytes(key_len));
            std::uint64_t block = rng.next_u64();
            CHECK(blowfish_decrypt_block(blowfish_encrypt_block(block, st), st) == block);
        }
    }
}

TEST_CASE("decryption equals encryption with a reversed P array") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        BlowfishState st = blowfish_init(rng.bytes(12));
        BlowfishState reversed = st;
        std::reverse(reversed.p.begin(), reversed.p.end());
        std::uint64_t block = rng.next_u64();
        CHECK(blowfish_decrypt_block(block, st) == blowfish_encrypt_block(block, reversed));
    }
}
