#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medcrypt/aes.hpp"

#include <set>

#include "medcrypt/cipher.hpp"
#include "medcrypt/rng.hpp"
#include "unit/test_util.hpp"

using namespace medcrypt;
using namespace medcrypt::aes;

namespace {

constexpr testutil::KatVector kAesKat[] = {
#include "vectors/aes_kat.inc"
};

constexpr testutil::CbcKatVector kAesCbcKat[] = {
#include "vectors/aes_cbc_kat.inc"
};

State random_state(Rng& rng) {
    State s;
    rng.fill(s);
    return s;
}

}  // namespace

TEST_CASE("key expansion round counts by key size") {
    Rng rng(1);
    auto k128 = AesRoundKeys::expand(rng.bytes(16));
    CHECK(k128.rounds() == 10);
    CHECK(k128.round_key_count() == 11);
    auto k192 = AesRoundKeys::expand(rng.bytes(24));
    CHECK(k192.rounds() == 12);
    CHECK(k192.round_key_count() == 13);
    auto k256 = AesRoundKeys::expand(rng.bytes(32));
    CHECK(k256.rounds() == 14);
    CHECK(k256.round_key_count() == 15);
    CHECK_THROWS_AS(AesRoundKeys::expand(rng.bytes(20)), KeyLengthError);
    CHECK_THROWS_AS(AesRoundKeys::expand(rng.bytes(0)), KeyLengthError);
}

TEST_CASE("standard known-answer vectors, every key size, both directions") {
    for (const auto& v : kAesKat) {
        auto keys = AesRoundKeys::expand(from_hex(v.key));
        Bytes pt = from_hex(v.plaintext);
        Bytes ct(16);
        aes_encrypt_block(pt, ct, keys);
        CHECK(to_hex(ct) == v.ciphertext);
        Bytes back(16);
        aes_decrypt_block(ct, back, keys);
        CHECK(back == pt);
    }
}

TEST_CASE("CBC chaining matches the published multi-block vector") {
    for (const auto& v : kAesCbcKat) {
        BlockKey key = BlockKey::create(SuiteId::AES128, from_hex(v.key));
        auto cipher = make_block_cipher(key);
        InitializationVector iv = InitializationVector::create(SuiteId::AES128, from_hex(v.iv));
        Bytes ct = mode_encrypt(*cipher, iv, Mode::CBC, from_hex(v.plaintext));
        CHECK(to_hex(ct) == v.ciphertext);
    }
}

TEST_CASE("S-box is a permutation and InvS-box its exact inverse") {
    const auto& sb = sbox();
    const auto& inv = inv_sbox();
    std::set<std::uint8_t> seen(sb.begin(), sb.end());
    CHECK(seen.size() == 256);
    for (int x = 0; x < 256; ++x) {
        CHECK(inv[sb[static_cast<std::size_t>(x)]] == x);
    }
    // Spot values from the published table.
    CHECK(sb[0x00] == 0x63);
    CHECK(sb[0x01] == 0x7c);
    CHECK(sb[0x53] == 0xed);
    CHECK(sb[0xff] == 0x16);
}

TEST_CASE("each phase is a bijection on the state") {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        State s = random_state(rng);
        State t = s;
        sub_bytes(t);
        inv_sub_bytes(t);
        CHECK(t == s);
        shift_rows(t);
        inv_shift_rows(t);
        CHECK(t == s);
        mix_columns(t);
        inv_mix_columns(t);
        CHECK(t == s);
    }
}

TEST_CASE("MixColumns inverts over all sampled single-column patterns") {
    const std::uint8_t vals[] = {0x00, 0x01, 0x02, 0x03, 0xff};
    for (std::uint8_t a : vals)
        for (std::uint8_t b : vals)
            for (std::uint8_t c : vals)
                for (std::uint8_t d : vals) {
                    State s{};
                    s[0] = a;
                    s[1] = b;
                    s[2] = c;
                    s[3] = d;
                    State t = s;
                    mix_columns(t);
                    inv_mix_columns(t);
                    CHECK(t == s);
                }
}

TEST_CASE("MixColumns is linear over GF(2^8)") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        State a = random_state(rng);
        State b = random_state(rng);
        State sum;
        for (int j = 0; j < 16; ++j) {
            sum[static_cast<std::size_t>(j)] =
                a[static_cast<std::size_t>(j)] ^ b[static_cast<std::size_t>(j)];
        }
        mix_columns(a);
        mix_columns(b);
        mix_columns(sum);
        for (int j = 0; j < 16; ++j) {
            CHECK(sum[static_cast<std::size_t>(j)] ==
                  (a[static_cast<std::size_t>(j)] ^ b[static_cast<std::size_t>(j)]));
        }
    }
}

TEST_CASE("field multiplication known products") {
    CHECK(gf_mul(0x57, 0x83) == 0xc1);
    CHECK(gf_mul(0x57, 0x13) == 0xfe);
    CHECK(gf_mul(0x02, 0x80) == 0x1b);
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        auto a = static_cast<std::uint8_t>(rng.below(256));
        auto b = static_cast<std::uint8_t>(rng.below(256));
        CHECK(gf_mul(a, b) == gf_mul(b, a));
        CHECK(gf_mul(a, 1) == a);
        CHECK(gf_mul(a, 0) == 0);
    }
}

TEST_CASE("round-trip identity per key size") {
    Rng rng(5);
    for (std::size_t key_len : {16u, 24u, 32u}) {
        for (int i = 0; i < 1000; ++i) {
            auto keys = AesRoundKeys::expand(rng.bytes(key_len));
            Bytes pt = rng.bytes(16);
            Bytes ct(16), back(16);
            aes_encrypt_block(pt, ct, keys);
            aes_decrypt_block(ct, back, keys);
            CHECK(back == pt);
        }
    }
}

TEST_CASE("trace counts the executed rounds") {
    Rng rng(6);
    for (auto [key_len, rounds] :
         {std::pair<std::size_t, int>{16, 10}, {24, 12}, {32, 14}}) {
        auto keys = AesRoundKeys::expand(rng.bytes(key_len));
        Bytes pt = rng.bytes(16), ct(16);
        AesTrace trace;
        aes_encrypt_block(pt, ct, keys, &trace);
        CHECK(trace.rounds_executed == rounds);
        AesTrace dec_trace;
        aes_decrypt_block(ct, pt, keys, &dec_trace);
        CHECK(dec_trace.rounds_executed == rounds);
    }
}
