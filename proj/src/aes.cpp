#include "medcrypt/aes.hpp"

#include <cstring>

#include "medcrypt/errors.hpp"

namespace medcrypt::aes {

namespace {

constexpr std::uint8_t gf_mul_const(std::uint8_t a, std::uint8_t b) {
    std::uint8_t p = 0;
    for (int i = 0; i < 8; ++i) {
        if (b & 1) p ^= a;
        bool hi = (a & 0x80) != 0;
        a = static_cast<std::uint8_t>(a << 1);
        if (hi) a ^= 0x1b;  // x^8 + x^4 + x^3 + x + 1
        b >>= 1;
    }
    return p;
}

constexpr std::array<std::uint8_t, 256> make_sbox() {
    std::array<std::uint8_t, 256> sb{};
    sb[0] = 0x63;
    for (int x = 1; x < 256; ++x) {
        std::uint8_t inv = 0;
        for (int y = 1; y < 256; ++y) {
            if (gf_mul_const(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y)) == 1) {
                inv = static_cast<std::uint8_t>(y);
                break;
            }
        }
        std::uint8_t r = inv;
        for (int k = 1; k <= 4; ++k) {
            r ^= static_cast<std::uint8_t>((inv << k) | (inv >> (8 - k)));
        }
        sb[static_cast<std::size_t>(x)] = r ^ 0x63;
    }
    return sb;
}

constexpr std::array<std::uint8_t, 256> make_inv_sbox(const std::array<std::uint8_t, 256>& sb) {
    std::array<std::uint8_t, 256> inv{};
    for (int x = 0; x < 256; ++x) {
        inv[sb[static_cast<std::size_t>(x)]] = static_cast<std::uint8_t>(x);
    }
    return inv;
}

constexpr std::array<std::uint8_t, 256> make_mul_table(std::uint8_t c) {
    std::array<std::uint8_t, 256> t{};
    for (int x = 0; x < 256; ++x) {
        t[static_cast<std::size_t>(x)] = gf_mul_const(static_cast<std::uint8_t>(x), c);
    }
    return t;
}

constexpr auto kSbox = make_sbox();
constexpr auto kInvSbox = make_inv_sbox(kSbox);
constexpr auto kMul2 = make_mul_table(2);
constexpr auto kMul3 = make_mul_table(3);
constexpr auto kMul9 = make_mul_table(9);
constexpr auto kMul11 = make_mul_table(11);
constexpr auto kMul13 = make_mul_table(13);
constexpr auto kMul14 = make_mul_table(14);

}  // namespace

const std::array<std::uint8_t, 256>& sbox() { return kSbox; }
const std::array<std::uint8_t, 256>& inv_sbox() { return kInvSbox; }

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) { return gf_mul_const(a, b); }

void sub_bytes(State& s) {
    for (auto& b : s) b = kSbox[b];
}

void inv_sub_bytes(State& s) {
    for (auto& b : s) b = kInvSbox[b];
}

void shift_rows(State& s) {
    State t = s;
    for (int r = 1; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            s[static_cast<std::size_t>(r + 4 * c)] = t[static_cast<std::size_t>(r + 4 * ((c + r) % 4))];
        }
    }
}

void inv_shift_rows(State& s) {
    State t = s;
    for (int r = 1; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            s[static_cast<std::size_t>(r + 4 * ((c + r) % 4))] = t[static_cast<std::size_t>(r + 4 * c)];
        }
    }
}

void mix_columns(State& s) {
    for (int c = 0; c < 4; ++c) {
        std::uint8_t* col = s.data() + 4 * c;
        std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
        col[0] = kMul2[a0] ^ kMul3[a1] ^ a2 ^ a3;
        col[1] = a0 ^ kMul2[a1] ^ kMul3[a2] ^ a3;
        col[2] = a0 ^ a1 ^ kMul2[a2] ^ kMul3[a3];
        col[3] = kMul3[a0] ^ a1 ^ a2 ^ kMul2[a3];
    }
}

void inv_mix_columns(State& s) {
    for (int c = 0; c < 4; ++c) {
        std::uint8_t* col = s.data() + 4 * c;
        std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
        col[0] = kMul14[a0] ^ kMul11[a1] ^ kMul13[a2] ^ kMul9[a3];
        col[1] = kMul9[a0] ^ kMul14[a1] ^ kMul11[a2] ^ kMul13[a3];
        col[2] = kMul13[a0] ^ kMul9[a1] ^ kMul14[a2] ^ kMul11[a3];
        col[3] = kMul11[a0] ^ kMul13[a1] ^ kMul9[a2] ^ kMul14[a3];
    }
}

void add_round_key(State& s, const RoundKey& rk) {
    for (std::size_t i = 0; i < 16; ++i) s[i] ^= rk[i];
}

AesRoundKeys AesRoundKeys::expand(std::span<const std::uint8_t> key) {
    int nk;
    int nr;
    switch (key.size()) {
        case 16: nk = 4; nr = 10; break;
        case 24: nk = 6; nr = 12; break;
        case 32: nk = 8; nr = 14; break;
        default:
            throw KeyLengthError("AES key must be 16, 24, or 32 bytes");
    }

    const int total_words = 4 * (nr + 1);
    std::uint32_t w[60];
    for (int i = 0; i < nk; ++i) {
        w[i] = (static_cast<std::uint32_t>(key[static_cast<std::size_t>(4 * i)]) << 24) |
               (static_cast<std::uint32_t>(key[static_cast<std::size_t>(4 * i + 1)]) << 16) |
               (static_cast<std::uint32_t>(key[static_cast<std::size_t>(4 * i + 2)]) << 8) |
               static_cast<std::uint32_t>(key[static_cast<std::size_t>(4 * i + 3)]);
    }

    auto sub_word = [](std::uint32_t v) {
        return (static_cast<std::uint32_t>(kSbox[(v >> 24) & 0xff]) << 24) |
               (static_cast<std::uint32_t>(kSbox[(v >> 16) & 0xff]) << 16) |
               (static_cast<std::uint32_t>(kSbox[(v >> 8) & 0xff]) << 8) |
               static_cast<std::uint32_t>(kSbox[v & 0xff]);
    };

    std::uint8_t rc = 1;
    for (int i = nk; i < total_words; ++i) {
        std::uint32_t t = w[i - 1];
        if (i % nk == 0) {
            t = (t << 8) | (t >> 24);  // RotWord
            t = sub_word(t) ^ (static_cast<std::uint32_t>(rc) << 24);
            rc = kMul2[rc];
        } else if (nk > 6 && i % nk == 4) {
            t = sub_word(t);
        }
        w[i] = w[i - nk] ^ t;
    }

    AesRoundKeys out;
    out.rounds_ = nr;
    for (int r = 0; r <= nr; ++r) {
        for (int j = 0; j < 4; ++j) {
            std::uint32_t word = w[4 * r + j];
            out.keys_[static_cast<std::size_t>(r)][static_cast<std::size_t>(4 * j)] =
                static_cast<std::uint8_t>(word >> 24);
            out.keys_[static_cast<std::size_t>(r)][static_cast<std::size_t>(4 * j + 1)] =
                static_cast<std::uint8_t>(word >> 16);
            out.keys_[static_cast<std::size_t>(r)][static_cast<std::size_t>(4 * j + 2)] =
                static_cast<std::uint8_t>(word >> 8);
            out.keys_[static_cast<std::size_t>(r)][static_cast<std::size_t>(4 * j + 3)] =
                static_cast<std::uint8_t>(word);
        }
    }
    return out;
}

void aes_encrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                       const AesRoundKeys& keys, AesTrace* trace) {
    State s;
    std::memcpy(s.data(), in.data(), 16);
    add_round_key(s, keys.round_key(0));
    for (int r = 1; r < keys.rounds(); ++r) {
        sub_bytes(s);
        shift_rows(s);
        mix_columns(s);
        add_round_key(s, keys.round_key(r));
        if (trace) trace->rounds_executed++;
    }
    sub_bytes(s);
    shift_rows(s);
    add_round_key(s, keys.round_key(keys.rounds()));
    if (trace) trace->rounds_executed++;
    std::memcpy(out.data(), s.data(), 16);
}

void aes_decrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                       const AesRoundKeys& keys, AesTrace* trace) {
    State s;
    std::memcpy(s.data(), in.data(), 16);
    add_round_key(s, keys.round_key(keys.rounds()));
    for (int r = keys.rounds() - 1; r >= 1; --r) {
        inv_shift_rows(s);
        inv_sub_bytes(s);
        add_round_key(s, keys.round_key(r));
        inv_mix_columns(s);
        if (trace) trace->rounds_executed++;
    }
    inv_shift_rows(s);
    inv_sub_bytes(s);
    add_round_key(s, keys.round_key(0));
    if (trace) trace->rounds_executed++;
    std::memcpy(out.data(), s.data(), 16);
}

}  // namespace medcrypt::aes
