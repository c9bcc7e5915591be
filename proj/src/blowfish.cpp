#include "medcrypt/blowfish.hpp"

#include <cstdint>

#include "medcrypt/errors.hpp"

namespace medcrypt::blowfish {

namespace {

#include "blowfish_constants.inc"

inline std::uint32_t f(const BlowfishState& st, std::uint32_t x) {
    return (((st.s[0][(x >> 24) & 0xff] + st.s[1][(x >> 16) & 0xff]) ^
             st.s[2][(x >> 8) & 0xff]) +
            st.s[3][x & 0xff]);
}

inline void encrypt_halves(const BlowfishState& st, std::uint32_t& l, std::uint32_t& r) {
    for (int i = 0; i < kRounds; i += 2) {
        l ^= st.p[static_cast<std::size_t>(i)];
        r ^= f(st, l);
        r ^= st.p[static_cast<std::size_t>(i + 1)];
        l ^= f(st, r);
    }
    l ^= st.p[16];
    r ^= st.p[17];
    std::uint32_t t = l;
    l = r;
    r = t;
}

inline void decrypt_halves(const BlowfishState& st, std::uint32_t& l, std::uint32_t& r) {
    for (int i = kRounds + 1; i > 1; i -= 2) {
        l ^= st.p[static_cast<std::size_t>(i)];
        r ^= f(st, l);
        r ^= st.p[static_cast<std::size_t>(i - 1)];
        l ^= f(st, r);
    }
    l ^= st.p[1];
    r ^= st.p[0];
    std::uint32_t t = l;
    l = r;
    r = t;
}

}  // namespace

BlowfishState blowfish_init(std::span<const std::uint8_t> key) {
    if (key.size() < 4 || key.size() > 56) {
        throw KeyLengthError("Blowfish key must be 32..448 bits (4..56 bytes)");
    }

    BlowfishState st;
    for (std::size_t i = 0; i < 18; ++i) st.p[i] = kPInit[i];
    for (std::size_t b = 0; b < 4; ++b) {
        for (std::size_t i = 0; i < 256; ++i) st.s[b][i] = kSInit[b][i];
    }

    std::size_t j = 0;
    for (std::size_t i = 0; i < 18; ++i) {
        std::uint32_t d = 0;
        for (int k = 0; k < 4; ++k) {
            d = (d << 8) | key[j % key.size()];
            ++j;
        }
        st.p[i] ^= d;
    }

    // Standard bootstrap: the evolving state repeatedly encrypts a running
    // block that overwrites P and then every S entry.
    std::uint32_t l = 0;
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < 18; i += 2) {
        encrypt_halves(st, l, r);
        st.p[i] = l;
        st.p[i + 1] = r;
    }
    for (std::size_t b = 0; b < 4; ++b) {
        for (std::size_t i = 0; i < 256; i += 2) {
            encrypt_halves(st, l, r);
            st.s[b][i] = l;
            st.s[b][i + 1] = r;
        }
    }
    return st;
}

std::uint64_t blowfish_encrypt_block(std::uint64_t block, const BlowfishState& state) {
    std::uint32_t l = static_cast<std::uint32_t>(block >> 32);
    std::uint32_t r = static_cast<std::uint32_t>(block);
    encrypt_halves(state, l, r);
    return (static_cast<std::uint64_t>(l) << 32) | r;
}

std::uint64_t blowfish_decrypt_block(std::uint64_t block, const BlowfishState& state) {
    std::uint32_t l = static_cast<std::uint32_t>(block >> 32);
    std::uint32_t r = static_cast<std::uint32_t>(block);
    decrypt_halves(state, l, r);
    return (static_cast<std::uint64_t>(l) << 32) | r;
}

}  // namespace medcrypt::blowfish
