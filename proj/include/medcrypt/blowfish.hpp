#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace medcrypt::blowfish {

inline constexpr int kRounds = 16;

/// 18-entry P-array and four 256-entry S-boxes, fully determined by the key.
struct BlowfishState {
    std::array<std::uint32_t, 18> p{};
    std::array<std::array<std::uint32_t, 256>, 4> s{};
};

/// Seeds P and S from the cipher's published pi-derived constants, then mixes
/// in the key with the standard self-encrypting bootstrap. KeyLengthError
/// unless the key is 4..56 bytes (32..448 bits).
BlowfishState blowfish_init(std::span<const std::uint8_t> key);

std::uint64_t blowfish_encrypt_block(std::uint64_t block, const BlowfishState& state);
std::uint64_t blowfish_decrypt_block(std::uint64_t block, const BlowfishState& state);

}  // namespace medcrypt::blowfish
