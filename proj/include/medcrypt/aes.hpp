#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "medcrypt/bytes.hpp"

namespace medcrypt::aes {

/// One 16-byte block in the standard column-major state layout: byte i holds
/// row i%4, column i/4.
using State = std::array<std::uint8_t, 16>;
using RoundKey = std::array<std::uint8_t, 16>;

struct AesTrace {
    int rounds_executed = 0;
};

/// Expanded key: rounds() is 10/12/14 for 128/192/256-bit keys, with
/// rounds()+1 round keys.
class AesRoundKeys {
public:
    /// KeyLengthError unless key is 16, 24, or 32 bytes.
    static AesRoundKeys expand(std::span<const std::uint8_t> key);

    int rounds() const { return rounds_; }
    const RoundKey& round_key(int i) const { return keys_[static_cast<std::size_t>(i)]; }
    std::size_t round_key_count() const { return static_cast<std::size_t>(rounds_) + 1; }

private:
    AesRoundKeys() = default;
    int rounds_ = 0;
    std::array<RoundKey, 15> keys_{};
};

void aes_encrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                       const AesRoundKeys& keys, AesTrace* trace = nullptr);
void aes_decrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                       const AesRoundKeys& keys, AesTrace* trace = nullptr);

// Round phases, each a bijection on the state.
void sub_bytes(State& s);
void inv_sub_bytes(State& s);
void shift_rows(State& s);
void inv_shift_rows(State& s);
void mix_columns(State& s);
void inv_mix_columns(State& s);
void add_round_key(State& s, const RoundKey& rk);

/// GF(2^8) product under the AES reduction polynomial x^8+x^4+x^3+x+1.
std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b);

const std::array<std::uint8_t, 256>& sbox();
const std::array<std::uint8_t, 256>& inv_sbox();

}  // namespace medcrypt::aes
