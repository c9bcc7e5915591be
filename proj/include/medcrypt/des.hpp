#pragma once

#include <array>
#include <cstdint>

namespace medcrypt::des {

inline constexpr int kRounds = 16;

/// Per-round execution counter, fillable by the block functions so the
/// Feistel structure can be asserted from outside.
struct FeistelTrace {
    int rounds_executed = 0;
};

/// The sixteen 48-bit round keys derived from a 64-bit key (parity bits
/// ignored).
struct DesSubkeys {
    std::array<std::uint64_t, kRounds> round_keys{};
};

DesSubkeys des_key_schedule(std::uint64_t key);

std::uint64_t des_encrypt_block(std::uint64_t block, const DesSubkeys& subkeys,
                                FeistelTrace* trace = nullptr);
std::uint64_t des_decrypt_block(std::uint64_t block, const DesSubkeys& subkeys,
                                FeistelTrace* trace = nullptr);

/// Three independent 64-bit raw keys, 168 effective bits.
struct TdesKeyBundle {
    std::uint64_t k1 = 0;
    std::uint64_t k2 = 0;
    std::uint64_t k3 = 0;
};

/// EDE composition: encrypt under k1, decrypt under k2, encrypt under k3.
std::uint64_t tdes_encrypt_block(std::uint64_t block, const TdesKeyBundle& bundle,
                                 FeistelTrace* trace = nullptr);
std::uint64_t tdes_decrypt_block(std::uint64_t block, const TdesKeyBundle& bundle,
                                 FeistelTrace* trace = nullptr);

namespace detail {

// Pre-permuted halves, exposed so the mode-level adapters can schedule keys
// once and skip the IP/FP cancellation inside the EDE stack.
struct HalfBlock {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
};

HalfBlock initial_permutation(std::uint64_t block);
std::uint64_t final_permutation(HalfBlock half);
HalfBlock run_rounds(HalfBlock in, const DesSubkeys& subkeys, bool decrypt,
                     FeistelTrace* trace);

}  // namespace detail

}  // namespace medcrypt::des
