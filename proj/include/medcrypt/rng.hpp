#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "medcrypt/bytes.hpp"

namespace medcrypt {

/// Randomness source handed explicitly to every operation that needs one.
/// Seeded construction makes whole protocol runs reproducible; state can be
/// round-tripped through a string so interrupted sessions stay deterministic.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static Rng from_entropy();

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform value in [0, bound); bound must be nonzero.
    std::uint64_t below(std::uint64_t bound);

    void fill(std::span<std::uint8_t> out);
    Bytes bytes(std::size_t n);

    std::string save_state() const;
    static Rng restore_state(const std::string& state);

private:
    Rng() = default;
    std::mt19937_64 gen_;
};

}  // namespace medcrypt
