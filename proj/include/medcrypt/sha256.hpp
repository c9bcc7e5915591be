#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "medcrypt/bytes.hpp"

namespace medcrypt {

/// Fixed 32-byte message digest.
using Digest = std::array<std::uint8_t, 32>;

/// Streaming SHA-256 (FIPS 180-4).
class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    Sha256& update(std::span<const std::uint8_t> data);
    Digest finish();

private:
    void compress(const std::uint8_t* block);

    std::array<std::uint32_t, 8> state_;
    std::array<std::uint8_t, 64> buf_;
    std::uint64_t total_ = 0;
    std::size_t fill_ = 0;
};

Digest sha256(std::span<const std::uint8_t> data);

}  // namespace medcrypt
