#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace medcrypt {

using Bytes = std::vector<std::uint8_t>;

/// Lowercase hex encoding.
std::string to_hex(std::span<const std::uint8_t> data);

/// Decodes lowercase or uppercase hex; throws std::invalid_argument on odd
/// length or non-hex characters.
Bytes from_hex(const std::string& hex);

std::uint64_t load_be64(std::span<const std::uint8_t> in);
std::uint32_t load_be32(std::span<const std::uint8_t> in);
std::uint16_t load_be16(std::span<const std::uint8_t> in);
void store_be64(std::uint64_t v, std::span<std::uint8_t> out);
void store_be32(std::uint32_t v, std::span<std::uint8_t> out);
void store_be16(std::uint16_t v, std::span<std::uint8_t> out);

void append_be64(std::uint64_t v, Bytes& out);
void append_be32(std::uint32_t v, Bytes& out);
void append_be16(std::uint16_t v, Bytes& out);

}  // namespace medcrypt
