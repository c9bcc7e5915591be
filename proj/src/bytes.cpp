#include "medcrypt/bytes.hpp"

#include <stdexcept>

namespace medcrypt {

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) {
        throw std::invalid_argument("hex string has odd length");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw std::invalid_argument("invalid hex character");
        }
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::uint64_t load_be64(std::span<const std::uint8_t> in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | in[static_cast<std::size_t>(i)];
    return v;
}

std::uint32_t load_be32(std::span<const std::uint8_t> in) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | in[static_cast<std::size_t>(i)];
    return v;
}

std::uint16_t load_be16(std::span<const std::uint8_t> in) {
    return static_cast<std::uint16_t>((in[0] << 8) | in[1]);
}

void store_be64(std::uint64_t v, std::span<std::uint8_t> out) {
    for (int i = 7; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
}

void store_be32(std::uint32_t v, std::span<std::uint8_t> out) {
    for (int i = 3; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
}

void store_be16(std::uint16_t v, std::span<std::uint8_t> out) {
    out[0] = static_cast<std::uint8_t>(v >> 8);
    out[1] = static_cast<std::uint8_t>(v & 0xff);
}

void append_be64(std::uint64_t v, Bytes& out) {
    std::uint8_t tmp[8];
    store_be64(v, tmp);
    out.insert(out.end(), tmp, tmp + 8);
}

void append_be32(std::uint32_t v, Bytes& out) {
    std::uint8_t tmp[4];
    store_be32(v, tmp);
    out.insert(out.end(), tmp, tmp + 4);
}

void append_be16(std::uint16_t v, Bytes& out) {
    std::uint8_t tmp[2];
    store_be16(v, tmp);
    out.insert(out.end(), tmp, tmp + 2);
}

}  // namespace medcrypt
