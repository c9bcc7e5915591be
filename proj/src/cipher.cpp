#include "medcrypt/cipher.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "medcrypt/aes.hpp"
#include "medcrypt/blowfish.hpp"
#include "medcrypt/des.hpp"

namespace medcrypt {

namespace {

constexpr SuiteInfo kSuites[] = {
    {SuiteId::DES, "DES", 8, 56, 56, 8},
    {SuiteId::TDES, "TDES", 8, 168, 168, 24},
    {SuiteId::AES128, "AES128", 16, 128, 128, 16},
    {SuiteId::AES192, "AES192", 16, 192, 192, 24},
    {SuiteId::AES256, "AES256", 16, 256, 256, 32},
    {SuiteId::BLOWFISH, "BLOWFISH", 8, 32, 448, 16},
};

}  // namespace

const SuiteInfo& suite_info(SuiteId id) {
    for (const SuiteInfo& s : kSuites) {
        if (s.id == id) return s;
    }
    throw std::invalid_argument("unknown cipher suite");
}

SuiteId suite_from_name(const std::string& name) {
    for (const SuiteInfo& s : kSuites) {
        if (name == s.name) return s.id;
    }
    throw std::invalid_argument("unknown cipher suite name: " + name);
}

SuiteId suite_from_wire(std::uint8_t byte) {
    for (const SuiteInfo& s : kSuites) {
        if (static_cast<std::uint8_t>(s.id) == byte) return s.id;
    }
    throw FrameError("unknown suite id byte");
}

BlockKey BlockKey::create(SuiteId suite, Bytes key_bytes) {
    const SuiteInfo& info = suite_info(suite);
    if (suite == SuiteId::BLOWFISH) {
        unsigned bits = static_cast<unsigned>(key_bytes.size()) * 8;
        if (bits < info.min_key_bits || bits > info.max_key_bits) {
            throw KeyLengthError("BLOWFISH key must be 32..448 bits");
        }
    } else if (key_bytes.size() != info.key_bytes) {
        std::ostringstream msg;
        msg << info.name << " key must be " << info.key_bytes << " bytes, got "
            << key_bytes.size();
        throw KeyLengthError(msg.str());
    }
    return BlockKey{suite, std::move(key_bytes)};
}

BlockKey BlockKey::random(SuiteId suite, Rng& rng, std::size_t key_len) {
    const SuiteInfo& info = suite_info(suite);
    std::size_t len = key_len != 0 ? key_len : info.key_bytes;
    return create(suite, rng.bytes(len));
}

InitializationVector InitializationVector::create(SuiteId suite, Bytes iv_bytes) {
    if (iv_bytes.size() != suite_info(suite).block_size) {
        throw LengthError("IV length must equal the suite block size");
    }
    return InitializationVector{std::move(iv_bytes)};
}

InitializationVector InitializationVector::random(SuiteId suite, Rng& rng) {
    return InitializationVector{rng.bytes(suite_info(suite).block_size)};
}

InitializationVector InitializationVector::zero(SuiteId suite) {
    return InitializationVector{Bytes(suite_info(suite).block_size, 0)};
}

Bytes pad(std::span<const std::uint8_t> data, std::size_t block_size) {
    if (block_size < 1 || block_size > 255) {
        throw std::invalid_argument("pad: block size must be in [1, 255]");
    }
    std::size_t pad_len = block_size - data.size() % block_size;
    Bytes out(data.begin(), data.end());
    out.insert(out.end(), pad_len, static_cast<std::uint8_t>(pad_len));
    return out;
}

Bytes unpad(std::span<const std::uint8_t> data, std::size_t block_size) {
    if (block_size < 1 || block_size > 255) {
        throw std::invalid_argument("unpad: block size must be in [1, 255]");
    }
    if (data.empty() || data.size() % block_size != 0) {
        throw PaddingError("unpad: input is not a whole number of blocks");
    }
    std::uint8_t count = data.back();
    if (count == 0 || count > block_size) {
        throw PaddingError("unpad: pad count out of range");
    }
    for (std::size_t i = data.size() - count; i < data.size(); ++i) {
        if (data[i] != count) {
            throw PaddingError("unpad: inconsistent pad bytes");
        }
    }
    return Bytes(data.begin(), data.end() - count);
}

Mode mode_from_name(const std::string& name) {
    if (name == "ECB" || name == "ecb") return Mode::ECB;
    if (name == "CBC" || name == "cbc") return Mode::CBC;
    throw std::invalid_argument("unknown mode: " + name);
}

const char* mode_name(Mode mode) {
    return mode == Mode::ECB ? "ECB" : "CBC";
}

namespace {

class DesCipher final : public BlockCipher {
public:
    explicit DesCipher(const Bytes& key)
        : subkeys_(des::des_key_schedule(load_be64(key))) {}

    std::size_t block_size() const override { return 8; }

    void encrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const override {
        store_be64(des::des_encrypt_block(load_be64(in), subkeys_), out);
    }
    void decrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const override {
        store_be64(des::des_decrypt_block(load_be64(in), subkeys_), out);
    }

private:
    des::DesSubkeys subkeys_;
};

class TdesCipher final : public BlockCipher {
public:
    explicit TdesCipher(const Bytes& key)
        : ks1_(des::des_key_schedule(load_be64(std::span(key).subspan(0, 8)))),
          ks2_(des::des_key_schedule(load_be64(std::span(key).subspan(8, 8)))),
          ks3_(des::des_key_schedule(load_be64(std::span(key).subspan(16, 8)))) {}

    std::size_t block_size() const override { return 8; }

    void encrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const override {
        auto h = des::detail::initial_permutation(load_be64(in));
        h = des::detail::run_rounds(h, ks1_, false, nullptr);
        h = des::detail::run_rounds(h, ks2_, true, nullptr);
        h = des::detail::run_rounds(h, ks3_, false, nullptr);
        store_be64(des::detail::final_permutation(h), out);
    }
    void decrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const override {
        auto h = des::detail::initial_permutation(load_be64(in));
        h = des::detail::run_rounds(h, ks3_, true, nullptr);
        h = des::detail::run_rounds(h, ks2_, false, nullptr);
        h = des::detail::run_rounds(h, ks1_, true, nullptr);
        store_be64(des::detail::final_permutation(h), out);
    }

private:
    des::DesSubkeys ks1_, ks2_, ks3_;
};

class AesCipher final : public BlockCipher {
public:
    explicit AesCipher(const Bytes& key) : keys_(aes::AesRoundKeys::expand(key)) {}

    std::size_t block_size() const override { return 16; }

    void encrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const override {
        aes::aes_encrypt_block(in, out, keys_);
    }
    void decrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const override {
        aes::aes_decrypt_block(in, out, keys_);
    }

private:
    aes::AesRoundKeys keys_;
};

class BlowfishCipher final : public BlockCipher {
public:
    explicit BlowfishCipher(const Bytes& key) : state_(blowfish::blowfish_init(key)) {}

    std::size_t block_size() const override { return 8; }

    void encrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const override {
        store_be64(blowfish::blowfish_encrypt_block(load_be64(in), state_), out);
    }
    void decrypt_block(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const override {
        store_be64(blowfish::blowfish_decrypt_block(load_be64(in), state_), out);
    }

private:
    blowfish::BlowfishState state_;
};

}  // namespace

std::unique_ptr<BlockCipher> make_block_cipher(const BlockKey& key) {
    // Re-validate so a hand-built BlockKey cannot smuggle a bad length in.
    BlockKey checked = BlockKey::create(key.suite, key.key_bytes);
    switch (checked.suite) {
        case SuiteId::DES:
            return std::make_unique<DesCipher>(checked.key_bytes);
        case SuiteId::TDES:
            return std::make_unique<TdesCipher>(checked.key_bytes);
        case SuiteId::AES128:
        case SuiteId::AES192:
        case SuiteId::AES256:
            return std::make_unique<AesCipher>(checked.key_bytes);
        case SuiteId::BLOWFISH:
            return std::make_unique<BlowfishCipher>(checked.key_bytes);
    }
    throw std::invalid_argument("unknown cipher suite");
}

namespace {

void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}

}  // namespace

Bytes mode_encrypt(const BlockCipher& cipher, const InitializationVector& iv,
                   Mode mode, std::span<const std::uint8_t> plaintext) {
    const std::size_t bs = cipher.block_size();
    if (iv.iv_bytes.size() != bs) {
        throw LengthError("IV length must equal the cipher block size");
    }
    if (plaintext.size() % bs != 0) {
        throw LengthError("mode_encrypt: plaintext is not a whole number of blocks");
    }
    Bytes out(plaintext.size());
    if (mode == Mode::ECB) {
        for (std::size_t off = 0; off < plaintext.size(); off += bs) {
            cipher.encrypt_block(plaintext.subspan(off, bs),
                                 std::span(out).subspan(off, bs));
        }
        return out;
    }
    Bytes chain = iv.iv_bytes;
    Bytes block(bs);
    for (std::size_t off = 0; off < plaintext.size(); off += bs) {
        std::copy_n(plaintext.begin() + static_cast<std::ptrdiff_t>(off), bs, block.begin());
        xor_into(block.data(), chain.data(), bs);
        cipher.encrypt_block(block, std::span(out).subspan(off, bs));
        std::copy_n(out.begin() + static_cast<std::ptrdiff_t>(off), bs, chain.begin());
    }
    return out;
}

Bytes mode_decrypt(const BlockCipher& cipher, const InitializationVector& iv,
                   Mode mode, std::span<const std::uint8_t> ciphertext) {
    const std::size_t bs = cipher.block_size();
    if (iv.iv_bytes.size() != bs) {
        throw LengthError("IV length must equal the cipher block size");
    }
    if (ciphertext.size() % bs != 0) {
        throw LengthError("mode_decrypt: ciphertext is not a whole number of blocks");
    }
    Bytes out(ciphertext.size());
    if (mode == Mode::ECB) {
        for (std::size_t off = 0; off < ciphertext.size(); off += bs) {
            cipher.decrypt_block(ciphertext.subspan(off, bs),
                                 std::span(out).subspan(off, bs));
        }
        return out;
    }
    Bytes chain = iv.iv_bytes;
    for (std::size_t off = 0; off < ciphertext.size(); off += bs) {
        cipher.decrypt_block(ciphertext.subspan(off, bs), std::span(out).subspan(off, bs));
        xor_into(out.data() + off, chain.data(), bs);
        std::copy_n(ciphertext.begin() + static_cast<std::ptrdiff_t>(off), bs, chain.begin());
    }
    return out;
}

std::string format_key_line(const BlockKey& key) {
    return std::string(suite_info(key.suite).name) + ":" + to_hex(key.key_bytes);
}

BlockKey parse_key_line(const std::string& line) {
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("key line must be SUITE:<hex>");
    }
    SuiteId suite = suite_from_name(line.substr(0, colon));
    return BlockKey::create(suite, from_hex(line.substr(colon + 1)));
}

BlockKey load_key_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open key file: " + path);
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        return parse_key_line(line);
    }
    throw std::runtime_error("key file has no key line: " + path);
}

void save_key_file(const std::string& path, const BlockKey& key) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write key file: " + path);
    }
    out << format_key_line(key) << "\n";
}

}  // namespace medcrypt
