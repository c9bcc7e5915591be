#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "medcrypt/bytes.hpp"
#include "medcrypt/errors.hpp"
#include "medcrypt/rng.hpp"

namespace medcrypt {

/// Supported block-cipher suites. Numeric values double as the wire encoding.
enum class SuiteId : std::uint8_t {
    DES = 1,
    TDES = 2,
    AES128 = 3,
    AES192 = 4,
    AES256 = 5,
    BLOWFISH = 6,
};

struct SuiteInfo {
    SuiteId id;
    const char* name;
    std::size_t block_size;  // bytes
    unsigned min_key_bits;   // effective key bits (lower bound for Blowfish)
    unsigned max_key_bits;
    std::size_t key_bytes;   // raw key material length; default for Blowfish
};

const SuiteInfo& suite_info(SuiteId id);
SuiteId suite_from_name(const std::string& name);   // std::invalid_argument
SuiteId suite_from_wire(std::uint8_t byte);         // FrameError on unknown id

/// Symmetric key material tagged with its suite so a key can never be fed to
/// the wrong cipher.
struct BlockKey {
    SuiteId suite;
    Bytes key_bytes;

    /// Validates length against the suite; KeyLengthError otherwise.
    static BlockKey create(SuiteId suite, Bytes key_bytes);
    static BlockKey random(SuiteId suite, Rng& rng, std::size_t key_len = 0);
};

struct InitializationVector {
    Bytes iv_bytes;

    static InitializationVector create(SuiteId suite, Bytes iv_bytes);  // LengthError
    static InitializationVector random(SuiteId suite, Rng& rng);
    static InitializationVector zero(SuiteId suite);
};

/// PKCS#7-style padding. block_size must be in [1, 255]; always appends at
/// least one byte, a full block when the input is already aligned.
Bytes pad(std::span<const std::uint8_t> data, std::size_t block_size);

/// Strict inverse of pad; PaddingError on any tail that violates the rule.
Bytes unpad(std::span<const std::uint8_t> data, std::size_t block_size);

enum class Mode { ECB, CBC };

Mode mode_from_name(const std::string& name);  // std::invalid_argument
const char* mode_name(Mode mode);

/// One keyed block transform. Implementations bind a validated BlockKey to
/// the matching cipher's block functions.
class BlockCipher {
public:
    virtual ~BlockCipher() = default;
    virtual std::size_t block_size() const = 0;
    virtual void encrypt_block(std::span<const std::uint8_t> in,
                               std::span<std::uint8_t> out) const = 0;
    virtual void decrypt_block(std::span<const std::uint8_t> in,
                               std::span<std::uint8_t> out) const = 0;
};

std::unique_ptr<BlockCipher> make_block_cipher(const BlockKey& key);

/// Applies the block cipher across a padded message. ECB is blockwise and
/// deterministic; CBC chains each plaintext block with the previous
/// ciphertext block, the IV seeding the first. LengthError when the input is
/// not a whole number of blocks.
Bytes mode_encrypt(const BlockCipher& cipher, const InitializationVector& iv,
                   Mode mode, std::span<const std::uint8_t> plaintext);
Bytes mode_decrypt(const BlockCipher& cipher, const InitializationVector& iv,
                   Mode mode, std::span<const std::uint8_t> ciphertext);

// Key files: one "SUITE:<lowercase hex>" entry per line.
std::string format_key_line(const BlockKey& key);
BlockKey parse_key_line(const std::string& line);
BlockKey load_key_file(const std::string& path);
void save_key_file(const std::string& path, const BlockKey& key);

}  // namespace medcrypt
