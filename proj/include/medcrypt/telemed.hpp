#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "medcrypt/cipher.hpp"
#include "medcrypt/digsig.hpp"
#include "medcrypt/rsa.hpp"

namespace medcrypt::telemed {

using Id16 = std::array<std::uint8_t, 16>;

/// One biomedical measurement row. The value is kept as its validated decimal
/// text so files and envelopes round-trip byte-identically.
struct PatientRecord {
    Id16 patient_id{};
    std::int64_t timestamp = 0;
    std::string measurement;
    std::string value;
    std::string unit;

    bool operator==(const PatientRecord&) const = default;
};

/// Validates field constraints; std::invalid_argument on violation.
PatientRecord make_record(Id16 patient_id, std::int64_t timestamp,
                          std::string measurement, std::string value,
                          std::string unit);

std::string format_record_line(const PatientRecord& record);
PatientRecord parse_record_line(const std::string& line);  // std::invalid_argument

Bytes serialize_records(const std::vector<PatientRecord>& records);
std::vector<PatientRecord> parse_records(std::span<const std::uint8_t> payload);

/// Append-only persistent store, one record per line. Appends take an
/// exclusive file lock; timestamps must be monotone per patient (OrderError).
class RecordStore {
public:
    static RecordStore open(std::string path);

    void append(const PatientRecord& record);
    const std::vector<PatientRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::vector<PatientRecord> records_;
};

/// The transfer unit: header fields, optional RSA-wrapped session key,
/// IV + ciphertext, and the sender's signature over everything before it.
struct SealedEnvelope {
    Id16 sender_id{};
    Id16 nonce{};
    SuiteId suite = SuiteId::AES128;
    Bytes wrapped_key;  // empty when no key accompanies this envelope
    Bytes iv;
    Bytes ciphertext;
    digsig::Signature signature;

    bool operator==(const SealedEnvelope& other) const;
};

/// Per-pair protocol state. One symmetric key exists per patient-doctor pair
/// at any moment; rotation replaces it in place and ships the replacement
/// inside the envelope that first uses it.
struct Session {
    Id16 session_id{};
    SuiteId suite = SuiteId::AES128;
    Bytes session_key;  // empty on a responder until the first envelope lands
    rsa::RsaPublicKey peer_public_key;
    rsa::RsaKeyPair own_keys;
    std::uint64_t send_counter = 0;
    std::uint64_t messages_since_rotation = 0;
    std::uint64_t rotation_period = 100;
    std::set<Id16> seen_nonces;
    Rng rng;

    Session() : rng(0) {}

    /// Receiving-side state awaiting the key-carrying first envelope.
    static Session responder(rsa::RsaKeyPair own_keys, rsa::RsaPublicKey peer_public_key);
};

/// Hybrid bootstrap: fresh session key, RSA-wrapped for the peer and carried
/// by the returned envelope (which seals an empty record batch).
std::pair<Session, SealedEnvelope> start_session(const rsa::RsaKeyPair& patient_keys,
                                                 const rsa::RsaPublicKey& doctor_pub,
                                                 SuiteId suite, Rng rng);

/// Serialize -> pad -> CBC-encrypt -> hash -> sign, with a fresh IV and nonce.
/// Rotates the session key first when the rotation period has elapsed; the
/// envelope then carries the wrapped replacement.
SealedEnvelope seal_envelope(Session& session, const std::vector<PatientRecord>& records);

/// Verification order: replay check, signature over hash(header||ciphertext),
/// key unwrap when present, then decrypt/unpad/parse. The nonce is recorded
/// only after full success. Throws ReplayError / AuthenticityError /
/// DecryptError.
std::vector<PatientRecord> open_envelope(const SealedEnvelope& env,
                                         const rsa::RsaKeyPair& own_keys,
                                         const rsa::RsaPublicKey& peer_pub,
                                         Session& session);

// RSA key wrapping, chunked below the modulus, each chunk led by one random
// nonzero byte.
Bytes wrap_key(std::span<const std::uint8_t> key_bytes, const rsa::RsaPublicKey& pub,
               Rng& rng);
Bytes unwrap_key(std::span<const std::uint8_t> wrapped, const rsa::RsaPrivateKey& priv);

inline constexpr std::array<std::uint8_t, 4> kFrameMagic = {0x4d, 0x45, 0x44, 0x43};
inline constexpr std::uint8_t kFrameVersion = 1;

/// Byte-exact framing, big-endian lengths throughout.
Bytes encode_frame(const SealedEnvelope& env);
/// Strict parse of exactly one frame; FrameError on bad magic, unknown
/// version or suite, truncation, overrun, or trailing bytes.
SealedEnvelope decode_frame(std::span<const std::uint8_t> bytes);

/// Splits a byte stream of back-to-back frames; FrameError on any residue.
std::vector<Bytes> split_frames(std::span<const std::uint8_t> stream);

// Session state persistence for the CLI (crypto state only; keys live in key
// files).
std::string session_to_json(const Session& session);
void session_merge_json(Session& session, const std::string& text);

}  // namespace medcrypt::telemed
