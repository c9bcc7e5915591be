#include "medcrypt/telemed.hpp"

#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace medcrypt::telemed {

namespace {

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c == '\t' || c == '\n' || c == '\r') return false;
    }
    return true;
}

bool valid_decimal(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && s[i] == '-') ++i;
    std::size_t digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        ++i;
        ++digits;
    }
    if (digits == 0) return false;
    if (i == s.size()) return true;
    if (s[i] != '.') return false;
    ++i;
    digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        ++i;
        ++digits;
    }
    return digits > 0 && i == s.size();
}

Id16 id_from_hex(const std::string& hex) {
    Bytes raw = from_hex(hex);
    if (raw.size() != 16) {
        throw std::invalid_argument("patient id must be 16 bytes (32 hex chars)");
    }
    Id16 out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

// RAII advisory lock over an open stdio stream.
class LockedFile {
public:
    LockedFile(const std::string& path, const char* mode, int lock_op) {
        file_ = std::fopen(path.c_str(), mode);
        if (file_ == nullptr) {
            throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
        }
        if (flock(fileno(file_), lock_op) != 0) {
            std::fclose(file_);
            throw std::runtime_error("cannot lock " + path);
        }
    }
    ~LockedFile() {
        if (file_ != nullptr) {
            flock(fileno(file_), LOCK_UN);
            std::fclose(file_);
        }
    }
    LockedFile(const LockedFile&) = delete;
    LockedFile& operator=(const LockedFile&) = delete;

    std::FILE* get() const { return file_; }

private:
    std::FILE* file_ = nullptr;
};

}  // namespace

PatientRecord make_record(Id16 patient_id, std::int64_t timestamp,
                          std::string measurement, std::string value,
                          std::string unit) {
    if (!valid_label(measurement)) {
        throw std::invalid_argument("measurement must be a non-empty single-line label");
    }
    if (!valid_label(unit)) {
        throw std::invalid_argument("unit must be a non-empty single-line label");
    }
    if (!valid_decimal(value)) {
        throw std::invalid_argument("value must be a decimal number: " + value);
    }
    return PatientRecord{patient_id, timestamp, std::move(measurement), std::move(value),
                         std::move(unit)};
}

std::string format_record_line(const PatientRecord& record) {
    std::ostringstream os;
    os << to_hex(record.patient_id) << "\t" << record.timestamp << "\t"
       << record.measurement << "\t" << record.value << "\t" << record.unit;
    return os.str();
}

PatientRecord parse_record_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (fields.size() != 5) {
        throw std::invalid_argument("record line must have 5 tab-separated fields");
    }
    Id16 id = id_from_hex(fields[0]);
    const std::string& ts = fields[1];
    std::size_t idx = 0;
    std::int64_t timestamp = 0;
    try {
        timestamp = std::stoll(ts, &idx);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad timestamp: " + ts);
    }
    if (idx != ts.size() || ts.empty()) {
        throw std::invalid_argument("bad timestamp: " + ts);
    }
    return make_record(id, timestamp, fields[2], fields[3], fields[4]);
}

Bytes serialize_records(const std::vector<PatientRecord>& records) {
    std::string out;
    for (const PatientRecord& r : records) {
        out += format_record_line(r);
        out += '\n';
    }
    return Bytes(out.begin(), out.end());
}

std::vector<PatientRecord> parse_records(std::span<const std::uint8_t> payload) {
    std::vector<PatientRecord> out;
    std::string text(payload.begin(), payload.end());
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) {
            throw std::invalid_argument("record payload must end with a newline");
        }
        out.push_back(parse_record_line(text.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

RecordStore RecordStore::open(std::string path) {
    RecordStore store;
    store.path_ = std::move(path);
    if (!std::filesystem::exists(store.path_)) {
        return store;
    }
    LockedFile file(store.path_, "rb", LOCK_SH);
    std::string content;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof(buf), file.get())) > 0) {
        content.append(buf, got);
    }
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t pos = content.find('\n', start);
        std::string line = content.substr(
            start, pos == std::string::npos ? std::string::npos : pos - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) {
            store.records_.push_back(parse_record_line(line));
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return store;
}

void RecordStore::append(const PatientRecord& record) {
    // Timestamps are monotone per patient within a store.
    for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
        if (it->patient_id == record.patient_id) {
            if (record.timestamp < it->timestamp) {
                throw OrderError("record timestamp regresses for this patient");
            }
            break;
        }
    }
    LockedFile file(path_, "ab", LOCK_EX);
    std::string line = format_record_line(record) + "\n";
    if (std::fwrite(line.data(), 1, line.size(), file.get()) != line.size()) {
        throw std::runtime_error("short write to " + path_);
    }
    records_.push_back(record);
}

bool SealedEnvelope::operator==(const SealedEnvelope& other) const {
    return sender_id == other.sender_id && nonce == other.nonce && suite == other.suite &&
           wrapped_key == other.wrapped_key && iv == other.iv &&
           ciphertext == other.ciphertext &&
           signature.sig_value == other.signature.sig_value &&
           signature.signer_key_id == other.signature.signer_key_id;
}

Session Session::responder(rsa::RsaKeyPair own_keys, rsa::RsaPublicKey peer_public_key) {
    Session s;
    s.session_id = rsa::key_fingerprint(peer_public_key.n);
    s.suite = SuiteId::AES128;
    s.session_key.clear();
    s.peer_public_key = std::move(peer_public_key);
    s.own_keys = std::move(own_keys);
    s.rng = Rng::from_entropy();
    return s;
}

Bytes wrap_key(std::span<const std::uint8_t> key_bytes, const rsa::RsaPublicKey& pub,
               Rng& rng) {
    if (key_bytes.empty()) {
        throw std::invalid_argument("wrap_key: empty key");
    }
    const std::size_t modulus_len = (mpz_sizeinbase(pub.n.get_mpz_t(), 2) + 7) / 8;
    if (modulus_len < 3) {
        throw CryptoError("wrap_key: modulus too small to carry key material");
    }
    const std::size_t chunk_len = modulus_len - 2;
    Bytes out;
    for (std::size_t off = 0; off < key_bytes.size(); off += chunk_len) {
        std::size_t take = std::min(chunk_len, key_bytes.size() - off);
        Bytes plain;
        // A random nonzero lead byte keeps every chunk below the modulus and
        // anchors its length after decryption.
        plain.push_back(static_cast<std::uint8_t>(1 + rng.below(255)));
        plain.insert(plain.end(), key_bytes.begin() + static_cast<std::ptrdiff_t>(off),
                     key_bytes.begin() + static_cast<std::ptrdiff_t>(off + take));
        mpz_class c = rsa::rsa_encrypt(rsa::bytes_to_mpz(plain), pub);
        Bytes chunk = rsa::mpz_to_bytes(c, modulus_len);
        out.insert(out.end(), chunk.begin(), chunk.end());
    }
    return out;
}

Bytes unwrap_key(std::span<const std::uint8_t> wrapped, const rsa::RsaPrivateKey& priv) {
    const std::size_t modulus_len = (mpz_sizeinbase(priv.n.get_mpz_t(), 2) + 7) / 8;
    if (wrapped.empty() || wrapped.size() % modulus_len != 0) {
        throw DecryptError("unwrap_key: wrapped key length mismatch");
    }
    Bytes out;
    for (std::size_t off = 0; off < wrapped.size(); off += modulus_len) {
        mpz_class c = rsa::bytes_to_mpz(wrapped.subspan(off, modulus_len));
        mpz_class m;
        try {
            m = rsa::rsa_decrypt(c, priv);
        } catch (const MessageRangeError&) {
            throw DecryptError("unwrap_key: chunk exceeds the modulus");
        }
        Bytes plain = rsa::mpz_to_bytes(m);
        if (plain.size() < 2 || plain.size() > modulus_len - 1) {
            throw DecryptError("unwrap_key: chunk has no key payload");
        }
        out.insert(out.end(), plain.begin() + 1, plain.end());
    }
    return out;
}

namespace {

Bytes encode_prefix(const SealedEnvelope& env) {
    Bytes out;
    out.insert(out.end(), kFrameMagic.begin(), kFrameMagic.end());
    out.push_back(kFrameVersion);
    out.insert(out.end(), env.sender_id.begin(), env.sender_id.end());
    out.insert(out.end(), env.nonce.begin(), env.nonce.end());
    out.push_back(static_cast<std::uint8_t>(env.suite));
    if (env.wrapped_key.size() > 0xffff) {
        throw std::invalid_argument("wrapped key too long for the frame format");
    }
    append_be16(static_cast<std::uint16_t>(env.wrapped_key.size()), out);
    out.insert(out.end(), env.wrapped_key.begin(), env.wrapped_key.end());
    if (env.iv.size() > 0xff) {
        throw std::invalid_argument("IV too long for the frame format");
    }
    out.push_back(static_cast<std::uint8_t>(env.iv.size()));
    out.insert(out.end(), env.iv.begin(), env.iv.end());
    if (env.ciphertext.size() > 0xffffffffull) {
        throw std::invalid_argument("ciphertext too long for the frame format");
    }
    append_be32(static_cast<std::uint32_t>(env.ciphertext.size()), out);
    out.insert(out.end(), env.ciphertext.begin(), env.ciphertext.end());
    return out;
}

SealedEnvelope seal_raw(Session& session, const std::vector<PatientRecord>& records,
                        bool include_key) {
    if (session.session_key.empty()) {
        throw CryptoError("seal: session has no symmetric key");
    }
    SealedEnvelope env;
    env.sender_id = rsa::key_fingerprint(session.own_keys.n);
    session.rng.fill(env.nonce);
    env.suite = session.suite;
    if (include_key) {
        env.wrapped_key = wrap_key(session.session_key, session.peer_public_key, session.rng);
    }

    BlockKey key = BlockKey::create(session.suite, session.session_key);
    auto cipher = make_block_cipher(key);
    InitializationVector iv = InitializationVector::random(session.suite, session.rng);
    env.iv = iv.iv_bytes;
    Bytes payload = pad(serialize_records(records), cipher->block_size());
    env.ciphertext = mode_encrypt(*cipher, iv, Mode::CBC, payload);

    // Encrypt, then hash, then sign: the signature covers every header byte
    // and the ciphertext.
    Digest digest = sha256(encode_prefix(env));
    env.signature = digsig::sign(digest, session.own_keys.private_key());
    session.send_counter += 1;
    return env;
}

}  // namespace

std::pair<Session, SealedEnvelope> start_session(const rsa::RsaKeyPair& patient_keys,
                                                 const rsa::RsaPublicKey& doctor_pub,
                                                 SuiteId suite, Rng rng) {
    Session session;
    session.suite = suite;
    session.peer_public_key = doctor_pub;
    session.own_keys = patient_keys;
    session.rng = std::move(rng);
    session.rng.fill(session.session_id);
    session.session_key = session.rng.bytes(suite_info(suite).key_bytes);
    session.send_counter = 0;
    session.messages_since_rotation = 0;

    SealedEnvelope env = seal_raw(session, {}, true);
    return {std::move(session), std::move(env)};
}

SealedEnvelope seal_envelope(Session& session, const std::vector<PatientRecord>& records) {
    bool rotate = session.messages_since_rotation >= session.rotation_period;
    if (rotate) {
        session.session_key = session.rng.bytes(suite_info(session.suite).key_bytes);
        session.messages_since_rotation = 0;
    }
    SealedEnvelope env = seal_raw(session, records, rotate);
    session.messages_since_rotation += 1;
    return env;
}

std::vector<PatientRecord> open_envelope(const SealedEnvelope& env,
                                         const rsa::RsaKeyPair& own_keys,
                                         const rsa::RsaPublicKey& peer_pub,
                                         Session& session) {
    // 1. Replay defense: a nonce is accepted exactly once.
    if (session.seen_nonces.contains(env.nonce)) {
        throw ReplayError("open: nonce already accepted in this session");
    }

    // 2. Authenticity: the signature must cover header and ciphertext.
    if (env.sender_id != rsa::key_fingerprint(peer_pub.n)) {
        throw AuthenticityError("open: sender id does not match the peer key");
    }
    Digest digest = sha256(encode_prefix(env));
    if (!digsig::verify(digest, env.signature, peer_pub)) {
        throw AuthenticityError("open: signature verification failed");
    }

    // 3. Session-key establishment or rotation rides inside the envelope.
    SuiteId suite = session.suite;
    Bytes key_bytes = session.session_key;
    if (!env.wrapped_key.empty()) {
        suite = env.suite;
        key_bytes = unwrap_key(env.wrapped_key, own_keys.private_key());
    } else {
        if (key_bytes.empty()) {
            throw DecryptError("open: no session key established yet");
        }
        if (env.suite != suite) {
            throw DecryptError("open: envelope suite does not match the session");
        }
    }

    // 4. Decrypt, unpad, parse.
    std::vector<PatientRecord> records;
    try {
        BlockKey key = BlockKey::create(suite, key_bytes);
        auto cipher = make_block_cipher(key);
        InitializationVector iv = InitializationVector::create(suite, env.iv);
        Bytes plain = mode_decrypt(*cipher, iv, Mode::CBC, env.ciphertext);
        records = parse_records(unpad(plain, cipher->block_size()));
    } catch (const DecryptError&) {
        throw;
    } catch (const std::exception& e) {
        throw DecryptError(std::string("open: payload rejected: ") + e.what());
    }

    // 5. Commit state only after full success.
    session.suite = suite;
    session.session_key = std::move(key_bytes);
    session.seen_nonces.insert(env.nonce);
    return records;
}

Bytes encode_frame(const SealedEnvelope& env) {
    Bytes out = encode_prefix(env);
    Bytes sig = rsa::mpz_to_bytes(env.signature.sig_value);
    if (sig.size() > 0xffff) {
        throw std::invalid_argument("signature too long for the frame format");
    }
    append_be16(static_cast<std::uint16_t>(sig.size()), out);
    out.insert(out.end(), sig.begin(), sig.end());
    return out;
}

namespace {

class FrameReader {
public:
    explicit FrameReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = load_be16(data_.subspan(pos_, 2));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = load_be32(data_.subspan(pos_, 4));
        pos_ += 4;
        return v;
    }
    Bytes take(std::size_t n) {
        need(n);
        Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return out;
    }
    bool done() const { return pos_ == data_.size(); }
    std::size_t pos() const { return pos_; }

private:
    void need(std::size_t n) {
        if (pos_ + n > data_.size()) {
            throw FrameError("frame truncated");
        }
    }
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}  // namespace

SealedEnvelope decode_frame(std::span<const std::uint8_t> bytes) {
    FrameReader r(bytes);
    Bytes magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), kFrameMagic.begin())) {
        throw FrameError("bad frame magic");
    }
    if (r.u8() != kFrameVersion) {
        throw FrameError("unsupported frame version");
    }

    SealedEnvelope env;
    Bytes sender = r.take(16);
    std::copy(sender.begin(), sender.end(), env.sender_id.begin());
    Bytes nonce = r.take(16);
    std::copy(nonce.begin(), nonce.end(), env.nonce.begin());
    env.suite = suite_from_wire(r.u8());

    std::uint16_t wk_len = r.u16();
    env.wrapped_key = r.take(wk_len);

    std::uint8_t iv_len = r.u8();
    if (iv_len != suite_info(env.suite).block_size) {
        throw FrameError("IV length does not match the suite block size");
    }
    env.iv = r.take(iv_len);

    std::uint32_t ct_len = r.u32();
    if (ct_len == 0 || ct_len % suite_info(env.suite).block_size != 0) {
        throw FrameError("ciphertext length is not a whole number of blocks");
    }
    env.ciphertext = r.take(ct_len);

    std::uint16_t sig_len = r.u16();
    Bytes sig = r.take(sig_len);
    if (!sig.empty() && sig[0] == 0) {
        throw FrameError("signature encoding is not minimal");
    }
    env.signature.sig_value = rsa::bytes_to_mpz(sig);
    env.signature.signer_key_id = to_hex(env.sender_id);

    if (!r.done()) {
        throw FrameError("trailing bytes after frame");
    }
    return env;
}

std::vector<Bytes> split_frames(std::span<const std::uint8_t> stream) {
    std::vector<Bytes> frames;
    std::size_t pos = 0;
    while (pos < stream.size()) {
        FrameReader r(stream.subspan(pos));
        Bytes magic = r.take(4);
        if (!std::equal(magic.begin(), magic.end(), kFrameMagic.begin())) {
            throw FrameError("bad frame magic in stream");
        }
        r.u8();            // version (validated by decode_frame)
        r.take(16 + 16);   // sender id, nonce
        r.u8();            // suite
        r.take(r.u16());   // wrapped key
        r.take(r.u8());    // iv
        r.take(r.u32());   // ciphertext
        r.take(r.u16());   // signature
        std::size_t frame_len = r.pos();
        frames.emplace_back(stream.begin() + static_cast<std::ptrdiff_t>(pos),
                            stream.begin() + static_cast<std::ptrdiff_t>(pos + frame_len));
        pos += frame_len;
    }
    return frames;
}

std::string session_to_json(const Session& session) {
    nlohmann::json j;
    j["session_id"] = to_hex(session.session_id);
    j["suite"] = suite_info(session.suite).name;
    j["session_key"] = to_hex(session.session_key);
    j["send_counter"] = session.send_counter;
    j["messages_since_rotation"] = session.messages_since_rotation;
    j["rotation_period"] = session.rotation_period;
    std::vector<std::string> nonces;
    nonces.reserve(session.seen_nonces.size());
    for (const Id16& n : session.seen_nonces) nonces.push_back(to_hex(n));
    j["seen_nonces"] = nonces;
    j["rng_state"] = session.rng.save_state();
    return j.dump(2);
}

void session_merge_json(Session& session, const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Bytes sid = from_hex(j.at("session_id").get<std::string>());
    if (sid.size() != 16) {
        throw std::invalid_argument("session_id must be 16 bytes");
    }
    std::copy(sid.begin(), sid.end(), session.session_id.begin());
    session.suite = suite_from_name(j.at("suite").get<std::string>());
    session.session_key = from_hex(j.at("session_key").get<std::string>());
    session.send_counter = j.at("send_counter").get<std::uint64_t>();
    session.messages_since_rotation = j.at("messages_since_rotation").get<std::uint64_t>();
    session.rotation_period = j.at("rotation_period").get<std::uint64_t>();
    session.seen_nonces.clear();
    for (const auto& item : j.at("seen_nonces")) {
        Bytes raw = from_hex(item.get<std::string>());
        if (raw.size() != 16) {
            throw std::invalid_argument("seen nonce must be 16 bytes");
        }
        Id16 nonce{};
        std::copy(raw.begin(), raw.end(), nonce.begin());
        session.seen_nonces.insert(nonce);
    }
    session.rng = Rng::restore_state(j.at("rng_state").get<std::string>());
}

}  // namespace medcrypt::telemed
