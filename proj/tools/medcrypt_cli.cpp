// Command-line surface for the medcrypt library: key generation, raw
// encryption, signatures, the patient-record protocol, benchmarks, and the
// two attack demonstrations.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "medcrypt/bench.hpp"
#include "medcrypt/cipher.hpp"
#include "medcrypt/digsig.hpp"
#include "medcrypt/errors.hpp"
#include "medcrypt/rsa.hpp"
#include "medcrypt/sha256.hpp"
#include "medcrypt/telemed.hpp"

namespace {

using namespace medcrypt;

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string& s = buf.str();
    return Bytes(s.begin(), s.end());
}

void write_file(const std::string& path, std::span<const std::uint8_t> data,
                bool append = false) {
    std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

const char* error_name(const CryptoError& e) {
    if (dynamic_cast<const PaddingError*>(&e)) return "PaddingError";
    if (dynamic_cast<const LengthError*>(&e)) return "LengthError";
    if (dynamic_cast<const KeyLengthError*>(&e)) return "KeyLengthError";
    if (dynamic_cast<const InvalidKeyError*>(&e)) return "InvalidKeyError";
    if (dynamic_cast<const MessageRangeError*>(&e)) return "MessageRangeError";
    if (dynamic_cast<const ScaleError*>(&e)) return "ScaleError";
    if (dynamic_cast<const BlindingError*>(&e)) return "BlindingError";
    if (dynamic_cast<const OrderError*>(&e)) return "OrderError";
    if (dynamic_cast<const ReplayError*>(&e)) return "ReplayError";
    if (dynamic_cast<const AuthenticityError*>(&e)) return "AuthenticityError";
    if (dynamic_cast<const DecryptError*>(&e)) return "DecryptError";
    if (dynamic_cast<const FrameError*>(&e)) return "FrameError";
    return "CryptoError";
}

Rng make_rng(const std::optional<std::uint64_t>& seed) {
    return seed ? Rng(*seed) : Rng::from_entropy();
}

telemed::Id16 parse_id16(const std::string& hex) {
    Bytes raw = from_hex(hex);
    if (raw.size() != 16) {
        throw std::invalid_argument("identifier must be 32 hex characters");
    }
    telemed::Id16 id{};
    std::copy(raw.begin(), raw.end(), id.begin());
    return id;
}

rsa::RsaKeyPair keypair_from_private(const rsa::RsaPrivateKey& priv) {
    rsa::RsaKeyPair kp;
    kp.d = priv.d;
    kp.n = priv.n;
    return kp;
}

struct SealArgs {
    std::string session_file;
    std::string patient_priv;
    std::string doctor_pub;
    std::string records_file;
    std::string out_file;
    std::string suite_name = "AES128";
    std::uint64_t rotation_period = 100;
    std::optional<std::uint64_t> seed;
};

int run_seal(const SealArgs& args) {
    rsa::RsaPrivateKey priv = rsa::load_private_key(args.patient_priv);
    rsa::RsaPublicKey doctor = rsa::load_public_key(args.doctor_pub);
    std::vector<telemed::PatientRecord> records;
    if (!args.records_file.empty()) {
        records = telemed::RecordStore::open(args.records_file).records();
    }

    Bytes stream;
    telemed::Session session;
    int frames = 0;
    if (std::filesystem::exists(args.session_file)) {
        session.own_keys = keypair_from_private(priv);
        session.peer_public_key = doctor;
        std::ifstream in(args.session_file);
        std::ostringstream buf;
        buf << in.rdbuf();
        telemed::session_merge_json(session, buf.str());
    } else {
        auto [fresh, handshake] = telemed::start_session(
            keypair_from_private(priv), doctor, suite_from_name(args.suite_name),
            make_rng(args.seed));
        session = std::move(fresh);
        session.rotation_period = args.rotation_period;
        Bytes frame = telemed::encode_frame(handshake);
        stream.insert(stream.end(), frame.begin(), frame.end());
        ++frames;
    }

    telemed::SealedEnvelope env = telemed::seal_envelope(session, records);
    Bytes frame = telemed::encode_frame(env);
    stream.insert(stream.end(), frame.begin(), frame.end());
    ++frames;

    write_file(args.out_file, stream, /*append=*/true);
    write_text(args.session_file, telemed::session_to_json(session));
    std::cout << "frames=" << frames << "\n";
    return 0;
}

struct OpenArgs {
    std::string session_file;
    std::string doctor_priv;
    std::string patient_pub;
    std::string in_file;
    std::string out_file;
};

int run_open(const OpenArgs& args) {
    rsa::RsaPrivateKey priv = rsa::load_private_key(args.doctor_priv);
    rsa::RsaPublicKey patient = rsa::load_public_key(args.patient_pub);

    telemed::Session session = telemed::Session::responder(keypair_from_private(priv), patient);
    if (std::filesystem::exists(args.session_file)) {
        std::ifstream in(args.session_file);
        std::ostringstream buf;
        buf << in.rdbuf();
        telemed::session_merge_json(session, buf.str());
    }

    Bytes stream = read_file(args.in_file);
    std::vector<telemed::PatientRecord> all;
    for (const Bytes& frame : telemed::split_frames(stream)) {
        telemed::SealedEnvelope env = telemed::decode_frame(frame);
        auto records = telemed::open_envelope(env, session.own_keys, patient, session);
        all.insert(all.end(), records.begin(), records.end());
    }

    Bytes lines = telemed::serialize_records(all);
    if (args.out_file.empty()) {
        std::cout.write(reinterpret_cast<const char*>(lines.data()),
                        static_cast<std::streamsize>(lines.size()));
    } else {
        write_file(args.out_file, lines);
        std::cout << "records=" << all.size() << "\n";
    }
    write_text(args.session_file, telemed::session_to_json(session));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"medcrypt: block ciphers, RSA signatures, and the sealed-record protocol"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;

    // keygen
    auto* keygen = app.add_subcommand("keygen", "Generate a symmetric key or an RSA keypair");
    std::string kg_suite;
    std::size_t kg_key_bytes = 0;
    std::string kg_out;
    bool kg_rsa = false;
    unsigned kg_bits = 1024;
    std::string kg_pub, kg_priv;
    keygen->add_option("--suite", kg_suite, "Cipher suite (DES, TDES, AES128, AES192, AES256, BLOWFISH)");
    keygen->add_option("--key-bytes", kg_key_bytes, "Blowfish key length in bytes (4..56)");
    keygen->add_option("--out", kg_out, "Write the key line to this file");
    keygen->add_flag("--rsa", kg_rsa, "Generate an RSA keypair instead");
    keygen->add_option("--bits", kg_bits, "RSA modulus size in bits");
    keygen->add_option("--pub", kg_pub, "Output file for the public key (e, n)");
    keygen->add_option("--priv", kg_priv, "Output file for the private key (d, n)");
    keygen->add_option("--seed", seed, "Fix all randomness for reproducible runs");

    // encrypt / decrypt
    auto* encrypt = app.add_subcommand("encrypt", "Encrypt a file under a symmetric key");
    auto* decrypt = app.add_subcommand("decrypt", "Decrypt a file under a symmetric key");
    std::string enc_key_file, enc_in, enc_out, enc_mode = "cbc", enc_iv_hex;
    for (CLI::App* cmd : {encrypt, decrypt}) {
        cmd->add_option("--key-file", enc_key_file, "Key file (SUITE:<hex> line)")->required();
        cmd->add_option("--in", enc_in, "Input file")->required();
        cmd->add_option("--out", enc_out, "Output file (hex to stdout when omitted)");
        cmd->add_option("--mode", enc_mode, "cbc (default) or ecb");
        cmd->add_option("--iv", enc_iv_hex, "Explicit IV in hex");
    }
    encrypt->add_option("--seed", seed, "Fix all randomness for reproducible runs");

    // sign / verify
    auto* sign_cmd = app.add_subcommand("sign", "Hash a file and sign the digest");
    std::string sg_priv, sg_in, sg_out;
    sign_cmd->add_option("--priv", sg_priv, "Private key file")->required();
    sign_cmd->add_option("--in", sg_in, "File to sign")->required();
    sign_cmd->add_option("--out", sg_out, "Signature file (stdout when omitted)");

    auto* verify_cmd = app.add_subcommand("verify", "Verify a detached signature");
    std::string vf_pub, vf_in, vf_sig;
    verify_cmd->add_option("--pub", vf_pub, "Public key file")->required();
    verify_cmd->add_option("--in", vf_in, "Signed file")->required();
    verify_cmd->add_option("--sig", vf_sig, "Signature file")->required();

    // record-add
    auto* record_add = app.add_subcommand("record-add", "Append a measurement to a record store");
    std::string ra_store, ra_patient, ra_measurement, ra_value, ra_unit;
    std::int64_t ra_timestamp = 0;
    record_add->add_option("--store", ra_store, "Record store file")->required();
    record_add->add_option("--patient", ra_patient, "Patient id (32 hex chars)")->required();
    record_add->add_option("--timestamp", ra_timestamp, "Seconds since epoch")->required();
    record_add->add_option("--measurement", ra_measurement, "Measurement label")->required();
    record_add->add_option("--value", ra_value, "Decimal value")->required();
    record_add->add_option("--unit", ra_unit, "Unit label")->required();

    // seal / open
    SealArgs seal_args;
    auto* seal = app.add_subcommand("seal", "Seal records into frames for the peer");
    seal->add_option("--session", seal_args.session_file, "Session state file")->required();
    seal->add_option("--patient-priv", seal_args.patient_priv, "Sender private key")->required();
    seal->add_option("--doctor-pub", seal_args.doctor_pub, "Receiver public key")->required();
    seal->add_option("--records", seal_args.records_file, "Record file to seal (empty batch when omitted)");
    seal->add_option("--out", seal_args.out_file, "Frame stream to append to")->required();
    seal->add_option("--suite", seal_args.suite_name, "Cipher suite for a fresh session");
    seal->add_option("--rotation-period", seal_args.rotation_period,
                     "Envelopes between session-key rotations");
    seal->add_option("--seed", seed, "Fix all randomness for reproducible runs");

    OpenArgs open_args;
    auto* open_cmd = app.add_subcommand("open", "Open received frames and print the records");
    open_cmd->add_option("--session", open_args.session_file, "Session state file")->required();
    open_cmd->add_option("--doctor-priv", open_args.doctor_priv, "Receiver private key")->required();
    open_cmd->add_option("--patient-pub", open_args.patient_pub, "Sender public key")->required();
    open_cmd->add_option("--in", open_args.in_file, "Frame stream file")->required();
    open_cmd->add_option("--out", open_args.out_file, "Record output file (stdout when omitted)");

    // send / receive
    auto* send = app.add_subcommand("send", "Validate a frame and append it to a stream");
    std::string sd_frame, sd_out;
    send->add_option("--frame", sd_frame, "Frame file")->required();
    send->add_option("--out", sd_out, "Stream file to append to")->required();

    auto* receive = app.add_subcommand("receive", "Split a stream into validated frame files");
    std::string rc_in, rc_out_dir;
    receive->add_option("--in", rc_in, "Stream file")->required();
    receive->add_option("--out-dir", rc_out_dir, "Directory for frame_NNN.bin files")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Throughput comparison across ciphers and RSA");
    std::string bn_suites = "DES,TDES,AES128,AES192,AES256,BLOWFISH";
    unsigned bn_rsa_bits = 1024;
    std::size_t bn_payload = 1 << 20;
    int bn_reps = 3;
    bench_cmd->add_option("--suites", bn_suites, "Comma-separated suite list (may be empty)");
    bench_cmd->add_option("--rsa-bits", bn_rsa_bits, "RSA modulus size");
    bench_cmd->add_option("--payload", bn_payload, "Payload size in bytes");
    bench_cmd->add_option("--reps", bn_reps, "Repetitions (median reported, min 3)");
    bench_cmd->add_option("--seed", seed, "Fix all randomness for reproducible runs");

    // attack-cycle
    auto* attack_cycle = app.add_subcommand("attack-cycle", "Cycle attack on textbook RSA");
    std::string ac_e, ac_n, ac_c;
    std::uint64_t ac_max = 1000000;
    attack_cycle->add_option("--e", ac_e, "Public exponent")->required();
    attack_cycle->add_option("--n", ac_n, "Modulus")->required();
    attack_cycle->add_option("--c", ac_c, "Ciphertext")->required();
    attack_cycle->add_option("--max-iterations", ac_max, "Give up after this many steps");

    // attack-des
    auto* attack_des = app.add_subcommand("attack-des", "Known-plaintext DES key search");
    std::string ad_pt, ad_ct, ad_template;
    unsigned ad_bits = 16;
    unsigned ad_threads = 0;
    attack_des->add_option("--plaintext", ad_pt, "Known plaintext block (16 hex chars)")->required();
    attack_des->add_option("--ciphertext", ad_ct, "Known ciphertext block")->required();
    attack_des->add_option("--key-template", ad_template, "Key with unknown low bits zeroed")->required();
    attack_des->add_option("--unknown-bits", ad_bits, "Number of unknown low key bits (<= 24)");
    attack_des->add_option("--threads", ad_threads, "Worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors collapse to exit 1
    }

    try {
        if (keygen->parsed()) {
            Rng rng = make_rng(seed);
            if (kg_rsa) {
                if (kg_pub.empty() || kg_priv.empty()) {
                    throw std::invalid_argument("keygen --rsa needs --pub and --priv");
                }
                rsa::RsaKeyPair kp = rsa::rsa_keygen(kg_bits, rng);
                rsa::save_public_key(kg_pub, kp.public_key());
                rsa::save_private_key(kg_priv, kp.private_key());
                std::cout << "key-id=" << rsa::key_id(kp.n) << "\n";
            } else {
                if (kg_suite.empty()) {
                    throw std::invalid_argument("keygen needs --suite or --rsa");
                }
                BlockKey key = BlockKey::random(suite_from_name(kg_suite), rng, kg_key_bytes);
                std::string line = format_key_line(key);
                if (kg_out.empty()) {
                    std::cout << line << "\n";
                } else {
                    save_key_file(kg_out, key);
                }
            }
            return 0;
        }

        if (encrypt->parsed() || decrypt->parsed()) {
            BlockKey key = load_key_file(enc_key_file);
            auto cipher = make_block_cipher(key);
            Mode mode = mode_from_name(enc_mode);
            Bytes input = read_file(enc_in);
            Bytes output;
            if (encrypt->parsed()) {
                Rng rng = make_rng(seed);
                InitializationVector iv =
                    !enc_iv_hex.empty()
                        ? InitializationVector::create(key.suite, from_hex(enc_iv_hex))
                        : (mode == Mode::CBC ? InitializationVector::random(key.suite, rng)
                                             : InitializationVector::zero(key.suite));
                Bytes ct = mode_encrypt(*cipher, iv, mode, pad(input, cipher->block_size()));
                if (mode == Mode::CBC && enc_iv_hex.empty()) {
                    output = iv.iv_bytes;  // IV travels at the head of the file
                }
                output.insert(output.end(), ct.begin(), ct.end());
            } else {
                InitializationVector iv = InitializationVector::zero(key.suite);
                std::span<const std::uint8_t> body(input);
                if (mode == Mode::CBC) {
                    if (!enc_iv_hex.empty()) {
                        iv = InitializationVector::create(key.suite, from_hex(enc_iv_hex));
                    } else {
                        if (input.size() < cipher->block_size()) {
                            throw LengthError("input shorter than one block of IV");
                        }
                        iv = InitializationVector::create(
                            key.suite, Bytes(input.begin(),
                                             input.begin() + static_cast<std::ptrdiff_t>(
                                                                 cipher->block_size())));
                        body = body.subspan(cipher->block_size());
                    }
                }
                output = unpad(mode_decrypt(*cipher, iv, mode, body), cipher->block_size());
            }
            if (enc_out.empty()) {
                std::cout << to_hex(output) << "\n";
            } else {
                write_file(enc_out, output);
            }
            return 0;
        }

        if (sign_cmd->parsed()) {
            rsa::RsaPrivateKey priv = rsa::load_private_key(sg_priv);
            Digest digest = sha256(read_file(sg_in));
            digsig::Signature sig = digsig::sign(digest, priv);
            if (sg_out.empty()) {
                std::cout << digsig::format_signature(sig);
            } else {
                digsig::save_signature_file(sg_out, sig);
            }
            return 0;
        }

        if (verify_cmd->parsed()) {
            rsa::RsaPublicKey pub = rsa::load_public_key(vf_pub);
            Digest digest = sha256(read_file(vf_in));
            digsig::Signature sig = digsig::load_signature_file(vf_sig);
            bool ok = digsig::verify(digest, sig, pub);
            std::cout << (ok ? "true" : "false") << "\n";
            return ok ? 0 : 2;
        }

        if (record_add->parsed()) {
            telemed::RecordStore store = telemed::RecordStore::open(ra_store);
            telemed::PatientRecord record = telemed::make_record(
                parse_id16(ra_patient), ra_timestamp, ra_measurement, ra_value, ra_unit);
            store.append(record);
            std::cout << telemed::format_record_line(record) << "\n";
            return 0;
        }

        if (seal->parsed()) {
            seal_args.seed = seed;
            return run_seal(seal_args);
        }
        if (open_cmd->parsed()) {
            return run_open(open_args);
        }

        if (send->parsed()) {
            Bytes frame = read_file(sd_frame);
            telemed::decode_frame(frame);  // structural validation before transmit
            write_file(sd_out, frame, /*append=*/true);
            std::cout << "sent=" << frame.size() << "\n";
            return 0;
        }

        if (receive->parsed()) {
            Bytes stream = read_file(rc_in);
            std::vector<Bytes> frames = telemed::split_frames(stream);
            std::filesystem::create_directories(rc_out_dir);
            for (std::size_t i = 0; i < frames.size(); ++i) {
                telemed::decode_frame(frames[i]);
                std::ostringstream name;
                name << rc_out_dir << "/frame_" << std::setw(3) << std::setfill('0') << i
                     << ".bin";
                write_file(name.str(), frames[i]);
            }
            std::cout << "frames=" << frames.size() << "\n";
            return 0;
        }

        if (bench_cmd->parsed()) {
            bench::BenchConfig config;
            std::stringstream ss(bn_suites);
            std::string token;
            while (std::getline(ss, token, ',')) {
                if (!token.empty()) config.suites.push_back(suite_from_name(token));
            }
            config.rsa_bits = bn_rsa_bits;
            config.payload_size = bn_payload;
            config.repetitions = bn_reps;
            config.seed = seed.value_or(1);
            std::cout << bench::run_benchmark(config).to_tsv();
            return 0;
        }

        if (attack_cycle->parsed()) {
            rsa::RsaPublicKey pub{mpz_class(ac_e, 0), mpz_class(ac_n, 0)};
            auto result = rsa::cycle_attack(mpz_class(ac_c, 0), pub, ac_max);
            if (!result.found) {
                std::cout << "not-found\n";
                return 2;
            }
            std::cout << "plaintext=" << result.plaintext.get_str(10) << "\n"
                      << "iterations=" << result.iterations << "\n";
            return 0;
        }

        if (attack_des->parsed()) {
            bench::BruteForceTask task;
            task.known_plaintext = load_be64(from_hex(ad_pt));
            task.known_ciphertext = load_be64(from_hex(ad_ct));
            task.fixed_key_template = load_be64(from_hex(ad_template));
            task.unknown_key_bits = ad_bits;
            auto result = bench::des_brute_force(task, ad_threads);
            if (!result.found) {
                std::cout << "not-found\n";
                return 2;
            }
            Bytes key(8);
            store_be64(result.key, key);
            std::cout << "key=" << to_hex(key) << "\n";
            return 0;
        }
    } catch (const CryptoError& e) {
        std::cerr << "error: " << error_name(e) << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
