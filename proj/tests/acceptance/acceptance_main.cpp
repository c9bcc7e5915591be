// Acceptance suite: runs every criterion end to end and prints one
// pass/fail line each. Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "medcrypt/aes.hpp"
#include "medcrypt/bench.hpp"
#include "medcrypt/blowfish.hpp"
#include "medcrypt/cipher.hpp"
#include "medcrypt/des.hpp"
#include "medcrypt/digsig.hpp"
#include "medcrypt/rsa.hpp"
#include "medcrypt/telemed.hpp"
#include "unit/test_util.hpp"

using namespace medcrypt;

namespace {

constexpr testutil::KatVector kDesKat[] = {
#include "vectors/des_kat.inc"
};
constexpr testutil::KatVector kTdesKat[] = {
#include "vectors/tdes_kat.inc"
};
constexpr testutil::KatVector kAesKat[] = {
#include "vectors/aes_kat.inc"
};
constexpr testutil::KatVector kBlowfishKat[] = {
#include "vectors/blowfish_kat.inc"
};

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

using testutil::u64_from_hex;

bool check(bool condition, std::string& detail, const std::string& message) {
    if (!condition && detail.empty()) detail = message;
    return condition;
}

// ---------------------------------------------------------------------------

bool structural_conformance(std::string& detail) {
    bool ok = true;

    des::FeistelTrace des_trace;
    des::des_encrypt_block(0x0123456789abcdefull, des::des_key_schedule(0x133457799bbcdff1ull),
                           &des_trace);
    ok &= check(des_trace.rounds_executed == 16, detail, "DES did not run 16 rounds");
    ok &= check(des::DesSubkeys{}.round_keys.size() == 16, detail, "DES subkey count");

    des::FeistelTrace tdes_trace;
    des::tdes_encrypt_block(0, des::TdesKeyBundle{1, 2, 3}, &tdes_trace);
    ok &= check(tdes_trace.rounds_executed == 48, detail, "3DES did not run 48 rounds");

    Rng rng(1);
    for (auto [len, rounds] : {std::pair<std::size_t, int>{16, 10}, {24, 12}, {32, 14}}) {
        auto keys = aes::AesRoundKeys::expand(rng.bytes(len));
        ok &= check(keys.rounds() == rounds, detail, "AES round count");
        ok &= check(keys.round_key_count() == static_cast<std::size_t>(rounds) + 1, detail,
                    "AES round-key count");
        Bytes pt = rng.bytes(16), ct(16);
        aes::AesTrace trace;
        aes::aes_encrypt_block(pt, ct, keys, &trace);
        ok &= check(trace.rounds_executed == rounds, detail, "AES executed rounds");
    }

    blowfish::BlowfishState st = blowfish::blowfish_init(rng.bytes(16));
    ok &= check(st.p.size() == 18, detail, "Blowfish P-array size");
    ok &= check(st.s.size() == 4, detail, "Blowfish S-box count");
    for (const auto& box : st.s) {
        ok &= check(box.size() == 256, detail, "Blowfish S-box entries");
    }
    return ok;
}

bool known_answer_vectors(std::string& detail) {
    bool ok = true;
    std::size_t des_n = std::size(kDesKat);
    std::size_t tdes_n = std::size(kTdesKat);
    std::size_t aes_n = std::size(kAesKat);
    std::size_t bf_n = std::size(kBlowfishKat);
    ok &= check(des_n >= 10 && tdes_n >= 10 && aes_n >= 10 && bf_n >= 10, detail,
                "fewer than 10 vectors for some cipher");

    for (const auto& v : kDesKat) {
        auto ks = des::des_key_schedule(u64_from_hex(v.key));
        ok &= check(des::des_encrypt_block(u64_from_hex(v.plaintext), ks) ==
                        u64_from_hex(v.ciphertext),
                    detail, std::string("DES vector failed: key ") + v.key);
        ok &= check(des::des_decrypt_block(u64_from_hex(v.ciphertext), ks) ==
                        u64_from_hex(v.plaintext),
                    detail, std::string("DES inverse failed: key ") + v.key);
    }
    for (const auto& v : kTdesKat) {
        Bytes raw = from_hex(v.key);
        des::TdesKeyBundle bundle{load_be64(std::span(raw).subspan(0, 8)),
                                  load_be64(std::span(raw).subspan(8, 8)),
                                  load_be64(std::span(raw).subspan(16, 8))};
        ok &= check(des::tdes_encrypt_block(u64_from_hex(v.plaintext), bundle) ==
                        u64_from_hex(v.ciphertext),
                    detail, std::string("3DES vector failed: key ") + v.key);
        ok &= check(des::tdes_decrypt_block(u64_from_hex(v.ciphertext), bundle) ==
                        u64_from_hex(v.plaintext),
                    detail, std::string("3DES inverse failed: key ") + v.key);
    }
    bool sizes[3] = {false, false, false};
    for (const auto& v : kAesKat) {
        Bytes key = from_hex(v.key);
        sizes[key.size() / 8 - 2] = true;
        auto keys = aes::AesRoundKeys::expand(key);
        Bytes ct(16), back(16);
        aes::aes_encrypt_block(from_hex(v.plaintext), ct, keys);
        ok &= check(to_hex(ct) == v.ciphertext, detail,
                    std::string("AES vector failed: key ") + v.key);
        aes::aes_decrypt_block(ct, back, keys);
        ok &= check(back == from_hex(v.plaintext), detail,
                    std::string("AES inverse failed: key ") + v.key);
    }
    ok &= check(sizes[0] && sizes[1] && sizes[2], detail, "AES key sizes not all covered");
    for (const auto& v : kBlowfishKat) {
        auto st = blowfish::blowfish_init(from_hex(v.key));
        ok &= check(blowfish::blowfish_encrypt_block(u64_from_hex(v.plaintext), st) ==
                        u64_from_hex(v.ciphertext),
                    detail, std::string("Blowfish vector failed: key ") + v.key);
        ok &= check(blowfish::blowfish_decrypt_block(u64_from_hex(v.ciphertext), st) ==
                        u64_from_hex(v.plaintext),
                    detail, std::string("Blowfish inverse failed: key ") + v.key);
    }
    return ok;
}

bool round_trip_suite(std::string& detail) {
    Rng rng(2);
    const int cases = 10000;
    for (SuiteId suite : {SuiteId::DES, SuiteId::TDES, SuiteId::AES128, SuiteId::AES192,
                          SuiteId::AES256, SuiteId::BLOWFISH}) {
        const std::size_t bs = suite_info(suite).block_size;
        for (Mode mode : {Mode::ECB, Mode::CBC}) {
            for (int i = 0; i < cases; ++i) {
                BlockKey key = BlockKey::random(suite, rng);
                auto cipher = make_block_cipher(key);
                InitializationVector iv = InitializationVector::random(suite, rng);
                Bytes pt = rng.bytes(bs * (1 + rng.below(3)));
                if (mode_decrypt(*cipher, iv, mode, mode_encrypt(*cipher, iv, mode, pt)) != pt) {
                    detail = std::string(suite_info(suite).name) + "/" + mode_name(mode) +
                             " failed at case " + std::to_string(i);
                    return false;
                }
            }
        }
    }
    return true;
}

bool rsa_toy_exhaustive(std::string& detail) {
    bool ok = true;
    rsa::RsaKeyPair kp = rsa::RsaKeyPair::from_primes(3, 11, 3);
    ok &= check(kp.n == 33 && kp.phi_n == 20 && kp.d == 7, detail, "five-stage trace wrong");
    for (int m = 0; m < 33 && ok; ++m) {
        ok &= check(rsa::rsa_decrypt(rsa::rsa_encrypt(m, kp.public_key()), kp.private_key()) == m,
                    detail, "round-trip failed at m=" + std::to_string(m));
    }
    auto cycle = rsa::cycle_attack(8, kp.public_key(), 100);
    ok &= check(cycle.found && cycle.plaintext == 2 && cycle.iterations == 4, detail,
                "cycle attack did not recover m=2 in 4 iterations");
    ok &= check(rsa::brute_force_private_key(kp.public_key()).d == 7, detail,
                "brute force did not return d=7");
    return ok;
}

bool rsa_generated_keys(std::string& detail) {
    Rng rng(3);
    const unsigned sizes[] = {128, 192, 256, 384, 512};
    for (int i = 0; i < 100; ++i) {
        unsigned bits = sizes[i % 5];
        rsa::RsaKeyPair kp = rsa::rsa_keygen(bits, rng);
        if (kp.e * kp.d % kp.phi_n != 1) {
            detail = "stage-5 identity failed at keypair " + std::to_string(i);
            return false;
        }
        mpz_class m = rsa::random_below(kp.n, rng);
        if (rsa::rsa_decrypt(rsa::rsa_encrypt(m, kp.public_key()), kp.private_key()) != m) {
            detail = "round-trip failed at keypair " + std::to_string(i);
            return false;
        }
    }
    return true;
}

bool blind_signature_equivalence(std::string& detail) {
    rsa::RsaKeyPair toy = rsa::RsaKeyPair::from_primes(3, 11, 3);
    for (int m = 0; m < 33; ++m) {
        mpz_class direct = rsa::mod_pow(m, toy.d, toy.n);
        for (int r = 2; r < 33; ++r) {
            mpz_class g, rz = r;
            mpz_gcd(g.get_mpz_t(), rz.get_mpz_t(), toy.n.get_mpz_t());
            if (g != 1) continue;
            mpz_class blind_sig =
                rsa::mod_pow(digsig::blind(m, r, toy.public_key()), toy.d, toy.n);
            if (digsig::unblind(blind_sig, r, toy.public_key()) != direct) {
                detail = "toy equivalence failed at m=" + std::to_string(m) +
                         " r=" + std::to_string(r);
                return false;
            }
        }
    }

    Rng rng(4);
    rsa::RsaKeyPair kp = rsa::rsa_keygen(512, rng);
    for (int i = 0; i < 1000; ++i) {
        mpz_class m = rsa::random_below(kp.n, rng);
        digsig::BlindingFactor r = digsig::BlindingFactor::random(kp.n, rng);
        mpz_class blind_sig =
            rsa::mod_pow(digsig::blind(m, r.r, kp.public_key()), kp.d, kp.n);
        if (digsig::unblind(blind_sig, r.r, kp.public_key()) != rsa::mod_pow(m, kp.d, kp.n)) {
            detail = "512-bit equivalence failed at case " + std::to_string(i);
            return false;
        }
    }
    return true;
}

bool tamper_completeness(std::string& detail) {
    Rng keyrng(5);
    rsa::RsaKeyPair patient = rsa::rsa_keygen(1024, keyrng);
    rsa::RsaKeyPair doctor = rsa::rsa_keygen(1024, keyrng);
    auto [sender, handshake] =
        telemed::start_session(patient, doctor.public_key(), SuiteId::AES128, Rng(6));
    telemed::Session receiver = telemed::Session::responder(doctor, patient.public_key());
    telemed::open_envelope(handshake, doctor, patient.public_key(), receiver);

    telemed::Id16 pid{};
    pid[0] = 0x42;
    std::vector<telemed::PatientRecord> records = {
        telemed::make_record(pid, 1700000000, "heart-rate", "71.5", "bpm"),
        telemed::make_record(pid, 1700000060, "heart-rate", "72", "bpm"),
        telemed::make_record(pid, 1700000120, "spo2", "98", "pct"),
    };
    telemed::SealedEnvelope env = telemed::seal_envelope(sender, records);
    Bytes frame = telemed::encode_frame(env);

    std::size_t frame_errors = 0, auth_errors = 0, decrypt_errors = 0, replay_errors = 0;
    for (std::size_t bit = 0; bit < frame.size() * 8; ++bit) {
        Bytes flipped = frame;
        flipped[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
        try {
            telemed::SealedEnvelope candidate = telemed::decode_frame(flipped);
            telemed::Session clone = receiver;  // pre-acceptance state
            telemed::open_envelope(candidate, doctor, patient.public_key(), clone);
            detail = "bit " + std::to_string(bit) + " was accepted silently";
            return false;
        } catch (const FrameError&) {
            ++frame_errors;
        } catch (const AuthenticityError&) {
            ++auth_errors;
        } catch (const DecryptError&) {
            ++decrypt_errors;
        } catch (const ReplayError&) {
            ++replay_errors;
        }
    }

    // The untampered frame still opens: the sweep rejected flips, not the frame.
    telemed::Session clone = receiver;
    if (telemed::open_envelope(telemed::decode_frame(frame), doctor, patient.public_key(),
                               clone) != records) {
        detail = "original frame no longer opens";
        return false;
    }
    std::printf("         (%zu bits: %zu FrameError, %zu AuthenticityError, %zu DecryptError, "
                "%zu ReplayError)\n",
                frame.size() * 8, frame_errors, auth_errors, decrypt_errors, replay_errors);
    return true;
}

bool replay_defense(std::string& detail) {
    Rng keyrng(7);
    rsa::RsaKeyPair patient = rsa::rsa_keygen(512, keyrng);
    rsa::RsaKeyPair doctor = rsa::rsa_keygen(512, keyrng);
    auto [sender, handshake] =
        telemed::start_session(patient, doctor.public_key(), SuiteId::AES128, Rng(8));
    telemed::Session receiver = telemed::Session::responder(doctor, patient.public_key());
    telemed::open_envelope(handshake, doctor, patient.public_key(), receiver);

    telemed::Id16 pid{};
    std::vector<telemed::SealedEnvelope> envelopes;
    for (int i = 0; i < 100; ++i) {
        envelopes.push_back(telemed::seal_envelope(
            sender, {telemed::make_record(pid, 1000 + i, "hr", "72", "bpm")}));
        telemed::open_envelope(envelopes.back(), doctor, patient.public_key(), receiver);
    }
    int rejected = 0;
    for (const auto& env : envelopes) {
        try {
            telemed::open_envelope(env, doctor, patient.public_key(), receiver);
        } catch (const ReplayError&) {
            ++rejected;
        }
    }
    if (rejected != 100) {
        detail = "only " + std::to_string(rejected) + "/100 replays rejected";
        return false;
    }
    return true;
}

bool speed_ordering(std::string& detail) {
    bench::BenchConfig config;
    config.suites = {SuiteId::AES128, SuiteId::TDES, SuiteId::BLOWFISH, SuiteId::DES};
    config.rsa_bits = 1024;
    config.payload_size = 1 << 20;
    config.repetitions = 3;
    config.seed = 9;
    bench::BenchReport report = bench::run_benchmark(config);

    const bench::BenchRow* rsa_row = report.find("RSA-1024", "encrypt");
    if (rsa_row == nullptr) {
        detail = "missing RSA-1024 encrypt row";
        return false;
    }
    for (const char* name : {"AES128", "TDES", "BLOWFISH", "DES"}) {
        const bench::BenchRow* row = report.find(name, "encrypt");
        if (row == nullptr) {
            detail = std::string("missing row for ") + name;
            return false;
        }
        if (!(row->throughput_bps > rsa_row->throughput_bps)) {
            detail = std::string(name) + " (" + std::to_string(row->throughput_bps) +
                     " B/s) not faster than RSA-1024 (" +
                     std::to_string(rsa_row->throughput_bps) + " B/s)";
            return false;
        }
        std::printf("         %-8s %12.0f B/s  vs RSA-1024 %12.0f B/s\n", name,
                    row->throughput_bps, rsa_row->throughput_bps);
    }
    return true;
}

bool brute_force_demo(std::string& detail) {
    Rng rng(10);
    std::uint64_t key = rng.next_u64();
    std::uint64_t pt = rng.next_u64();
    std::uint64_t ct = des::des_encrypt_block(pt, des::des_key_schedule(key));

    bench::BruteForceTask task;
    task.known_plaintext = pt;
    task.known_ciphertext = ct;
    task.unknown_key_bits = 16;
    task.fixed_key_template = key & ~0xffffull;

    auto start = std::chrono::steady_clock::now();
    bench::BruteForceResult result = bench::des_brute_force(task);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!result.found) {
        detail = "key not found";
        return false;
    }
    if (des::des_encrypt_block(pt, des::des_key_schedule(result.key)) != ct) {
        detail = "recovered key inconsistent with the pair";
        return false;
    }
    if (elapsed >= 60.0) {
        detail = "took " + std::to_string(elapsed) + " s (limit 60)";
        return false;
    }
    std::printf("         16 unknown bits recovered in %.2f s\n", elapsed);
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"cipher structural conformance (16/48/10-12-14 rounds, 18+4x256 state)",
         structural_conformance},
        {"known-answer vectors, >=10 per cipher, bit-exact", known_answer_vectors},
        {"round-trip property suites, 10^4 cases per suite and mode", round_trip_suite},
        {"RSA toy-modulus exhaustive suite (d=7, cycle=4, brute force)", rsa_toy_exhaustive},
        {"RSA generated-key suite, 100 keypairs at 128-512 bits", rsa_generated_keys},
        {"blind-signature equivalence, exhaustive toy + 10^3 at 512 bits",
         blind_signature_equivalence},
        {"protocol tamper completeness, exhaustive single-bit sweep", tamper_completeness},
        {"replay defense, 100/100 re-deliveries rejected", replay_defense},
        {"speed ordering: every symmetric suite beats RSA-1024 encryption on 1 MiB",
         speed_ordering},
        {"DES brute-force demonstration, 16 unknown bits under 60 s", brute_force_demo},
    };

    int failures = 0;
    for (auto& criterion : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (ok) {
            std::printf("[PASS]   %s\n", criterion.name.c_str());
        } else {
            ++failures;
            std::printf("[FAIL]   %s\n", criterion.name.c_str());
            if (!detail.empty()) std::printf("         %s\n", detail.c_str());
        }
        std::fflush(stdout);
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
