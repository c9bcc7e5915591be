#include "medcrypt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "medcrypt/des.hpp"
#include "medcrypt/rsa.hpp"

namespace medcrypt::bench {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

template <typename F>
double timed(F&& fn) {
    auto t0 = Clock::now();
    fn();
    auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

Bytes rsa_encrypt_payload(std::span<const std::uint8_t> payload,
                          const rsa::RsaPublicKey& pub, Rng& rng) {
    const std::size_t modulus_len = (mpz_sizeinbase(pub.n.get_mpz_t(), 2) + 7) / 8;
    const std::size_t chunk_len = modulus_len - 2;
    Bytes out;
    out.reserve((payload.size() / chunk_len + 1) * modulus_len);
    for (std::size_t off = 0; off < payload.size(); off += chunk_len) {
        std::size_t take = std::min(chunk_len, payload.size() - off);
        Bytes plain;
        plain.push_back(static_cast<std::uint8_t>(1 + rng.below(255)));
        plain.insert(plain.end(), payload.begin() + static_cast<std::ptrdiff_t>(off),
                     payload.begin() + static_cast<std::ptrdiff_t>(off + take));
        mpz_class c = rsa::rsa_encrypt(rsa::bytes_to_mpz(plain), pub);
        Bytes chunk = rsa::mpz_to_bytes(c, modulus_len);
        out.insert(out.end(), chunk.begin(), chunk.end());
    }
    return out;
}

Bytes rsa_decrypt_payload(std::span<const std::uint8_t> ciphertext,
                          const rsa::RsaPrivateKey& priv) {
    const std::size_t modulus_len = (mpz_sizeinbase(priv.n.get_mpz_t(), 2) + 7) / 8;
    Bytes out;
    for (std::size_t off = 0; off < ciphertext.size(); off += modulus_len) {
        mpz_class m = rsa::rsa_decrypt(
            rsa::bytes_to_mpz(ciphertext.subspan(off, modulus_len)), priv);
        Bytes plain = rsa::mpz_to_bytes(m);
        out.insert(out.end(), plain.begin() + 1, plain.end());
    }
    return out;
}

}  // namespace

std::string BenchReport::to_tsv() const {
    std::ostringstream os;
    os << "algorithm\tpayload_bytes\tdirection\telapsed_seconds\tthroughput_bytes_per_second\n";
    for (const BenchRow& row : rows) {
        os << row.algorithm << "\t" << row.payload_bytes << "\t" << row.direction << "\t"
           << std::fixed << std::setprecision(6) << row.elapsed_seconds << "\t"
           << std::setprecision(1) << row.throughput_bps << "\n";
    }
    return os.str();
}

const BenchRow* BenchReport::find(const std::string& algorithm,
                                  const std::string& direction) const {
    for (const BenchRow& row : rows) {
        if (row.algorithm == algorithm && row.direction == direction) return &row;
    }
    return nullptr;
}

BenchReport run_benchmark(const BenchConfig& config) {
    if (config.repetitions < 3) {
        throw std::invalid_argument("run_benchmark: need at least 3 repetitions");
    }
    if (config.payload_size < 16) {
        throw std::invalid_argument("run_benchmark: payload must be at least one block");
    }

    Rng rng(config.seed);
    const Bytes payload = rng.bytes(config.payload_size);
    BenchReport report;

    auto add_row = [&](const std::string& name, const std::string& direction,
                       std::vector<double> times) {
        double elapsed = median(std::move(times));
        report.rows.push_back(BenchRow{name, config.payload_size, direction, elapsed,
                                       static_cast<double>(config.payload_size) / elapsed});
    };

    for (SuiteId suite : config.suites) {
        const SuiteInfo& info = suite_info(suite);
        BlockKey key = BlockKey::random(suite, rng);
        auto cipher = make_block_cipher(key);
        InitializationVector iv = InitializationVector::random(suite, rng);
        Bytes padded = pad(payload, info.block_size);

        Bytes ciphertext;
        std::vector<double> enc_times;
        for (int rep = 0; rep < config.repetitions; ++rep) {
            enc_times.push_back(timed([&] {
                ciphertext = mode_encrypt(*cipher, iv, Mode::CBC, padded);
            }));
        }
        add_row(info.name, "encrypt", std::move(enc_times));

        Bytes plain;
        std::vector<double> dec_times;
        for (int rep = 0; rep < config.repetitions; ++rep) {
            dec_times.push_back(timed([&] {
                plain = mode_decrypt(*cipher, iv, Mode::CBC, ciphertext);
            }));
        }
        if (unpad(plain, info.block_size) != payload) {
            throw std::logic_error("benchmark round-trip failed for suite");
        }
        add_row(info.name, "decrypt", std::move(dec_times));
    }

    // RSA applied blockwise on sub-modulus chunks for a like-for-like payload.
    rsa::RsaKeyPair keys = rsa::rsa_keygen(config.rsa_bits, rng);
    std::string rsa_name = "RSA-" + std::to_string(config.rsa_bits);
    rsa::RsaPublicKey pub = keys.public_key();
    rsa::RsaPrivateKey priv = keys.private_key();

    Bytes rsa_ct;
    std::vector<double> enc_times;
    for (int rep = 0; rep < config.repetitions; ++rep) {
        enc_times.push_back(timed([&] { rsa_ct = rsa_encrypt_payload(payload, pub, rng); }));
    }
    add_row(rsa_name, "encrypt", std::move(enc_times));

    Bytes rsa_pt;
    std::vector<double> dec_times;
    for (int rep = 0; rep < config.repetitions; ++rep) {
        dec_times.push_back(timed([&] { rsa_pt = rsa_decrypt_payload(rsa_ct, priv); }));
    }
    if (rsa_pt != payload) {
        throw std::logic_error("benchmark round-trip failed for RSA");
    }
    add_row(rsa_name, "decrypt", std::move(dec_times));

    return report;
}

BruteForceResult des_brute_force(const BruteForceTask& task, unsigned threads) {
    if (task.unknown_key_bits > 24) {
        throw std::invalid_argument("des_brute_force: unknown bits capped at 24");
    }
    const std::uint64_t mask =
        task.unknown_key_bits == 64 ? ~0ull : ((1ull << task.unknown_key_bits) - 1);
    const std::uint64_t base_key = task.fixed_key_template & ~mask;
    const std::uint64_t total = 1ull << task.unknown_key_bits;

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }

    constexpr std::uint64_t kChunk = 4096;
    std::atomic<std::uint64_t> next_chunk{0};
    std::atomic<std::uint64_t> best{UINT64_MAX};

    auto worker = [&] {
        while (true) {
            std::uint64_t chunk = next_chunk.fetch_add(1);
            std::uint64_t start = chunk * kChunk;
            if (start >= total) break;
            // Candidates are scanned ascending; once a lower match exists,
            // higher chunks cannot improve on it.
            if (best.load() != UINT64_MAX && best.load() < start) break;
            std::uint64_t end = std::min(total, start + kChunk);
            for (std::uint64_t v = start; v < end; ++v) {
                std::uint64_t candidate = base_key | v;
                des::DesSubkeys ks = des::des_key_schedule(candidate);
                if (des::des_encrypt_block(task.known_plaintext, ks) ==
                    task.known_ciphertext) {
                    // Lowest value wins across all workers.
                    std::uint64_t cur = best.load();
                    while (v < cur && !best.compare_exchange_weak(cur, v)) {
                    }
                    break;
                }
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    std::uint64_t v = best.load();
    if (v == UINT64_MAX) {
        return {false, 0};
    }
    return {true, base_key | v};
}

}  // namespace medcrypt::bench
