#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "medcrypt/cipher.hpp"

namespace medcrypt::bench {

struct BenchRow {
    std::string algorithm;
    std::size_t payload_bytes = 0;
    std::string direction;  // "encrypt" or "decrypt"
    double elapsed_seconds = 0.0;  // median across repetitions
    double throughput_bps = 0.0;   // payload_bytes / elapsed_seconds
};

struct BenchReport {
    std::vector<BenchRow> rows;

    std::string to_tsv() const;
    const BenchRow* find(const std::string& algorithm, const std::string& direction) const;
};

struct BenchConfig {
    std::vector<SuiteId> suites;
    unsigned rsa_bits = 1024;
    std::size_t payload_size = 1 << 20;
    int repetitions = 3;
    std::uint64_t seed = 1;
};

/// Times every requested suite plus RSA (blockwise on sub-modulus chunks) on
/// one deterministic payload; repetitions >= 3, median reported.
BenchReport run_benchmark(const BenchConfig& config);

/// Known-plaintext exhaustive search over the low `unknown_key_bits` bits of
/// the template key (bounded at 24 bits).
struct BruteForceTask {
    std::uint64_t known_plaintext = 0;
    std::uint64_t known_ciphertext = 0;
    unsigned unknown_key_bits = 0;
    std::uint64_t fixed_key_template = 0;
};

struct BruteForceResult {
    bool found = false;
    std::uint64_t key = 0;
};

/// Scans candidates ascending, partitioned across threads; the lowest
/// matching key wins.
BruteForceResult des_brute_force(const BruteForceTask& task, unsigned threads = 0);

}  // namespace medcrypt::bench
