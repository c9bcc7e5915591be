#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medcrypt/bench.hpp"

#include <algorithm>

#include "medcrypt/des.hpp"
#include "medcrypt/rng.hpp"

using namespace medcrypt;
using namespace medcrypt::bench;

TEST_CASE("report covers every requested suite plus RSA, both directions") {
    BenchConfig config;
    config.suites = {SuiteId::AES128, SuiteId::DES};
    config.rsa_bits = 256;
    config.payload_size = 4096;
    config.repetitions = 3;
    config.seed = 1;

    BenchReport report = run_benchmark(config);
    REQUIRE(report.rows.size() == 6);
    for (const char* alg : {"AES128", "DES", "RSA-256"}) {
        for (const char* dir : {"encrypt", "decrypt"}) {
            const BenchRow* row = report.find(alg, dir);
            REQUIRE(row != nullptr);
            CHECK(row->payload_bytes == 4096);
            CHECK(row->elapsed_seconds > 0.0);
            CHECK(row->throughput_bps ==
                  doctest::Approx(4096.0 / row->elapsed_seconds).epsilon(1e-9));
        }
    }
}

TEST_CASE("empty suite list leaves only the RSA rows") {
    BenchConfig config;
    config.rsa_bits = 256;
    config.payload_size = 2048;
    config.repetitions = 3;
    BenchReport report = run_benchmark(config);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].algorithm == "RSA-256");
    CHECK(report.rows[1].algorithm == "RSA-256");
}

TEST_CASE("preconditions are enforced") {
    BenchConfig config;
    config.repetitions = 2;
    CHECK_THROWS_AS(run_benchmark(config), std::invalid_argument);
    config.repetitions = 3;
    config.payload_size = 8;
    CHECK_THROWS_AS(run_benchmark(config), std::invalid_argument);
}

TEST_CASE("TSV output carries a header and one line per row") {
    BenchConfig config;
    config.rsa_bits = 256;
    config.payload_size = 2048;
    config.repetitions = 3;
    std::string tsv = run_benchmark(config).to_tsv();
    CHECK(tsv.rfind("algorithm\tpayload_bytes\tdirection\telapsed_seconds\t"
                    "throughput_bytes_per_second\n",
                    0) == 0);
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 3);
}

TEST_CASE("brute force recovers a key consistent with the known pair") {
    Rng rng(2);
    for (int trial = 0; trial < 3; ++trial) {
        std::uint64_t key = rng.next_u64();
        std::uint64_t pt = rng.next_u64();
        std::uint64_t ct = des::des_encrypt_block(pt, des::des_key_schedule(key));

        BruteForceTask task;
        task.known_plaintext = pt;
        task.known_ciphertext = ct;
        task.unknown_key_bits = 16;
        task.fixed_key_template = key & ~0xffffull;

        BruteForceResult result = des_brute_force(task);
        REQUIRE(result.found);
        CHECK(des::des_encrypt_block(pt, des::des_key_schedule(result.key)) == ct);
    }
}

TEST_CASE("zero unknown bits degenerates to a single trial") {
    Rng rng(3);
    std::uint64_t key = rng.next_u64();
    std::uint64_t pt = rng.next_u64();
    std::uint64_t ct = des::des_encrypt_block(pt, des::des_key_schedule(key));

    BruteForceTask task{pt, ct, 0, key};
    BruteForceResult hit = des_brute_force(task);
    CHECK(hit.found);
    CHECK(hit.key == key);

    BruteForceTask miss{pt, ct ^ 1, 0, key};
    CHECK_FALSE(des_brute_force(miss).found);
}

TEST_CASE("ties break to the lowest key") {
    // The low bit of a DES key byte is parity, so clearing it leaves the
    // cipher unchanged: both completions match and the even one must win.
    Rng rng(4);
    std::uint64_t key = rng.next_u64() | 1;  // odd candidate also matches
    std::uint64_t pt = rng.next_u64();
    std::uint64_t ct = des::des_encrypt_block(pt, des::des_key_schedule(key));

    BruteForceTask task{pt, ct, 1, key & ~1ull};
    BruteForceResult result = des_brute_force(task);
    REQUIRE(result.found);
    CHECK(result.key == (key & ~1ull));
}

TEST_CASE("unknown bits beyond the cap are rejected") {
    BruteForceTask task{0, 0, 25, 0};
    CHECK_THROWS_AS(des_brute_force(task), std::invalid_argument);
}
