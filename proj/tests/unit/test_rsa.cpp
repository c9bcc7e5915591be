#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medcrypt/rsa.hpp"

#include <filesystem>
#include <fstream>

using namespace medcrypt;
using namespace medcrypt::rsa;

namespace {

// Independent deterministic oracle, valid well past every size used here.
bool is_prime_trial_division(const mpz_class& n) {
    if (n < 2) return false;
    for (mpz_class f = 2; f * f <= n; ++f) {
        if (n % f == 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("mod_pow matches small hand computations") {
    CHECK(mod_pow(2, 3, 33) == 8);
    CHECK(mod_pow(4, 3, 33) == 31);
    CHECK(mod_pow(8, 7, 33) == 2);
    CHECK(mod_pow(31, 7, 33) == 4);
    CHECK(mod_pow(5, 0, 7) == 1);
    CHECK(mod_pow(5, 100, 1) == 0);
    CHECK_THROWS_AS(mod_pow(2, -1, 7), std::invalid_argument);
    CHECK_THROWS_AS(mod_pow(2, 3, 0), std::invalid_argument);
}

TEST_CASE("mod_inverse agrees with the defining identity") {
    CHECK(mod_inverse(3, 20) == 7);
    CHECK(mod_inverse(2, 33) == 17);
    CHECK(mod_inverse(65537, mpz_class("1034776851837418226012406113933120080")) * 65537 %
              mpz_class("1034776851837418226012406113933120080") ==
          1);
    CHECK_THROWS_AS(mod_inverse(2, 20), InvalidKeyError);
}

TEST_CASE("8-bit primes pass exhaustive trial division and sit in [128, 255]") {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        mpz_class p = generate_prime(8, rng);
        CHECK(p >= 128);
        CHECK(p <= 255);
        CHECK(is_prime_trial_division(p));
    }
}

TEST_CASE("generated primes are odd with the top bit set") {
    Rng rng(2);
    for (unsigned bits : {8u, 12u, 16u}) {
        for (int i = 0; i < 20; ++i) {
            mpz_class p = generate_prime(bits, rng);
            CHECK(mpz_odd_p(p.get_mpz_t()));
            CHECK(mpz_sizeinbase(p.get_mpz_t(), 2) == bits);
        }
    }
}

TEST_CASE("100 draws at 16 bits all pass the independent primality oracle") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        CHECK(is_prime_trial_division(generate_prime(16, rng)));
    }
}

TEST_CASE("generate_prime rejects tiny sizes") {
    Rng rng(4);
    CHECK_THROWS_AS(generate_prime(7, rng), std::invalid_argument);
}

TEST_CASE("toy keypair from forced primes matches the hand trace") {
    RsaKeyPair kp = RsaKeyPair::from_primes(3, 11, 3);
    CHECK(kp.n == 33);
    CHECK(kp.phi_n == 20);
    CHECK(kp.e == 3);
    CHECK(kp.d == 7);

    // Brute-force d over [1, 20) confirms uniqueness of the inverse.
    int matches = 0;
    for (int d = 1; d < 20; ++d) {
        if (3 * d % 20 == 1) {
            ++matches;
            CHECK(d == 7);
        }
    }
    CHECK(matches == 1);
}

TEST_CASE("stage 4 rejects e sharing a factor with phi") {
    CHECK_THROWS_AS(RsaKeyPair::from_primes(3, 11, 2), InvalidKeyError);
    CHECK_THROWS_AS(RsaKeyPair::from_primes(7, 7, 3), InvalidKeyError);
    CHECK_THROWS_AS(RsaKeyPair::from_primes(3, 11, 1), InvalidKeyError);
}

TEST_CASE("generated keypairs satisfy the stage-5 identity and round-trip") {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        RsaKeyPair kp = rsa_keygen(128, rng);
        CHECK(kp.n == kp.p * kp.q);
        CHECK(kp.phi_n == (kp.p - 1) * (kp.q - 1));
        CHECK(kp.e * kp.d % kp.phi_n == 1);
        CHECK(mpz_sizeinbase(kp.n.get_mpz_t(), 2) == 128);
        mpz_class m = random_below(kp.n, rng);
        CHECK(rsa_decrypt(rsa_encrypt(m, kp.public_key()), kp.private_key()) == m);
    }
}

TEST_CASE("encrypt examples and range errors") {
    RsaKeyPair kp = RsaKeyPair::from_primes(3, 11, 3);
    RsaPublicKey pub = kp.public_key();
    CHECK(rsa_encrypt(2, pub) == 8);
    CHECK(rsa_encrypt(4, pub) == 31);
    CHECK(rsa_encrypt(0, pub) == 0);
    CHECK(rsa_encrypt(1, pub) == 1);
    CHECK_THROWS_AS(rsa_encrypt(33, pub), MessageRangeError);
    CHECK_THROWS_AS(rsa_encrypt(-1, pub), MessageRangeError);
}

TEST_CASE("decrypt examples and the exhaustive toy sweep") {
    RsaKeyPair kp = RsaKeyPair::from_primes(3, 11, 3);
    CHECK(rsa_decrypt(8, kp.private_key()) == 2);
    CHECK(rsa_decrypt(31, kp.private_key()) == 4);
    for (int m = 0; m < 33; ++m) {
        CHECK(rsa_decrypt(rsa_encrypt(m, kp.public_key()), kp.private_key()) == m);
    }
    CHECK_THROWS_AS(rsa_decrypt(40, kp.private_key()), MessageRangeError);
}

TEST_CASE("cycle attack walks 8 -> 17 -> 29 -> 2 -> 8") {
    RsaKeyPair kp = RsaKeyPair::from_primes(3, 11, 3);
    RsaPublicKey pub = kp.public_key();
    CHECK(rsa_encrypt(8, pub) == 17);
    CHECK(rsa_encrypt(17, pub) == 29);
    CHECK(rsa_encrypt(29, pub) == 2);
    CHECK(rsa_encrypt(2, pub) == 8);

    CycleAttackResult result = cycle_attack(8, pub, 100);
    CHECK(result.found);
    CHECK(result.plaintext == 2);
    CHECK(result.iterations == 4);
}

TEST_CASE("cycle attack edge cases") {
    RsaKeyPair kp = RsaKeyPair::from_primes(3, 11, 3);
    RsaPublicKey pub = kp.public_key();

    CycleAttackResult zero = cycle_attack(0, pub, 10);
    CHECK(zero.found);
    CHECK(zero.plaintext == 0);
    CHECK(zero.iterations == 1);

    CycleAttackResult cut = cycle_attack(8, pub, 1);
    CHECK_FALSE(cut.found);
}

TEST_CASE("cycle attack plaintext always re-encrypts to the ciphertext") {
    RsaKeyPair kp = RsaKeyPair::from_primes(3, 11, 3);
    RsaPublicKey pub = kp.public_key();
    for (int c = 0; c < 33; ++c) {
        CycleAttackResult r = cycle_attack(c, pub, 1000);
        REQUIRE(r.found);
        CHECK(rsa_encrypt(r.plaintext, pub) == c);
    }
}

TEST_CASE("private-key brute force at desk scale") {
    CHECK(brute_force_private_key({3, 33}).d == 7);
    CHECK(brute_force_private_key({5, 35}).d == 5);
    mpz_class big = mpz_class(1) << 30;
    CHECK_THROWS_AS(brute_force_private_key({3, big}), ScaleError);
}

TEST_CASE("brute-forced key decrypts everything the public key encrypts") {
    RsaPublicKey pub{3, 33};
    RsaPrivateKey recovered = brute_force_private_key(pub);
    for (int m = 0; m < 33; ++m) {
        CHECK(rsa_decrypt(rsa_encrypt(m, pub), recovered) == m);
    }
}

TEST_CASE("multiplicativity: E(a)E(b) = E(ab mod n) mod n") {
    Rng rng(6);
    RsaKeyPair toy = RsaKeyPair::from_primes(3, 11, 3);
    for (int a = 0; a < 33; ++a) {
        for (int b = 0; b < 33; ++b) {
            mpz_class lhs = rsa_encrypt(a, toy.public_key()) *
                            rsa_encrypt(b, toy.public_key()) % toy.n;
            CHECK(lhs == rsa_encrypt(mpz_class(a * b) % toy.n, toy.public_key()));
        }
    }
    RsaKeyPair kp = rsa_keygen(256, rng);
    for (int i = 0; i < 50; ++i) {
        mpz_class a = random_below(kp.n, rng);
        mpz_class b = random_below(kp.n, rng);
        mpz_class lhs = rsa_encrypt(a, kp.public_key()) * rsa_encrypt(b, kp.public_key()) % kp.n;
        CHECK(lhs == rsa_encrypt(a * b % kp.n, kp.public_key()));
    }
}

TEST_CASE("byte conversions and fingerprints") {
    CHECK(mpz_to_bytes(0).empty());
    CHECK(mpz_to_bytes(0, 4) == Bytes({0, 0, 0, 0}));
    CHECK(mpz_to_bytes(0x0102, 4) == Bytes({0, 0, 1, 2}));
    CHECK(bytes_to_mpz(Bytes({1, 0, 0})) == 65536);
    CHECK_THROWS_AS(mpz_to_bytes(0x010203, 2), std::invalid_argument);
    CHECK(key_id(33).size() == 32);
    CHECK(key_id(33) != key_id(35));
}

TEST_CASE("key files round-trip in decimal and accept hex") {
    namespace fs = std::filesystem;
    Rng rng(7);
    RsaKeyPair kp = rsa_keygen(128, rng);
    fs::path pub_path = fs::temp_directory_path() / "medcrypt_test_pub.txt";
    fs::path priv_path = fs::temp_directory_path() / "medcrypt_test_priv.txt";

    save_public_key(pub_path.string(), kp.public_key());
    save_private_key(priv_path.string(), kp.private_key());
    RsaPublicKey pub = load_public_key(pub_path.string());
    RsaPrivateKey priv = load_private_key(priv_path.string());
    CHECK(pub.e == kp.e);
    CHECK(pub.n == kp.n);
    CHECK(priv.d == kp.d);

    {
        std::ofstream out(pub_path);
        out << "e=0x11\nn=0x" << kp.n.get_str(16) << "\n";
    }
    RsaPublicKey hex_pub = load_public_key(pub_path.string());
    CHECK(hex_pub.e == 17);
    CHECK(hex_pub.n == kp.n);

    {
        std::ofstream out(pub_path);
        out << "e=3\n";
    }
    CHECK_THROWS(load_public_key(pub_path.string()));

    fs::remove(pub_path);
    fs::remove(priv_path);
}
