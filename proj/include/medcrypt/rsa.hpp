#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "medcrypt/bytes.hpp"
#include "medcrypt/errors.hpp"
#include "medcrypt/rng.hpp"

namespace medcrypt::rsa {

struct RsaPublicKey {
    mpz_class e;
    mpz_class n;
};

struct RsaPrivateKey {
    mpz_class d;
    mpz_class n;
};

/// Full key material from the five generation stages: primes p and q, the
/// modulus, the totient, and the exponent pair.
struct RsaKeyPair {
    mpz_class p;
    mpz_class q;
    mpz_class n;
    mpz_class phi_n;
    mpz_class e;
    mpz_class d;

    RsaPublicKey public_key() const { return {e, n}; }
    RsaPrivateKey private_key() const { return {d, n}; }

    /// Builds a pair from fixed primes; InvalidKeyError when p == q or
    /// gcd(phi, e) != 1.
    static RsaKeyPair from_primes(const mpz_class& p, const mpz_class& q,
                                  const mpz_class& e);
};

// Authored big-integer routines; GMP supplies only raw arithmetic.
mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& mod);
mpz_class mod_inverse(const mpz_class& a, const mpz_class& m);  // InvalidKeyError if none
bool is_probable_prime(const mpz_class& n, Rng& rng, int rounds = 40);

/// Random probable prime of exactly `bits` bits (Miller-Rabin, 40 rounds);
/// bits must be >= 8.
mpz_class generate_prime(unsigned bits, Rng& rng);

/// Runs the five stages: random primes, n = p*q, phi = (p-1)(q-1), public
/// exponent coprime to phi (65537 preferred), d = e^-1 mod phi. The modulus
/// has exactly `bits` bits; bits must be >= 16.
RsaKeyPair rsa_keygen(unsigned bits, Rng& rng);

/// c = m^e mod n; MessageRangeError unless 0 <= m < n.
mpz_class rsa_encrypt(const mpz_class& m, const RsaPublicKey& pub);
/// m = c^d mod n; MessageRangeError unless 0 <= c < n.
mpz_class rsa_decrypt(const mpz_class& c, const RsaPrivateKey& priv);

struct CycleAttackResult {
    bool found = false;
    mpz_class plaintext;
    std::uint64_t iterations = 0;
};

/// Re-encrypts c until the sequence returns to c; the preceding value is the
/// plaintext and the cycle length is reported. Gives up after max_iterations.
CycleAttackResult cycle_attack(const mpz_class& c, const RsaPublicKey& pub,
                               std::uint64_t max_iterations);

/// Recovers the private key by trial-division factoring. Guarded to n <= 10^6
/// (ScaleError beyond) — the attack exists to be demonstrated, not to scale.
RsaPrivateKey brute_force_private_key(const RsaPublicKey& pub);

// Byte/integer conversions (big-endian). width 0 means minimal length.
Bytes mpz_to_bytes(const mpz_class& x, std::size_t width = 0);
mpz_class bytes_to_mpz(std::span<const std::uint8_t> bytes);
mpz_class random_below(const mpz_class& bound, Rng& rng);

/// 16-byte public-key fingerprint: leading bytes of the hash of the modulus.
std::array<std::uint8_t, 16> key_fingerprint(const mpz_class& n);
std::string key_id(const mpz_class& n);  // fingerprint as lowercase hex

// Key files: "e=<int>" / "d=<int>" and "n=<int>" lines, decimal or 0x-hex.
void save_public_key(const std::string& path, const RsaPublicKey& pub);
void save_private_key(const std::string& path, const RsaPrivateKey& priv);
RsaPublicKey load_public_key(const std::string& path);
RsaPrivateKey load_private_key(const std::string& path);

}  // namespace medcrypt::rsa
