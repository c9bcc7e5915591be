#pragma once

#include <string>

#include "medcrypt/rsa.hpp"
#include "medcrypt/sha256.hpp"

namespace medcrypt::digsig {

struct Signature {
    mpz_class sig_value;
    std::string signer_key_id;
};

/// Multiplicative blinding factor; valid when 1 < r < n and gcd(r, n) = 1.
struct BlindingFactor {
    mpz_class r;

    static BlindingFactor random(const mpz_class& n, Rng& rng);
};

/// Digest interpreted as a big-endian integer reduced mod n.
mpz_class digest_to_int(const Digest& digest, const mpz_class& n);

/// Hash-then-sign: s = H^d mod n.
Signature sign(const Digest& digest, const rsa::RsaPrivateKey& priv);

/// True iff sig^e mod n recovers the reduced digest. Never throws; a bad
/// signature is simply false.
bool verify(const Digest& digest, const Signature& sig, const rsa::RsaPublicKey& pub);

/// m * r^e mod n; BlindingError when gcd(r, n) != 1.
mpz_class blind(const mpz_class& m, const mpz_class& r, const rsa::RsaPublicKey& pub);

/// blind_sig * r^-1 mod n — the signer's signature on the unblinded message.
mpz_class unblind(const mpz_class& blind_sig, const mpz_class& r,
                  const rsa::RsaPublicKey& pub);

/// Forward-secure rotation: a fresh keypair whose state retains nothing of
/// the previous private key. Old signatures verify against archived public
/// keys.
rsa::RsaKeyPair rotate_signing_key(const rsa::RsaKeyPair& current, unsigned bits,
                                   Rng& rng);

// Signature files: hex signature on one line, signer key id on the next.
std::string format_signature(const Signature& sig);
Signature parse_signature(const std::string& text);
void save_signature_file(const std::string& path, const Signature& sig);
Signature load_signature_file(const std::string& path);

}  // namespace medcrypt::digsig
