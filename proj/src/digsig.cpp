#include "medcrypt/digsig.hpp"

#include <fstream>
#include <sstream>

namespace medcrypt::digsig {

mpz_class digest_to_int(const Digest& digest, const mpz_class& n) {
    if (n <= 0) {
        throw std::invalid_argument("digest_to_int: modulus must be positive");
    }
    return rsa::bytes_to_mpz(digest) % n;
}

Signature sign(const Digest& digest, const rsa::RsaPrivateKey& priv) {
    mpz_class h = digest_to_int(digest, priv.n);
    return {rsa::mod_pow(h, priv.d, priv.n), rsa::key_id(priv.n)};
}

bool verify(const Digest& digest, const Signature& sig, const rsa::RsaPublicKey& pub) {
    if (sig.sig_value < 0 || sig.sig_value >= pub.n) return false;
    return rsa::mod_pow(sig.sig_value, pub.e, pub.n) == digest_to_int(digest, pub.n);
}

BlindingFactor BlindingFactor::random(const mpz_class& n, Rng& rng) {
    if (n <= 3) {
        throw std::invalid_argument("BlindingFactor: modulus too small");
    }
    while (true) {
        mpz_class r = rsa::random_below(n - 2, rng) + 2;  // r in (1, n)
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
        if (g == 1) return {r};
    }
}

mpz_class blind(const mpz_class& m, const mpz_class& r, const rsa::RsaPublicKey& pub) {
    if (m < 0 || m >= pub.n) {
        throw MessageRangeError("blind: message outside [0, n)");
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pub.n.get_mpz_t());
    if (g != 1) {
        throw BlindingError("blind: factor shares a divisor with the modulus");
    }
    return (m * rsa::mod_pow(r, pub.e, pub.n)) % pub.n;
}

mpz_class unblind(const mpz_class& blind_sig, const mpz_class& r,
                  const rsa::RsaPublicKey& pub) {
    return (blind_sig * rsa::mod_inverse(r, pub.n)) % pub.n;
}

rsa::RsaKeyPair rotate_signing_key(const rsa::RsaKeyPair& current, unsigned bits,
                                   Rng& rng) {
    while (true) {
        rsa::RsaKeyPair fresh = rsa::rsa_keygen(bits, rng);
        if (fresh.n != current.n) return fresh;
    }
}

std::string format_signature(const Signature& sig) {
    std::ostringstream os;
    os << sig.sig_value.get_str(16) << "\n" << sig.signer_key_id << "\n";
    return os.str();
}

Signature parse_signature(const std::string& text) {
    std::istringstream is(text);
    std::string sig_hex;
    std::string key_id;
    if (!std::getline(is, sig_hex) || !std::getline(is, key_id)) {
        throw std::invalid_argument("signature text needs two lines: hex value, key id");
    }
    Signature out;
    try {
        out.sig_value = mpz_class(sig_hex, 16);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed signature hex");
    }
    if (out.sig_value < 0) {
        throw std::invalid_argument("signature value must be non-negative");
    }
    out.signer_key_id = key_id;
    return out;
}

void save_signature_file(const std::string& path, const Signature& sig) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write signature file: " + path);
    }
    out << format_signature(sig);
}

Signature load_signature_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open signature file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_signature(buf.str());
}

}  // namespace medcrypt::digsig
