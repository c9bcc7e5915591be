#include "medcrypt/rsa.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "medcrypt/sha256.hpp"

namespace medcrypt::rsa {

namespace {

const std::vector<unsigned long>& small_primes() {
    static const std::vector<unsigned long> primes = [] {
        std::vector<unsigned long> out;
        std::vector<bool> sieve(1024, true);
        for (unsigned long i = 2; i < sieve.size(); ++i) {
            if (!sieve[i]) continue;
            out.push_back(i);
            for (unsigned long j = i * i; j < sieve.size(); j += i) sieve[j] = false;
        }
        return out;
    }();
    return primes;
}

}  // namespace

mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
    if (mod <= 0) {
        throw std::invalid_argument("mod_pow: modulus must be positive");
    }
    if (exp < 0) {
        throw std::invalid_argument("mod_pow: negative exponent");
    }
    if (mod == 1) return 0;

    mpz_class result = 1;
    mpz_class b;
    mpz_mod(b.get_mpz_t(), base.get_mpz_t(), mod.get_mpz_t());
    if (exp == 0) return result;

    // Left-to-right square-and-multiply over the exponent bits.
    mp_bitcnt_t nbits = mpz_sizeinbase(exp.get_mpz_t(), 2);
    for (mp_bitcnt_t i = nbits; i-- > 0;) {
        result = (result * result) % mod;
        if (mpz_tstbit(exp.get_mpz_t(), i)) {
            result = (result * b) % mod;
        }
    }
    return result;
}

mpz_class mod_inverse(const mpz_class& a, const mpz_class& m) {
    if (m <= 1) {
        throw std::invalid_argument("mod_inverse: modulus must exceed 1");
    }
    mpz_class old_r;
    mpz_mod(old_r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    mpz_class r = m;
    mpz_class old_s = 1;
    mpz_class s = 0;
    while (r != 0) {
        mpz_class q = old_r / r;
        mpz_class tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) {
        throw InvalidKeyError("mod_inverse: value is not invertible");
    }
    mpz_class inv;
    mpz_mod(inv.get_mpz_t(), old_s.get_mpz_t(), m.get_mpz_t());
    return inv;
}

bool is_probable_prime(const mpz_class& n, Rng& rng, int rounds) {
    if (n < 2) return false;
    for (unsigned long p : small_primes()) {
        if (n == p) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }

    // n - 1 = d * 2^s with d odd.
    mpz_class d = n - 1;
    unsigned long s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }

    mpz_class n_minus_1 = n - 1;
    for (int round = 0; round < rounds; ++round) {
        mpz_class a = random_below(n - 3, rng) + 2;  // witness in [2, n-2]
        mpz_class x = mod_pow(a, d, n);
        if (x == 1 || x == n_minus_1) continue;
        bool composite = true;
        for (unsigned long i = 0; i + 1 < s; ++i) {
            x = (x * x) % n;
            if (x == n_minus_1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

mpz_class generate_prime(unsigned bits, Rng& rng) {
    if (bits < 8) {
        throw std::invalid_argument("generate_prime: need at least 8 bits");
    }
    const std::size_t nbytes = (bits + 7) / 8;
    while (true) {
        mpz_class candidate = bytes_to_mpz(rng.bytes(nbytes));
        mpz_fdiv_r_2exp(candidate.get_mpz_t(), candidate.get_mpz_t(), bits);
        mpz_setbit(candidate.get_mpz_t(), bits - 1);  // exact bit length
        mpz_setbit(candidate.get_mpz_t(), 0);         // odd
        if (is_probable_prime(candidate, rng)) {
            return candidate;
        }
    }
}

RsaKeyPair RsaKeyPair::from_primes(const mpz_class& p, const mpz_class& q,
                                   const mpz_class& e) {
    if (p < 2 || q < 2) {
        throw InvalidKeyError("primes must be at least 2");
    }
    if (p == q) {
        throw InvalidKeyError("p and q must differ");
    }
    if (e < 2) {
        throw InvalidKeyError("public exponent must be at least 2");
    }
    RsaKeyPair kp;
    kp.p = p;
    kp.q = q;
    kp.n = p * q;
    kp.phi_n = (p - 1) * (q - 1);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), kp.phi_n.get_mpz_t(), e.get_mpz_t());
    if (g != 1) {
        throw InvalidKeyError("gcd(phi(n), e) must be 1");
    }
    kp.e = e;
    kp.d = mod_inverse(e, kp.phi_n);
    return kp;
}

RsaKeyPair rsa_keygen(unsigned bits, Rng& rng) {
    if (bits < 16) {
        throw std::invalid_argument("rsa_keygen: modulus must be at least 16 bits");
    }
    const unsigned p_bits = (bits + 1) / 2;
    const unsigned q_bits = bits - p_bits;

    while (true) {
        // Stage 1: two random primes.
        mpz_class p = generate_prime(p_bits, rng);
        mpz_class q = generate_prime(q_bits < 8 ? 8 : q_bits, rng);
        if (p == q) continue;

        // Stages 2-3: modulus and totient.
        mpz_class n = p * q;
        if (mpz_sizeinbase(n.get_mpz_t(), 2) != bits) continue;
        mpz_class phi = (p - 1) * (q - 1);

        // Stage 4: public exponent coprime to phi; 65537 preferred, else the
        // smallest odd coprime from 3 up.
        mpz_class e = 65537;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), phi.get_mpz_t(), e.get_mpz_t());
        if (e >= phi || g != 1) {
            e = 3;
            while (e < phi) {
                mpz_gcd(g.get_mpz_t(), phi.get_mpz_t(), e.get_mpz_t());
                if (g == 1) break;
                e += 2;
            }
            if (e >= phi) continue;
        }

        // Stage 5: private exponent.
        RsaKeyPair kp;
        kp.p = p;
        kp.q = q;
        kp.n = n;
        kp.phi_n = phi;
        kp.e = e;
        kp.d = mod_inverse(e, phi);
        return kp;
    }
}

mpz_class rsa_encrypt(const mpz_class& m, const RsaPublicKey& pub) {
    if (m < 0 || m >= pub.n) {
        throw MessageRangeError("rsa_encrypt: message outside [0, n)");
    }
    return mod_pow(m, pub.e, pub.n);
}

mpz_class rsa_decrypt(const mpz_class& c, const RsaPrivateKey& priv) {
    if (c < 0 || c >= priv.n) {
        throw MessageRangeError("rsa_decrypt: ciphertext outside [0, n)");
    }
    return mod_pow(c, priv.d, priv.n);
}

CycleAttackResult cycle_attack(const mpz_class& c, const RsaPublicKey& pub,
                               std::uint64_t max_iterations) {
    if (c < 0 || c >= pub.n) {
        throw MessageRangeError("cycle_attack: ciphertext outside [0, n)");
    }
    mpz_class current = c;
    for (std::uint64_t k = 1; k <= max_iterations; ++k) {
        mpz_class next = rsa_encrypt(current, pub);
        if (next == c) {
            // The cycle closed: the value that re-encrypts to c is the plaintext.
            return {true, current, k};
        }
        current = next;
    }
    return {false, 0, max_iterations};
}

RsaPrivateKey brute_force_private_key(const RsaPublicKey& pub) {
    if (pub.n > 1000000) {
        throw ScaleError("brute_force_private_key: n exceeds the desk-scale guard of 10^6");
    }
    unsigned long n = mpz_get_ui(pub.n.get_mpz_t());
    unsigned long p = 0;
    for (unsigned long f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            p = f;
            break;
        }
    }
    if (p == 0) {
        throw InvalidKeyError("brute_force_private_key: modulus has no small factor");
    }
    unsigned long q = n / p;
    mpz_class phi = mpz_class(p - 1) * mpz_class(q - 1);
    mpz_class d = mod_inverse(pub.e, phi);
    return {d, pub.n};
}

Bytes mpz_to_bytes(const mpz_class& x, std::size_t width) {
    if (x < 0) {
        throw std::invalid_argument("mpz_to_bytes: negative value");
    }
    std::size_t count = (mpz_sizeinbase(x.get_mpz_t(), 2) + 7) / 8;
    if (x == 0) count = 0;
    if (width == 0) width = count;
    if (count > width) {
        throw std::invalid_argument("mpz_to_bytes: value wider than requested width");
    }
    Bytes out(width, 0);
    if (count > 0) {
        std::size_t written = 0;
        mpz_export(out.data() + (width - count), &written, 1, 1, 1, 0, x.get_mpz_t());
    }
    return out;
}

mpz_class bytes_to_mpz(std::span<const std::uint8_t> bytes) {
    mpz_class out;
    if (!bytes.empty()) {
        mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    }
    return out;
}

mpz_class random_below(const mpz_class& bound, Rng& rng) {
    if (bound <= 0) {
        throw std::invalid_argument("random_below: bound must be positive");
    }
    // Eight extra bytes keep the modulo bias negligible.
    std::size_t nbytes = (mpz_sizeinbase(bound.get_mpz_t(), 2) + 7) / 8 + 8;
    mpz_class v = bytes_to_mpz(rng.bytes(nbytes));
    return v % bound;
}

std::array<std::uint8_t, 16> key_fingerprint(const mpz_class& n) {
    Digest digest = sha256(mpz_to_bytes(n));
    std::array<std::uint8_t, 16> out{};
    std::copy_n(digest.begin(), 16, out.begin());
    return out;
}

std::string key_id(const mpz_class& n) {
    auto fp = key_fingerprint(n);
    return to_hex(fp);
}

namespace {

void write_lines(const std::string& path,
                 const std::vector<std::pair<std::string, const mpz_class*>>& fields) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write key file: " + path);
    }
    for (const auto& [name, value] : fields) {
        out << name << "=" << value->get_str(10) << "\n";
    }
}

std::map<std::string, mpz_class> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open key file: " + path);
    }
    std::map<std::string, mpz_class> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("malformed key line in " + path);
        }
        std::string name = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        try {
            // Base 0 accepts decimal and 0x-prefixed hex.
            out[name] = mpz_class(value, 0);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed integer for " + name + " in " + path);
        }
    }
    return out;
}

mpz_class require_field(const std::map<std::string, mpz_class>& fields,
                        const std::string& name, const std::string& path) {
    auto it = fields.find(name);
    if (it == fields.end()) {
        throw std::runtime_error("key file " + path + " is missing " + name + "=");
    }
    return it->second;
}

}  // namespace

void save_public_key(const std::string& path, const RsaPublicKey& pub) {
    write_lines(path, {{"e", &pub.e}, {"n", &pub.n}});
}

void save_private_key(const std::string& path, const RsaPrivateKey& priv) {
    write_lines(path, {{"d", &priv.d}, {"n", &priv.n}});
}

RsaPublicKey load_public_key(const std::string& path) {
    auto fields = read_lines(path);
    return {require_field(fields, "e", path), require_field(fields, "n", path)};
}

RsaPrivateKey load_private_key(const std::string& path) {
    auto fields = read_lines(path);
    return {require_field(fields, "d", path), require_field(fields, "n", path)};
}

}  // namespace medcrypt::rsa
