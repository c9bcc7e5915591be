// Python bindings for the main library operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <gmpxx.h>

#include "medcrypt/aes.hpp"
#include "medcrypt/bench.hpp"
#include "medcrypt/blowfish.hpp"
#include "medcrypt/cipher.hpp"
#include "medcrypt/des.hpp"
#include "medcrypt/digsig.hpp"
#include "medcrypt/rsa.hpp"
#include "medcrypt/sha256.hpp"
#include "medcrypt/telemed.hpp"

namespace py = pybind11;

namespace pybind11::detail {

// Arbitrary-precision integers cross the boundary as Python ints.
template <>
struct type_caster<mpz_class> {
    PYBIND11_TYPE_CASTER(mpz_class, const_name("int"));

    bool load(handle src, bool) {
        if (!PyLong_Check(src.ptr())) return false;
        PyObject* str = PyObject_Str(src.ptr());
        if (str == nullptr) return false;
        const char* text = PyUnicode_AsUTF8(str);
        bool ok = text != nullptr;
        if (ok) {
            try {
                value = mpz_class(text, 10);
            } catch (const std::exception&) {
                ok = false;
            }
        }
        Py_DECREF(str);
        return ok;
    }

    static handle cast(const mpz_class& v, return_value_policy, handle) {
        return PyLong_FromString(v.get_str(16).c_str(), nullptr, 16);
    }
};

}  // namespace pybind11::detail

namespace {

using namespace medcrypt;

Bytes as_bytes(const py::bytes& b) {
    std::string_view view = b;
    return Bytes(view.begin(), view.end());
}

py::bytes to_py(std::span<const std::uint8_t> data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

telemed::Id16 as_id16(const py::bytes& b) {
    Bytes raw = as_bytes(b);
    if (raw.size() != 16) {
        throw std::invalid_argument("identifier must be exactly 16 bytes");
    }
    telemed::Id16 id{};
    std::copy(raw.begin(), raw.end(), id.begin());
    return id;
}

Digest as_digest(const py::bytes& b) {
    Bytes raw = as_bytes(b);
    if (raw.size() != 32) {
        throw std::invalid_argument("digest must be exactly 32 bytes");
    }
    Digest d{};
    std::copy(raw.begin(), raw.end(), d.begin());
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Block ciphers, textbook RSA signatures, and the sealed-record protocol";

    py::register_exception<CryptoError>(m, "CryptoError");
    py::register_exception<PaddingError>(m, "PaddingError");
    py::register_exception<ReplayError>(m, "ReplayError");
    py::register_exception<AuthenticityError>(m, "AuthenticityError");
    py::register_exception<DecryptError>(m, "DecryptError");
    py::register_exception<FrameError>(m, "FrameError");

    py::enum_<SuiteId>(m, "Suite")
        .value("DES", SuiteId::DES)
        .value("TDES", SuiteId::TDES)
        .value("AES128", SuiteId::AES128)
        .value("AES192", SuiteId::AES192)
        .value("AES256", SuiteId::AES256)
        .value("BLOWFISH", SuiteId::BLOWFISH);

    m.def("suite_block_size", [](SuiteId s) { return suite_info(s).block_size; });
    m.def("suite_key_bytes", [](SuiteId s) { return suite_info(s).key_bytes; });

    m.def("pad", [](const py::bytes& data, std::size_t block_size) {
        return to_py(pad(as_bytes(data), block_size));
    });
    m.def("unpad", [](const py::bytes& data, std::size_t block_size) {
        return to_py(unpad(as_bytes(data), block_size));
    });

    m.def(
        "random_key",
        [](SuiteId suite, std::uint64_t seed, std::size_t key_len) {
            Rng rng(seed);
            return to_py(BlockKey::random(suite, rng, key_len).key_bytes);
        },
        py::arg("suite"), py::arg("seed"), py::arg("key_len") = 0);

    m.def(
        "encrypt",
        [](SuiteId suite, const py::bytes& key, const py::bytes& iv,
           const std::string& mode, const py::bytes& data) {
            BlockKey k = BlockKey::create(suite, as_bytes(key));
            auto cipher = make_block_cipher(k);
            return to_py(mode_encrypt(*cipher, InitializationVector::create(suite, as_bytes(iv)),
                                      mode_from_name(mode), as_bytes(data)));
        },
        "Apply the suite cipher in ECB or CBC over block-aligned data");
    m.def("decrypt", [](SuiteId suite, const py::bytes& key, const py::bytes& iv,
                        const std::string& mode, const py::bytes& data) {
        BlockKey k = BlockKey::create(suite, as_bytes(key));
        auto cipher = make_block_cipher(k);
        return to_py(mode_decrypt(*cipher, InitializationVector::create(suite, as_bytes(iv)),
                                  mode_from_name(mode), as_bytes(data)));
    });

    // Single-block primitives for vector checks.
    m.def("des_encrypt_block", [](std::uint64_t block, std::uint64_t key) {
        return des::des_encrypt_block(block, des::des_key_schedule(key));
    });
    m.def("des_decrypt_block", [](std::uint64_t block, std::uint64_t key) {
        return des::des_decrypt_block(block, des::des_key_schedule(key));
    });
    m.def("tdes_encrypt_block",
          [](std::uint64_t block, std::uint64_t k1, std::uint64_t k2, std::uint64_t k3) {
              return des::tdes_encrypt_block(block, {k1, k2, k3});
          });
    m.def("aes_encrypt_block", [](const py::bytes& block, const py::bytes& key) {
        Bytes in = as_bytes(block);
        if (in.size() != 16) throw std::invalid_argument("AES block must be 16 bytes");
        Bytes out(16);
        aes::aes_encrypt_block(in, out, aes::AesRoundKeys::expand(as_bytes(key)));
        return to_py(out);
    });
    m.def("aes_decrypt_block", [](const py::bytes& block, const py::bytes& key) {
        Bytes in = as_bytes(block);
        if (in.size() != 16) throw std::invalid_argument("AES block must be 16 bytes");
        Bytes out(16);
        aes::aes_decrypt_block(in, out, aes::AesRoundKeys::expand(as_bytes(key)));
        return to_py(out);
    });
    m.def("blowfish_encrypt_block", [](std::uint64_t block, const py::bytes& key) {
        return blowfish::blowfish_encrypt_block(block, blowfish::blowfish_init(as_bytes(key)));
    });
    m.def("blowfish_decrypt_block", [](std::uint64_t block, const py::bytes& key) {
        return blowfish::blowfish_decrypt_block(block, blowfish::blowfish_init(as_bytes(key)));
    });

    m.def("sha256", [](const py::bytes& data) {
        Digest d = sha256(as_bytes(data));
        return to_py(d);
    });

    py::class_<rsa::RsaPublicKey>(m, "RsaPublicKey")
        .def(py::init<mpz_class, mpz_class>(), py::arg("e"), py::arg("n"))
        .def_readonly("e", &rsa::RsaPublicKey::e)
        .def_readonly("n", &rsa::RsaPublicKey::n);
    py::class_<rsa::RsaPrivateKey>(m, "RsaPrivateKey")
        .def(py::init<mpz_class, mpz_class>(), py::arg("d"), py::arg("n"))
        .def_readonly("d", &rsa::RsaPrivateKey::d)
        .def_readonly("n", &rsa::RsaPrivateKey::n);

    py::class_<rsa::RsaKeyPair>(m, "RsaKeyPair")
        .def_readonly("p", &rsa::RsaKeyPair::p)
        .def_readonly("q", &rsa::RsaKeyPair::q)
        .def_readonly("n", &rsa::RsaKeyPair::n)
        .def_readonly("phi_n", &rsa::RsaKeyPair::phi_n)
        .def_readonly("e", &rsa::RsaKeyPair::e)
        .def_readonly("d", &rsa::RsaKeyPair::d)
        .def("public_key", &rsa::RsaKeyPair::public_key)
        .def("private_key", &rsa::RsaKeyPair::private_key)
        .def_static("from_primes", &rsa::RsaKeyPair::from_primes, py::arg("p"), py::arg("q"),
                    py::arg("e"));

    m.def(
        "rsa_keygen",
        [](unsigned bits, std::uint64_t seed) {
            Rng rng(seed);
            return rsa::rsa_keygen(bits, rng);
        },
        py::arg("bits"), py::arg("seed"));
    m.def(
        "generate_prime",
        [](unsigned bits, std::uint64_t seed) {
            Rng rng(seed);
            return rsa::generate_prime(bits, rng);
        },
        py::arg("bits"), py::arg("seed"));
    m.def("rsa_encrypt", &rsa::rsa_encrypt);
    m.def("rsa_decrypt", &rsa::rsa_decrypt);
    m.def("cycle_attack", [](const mpz_class& c, const rsa::RsaPublicKey& pub,
                             std::uint64_t max_iterations) {
        auto r = rsa::cycle_attack(c, pub, max_iterations);
        return py::make_tuple(r.found, r.plaintext, r.iterations);
    });
    m.def("brute_force_private_key", &rsa::brute_force_private_key);

    py::class_<digsig::Signature>(m, "Signature")
        .def(py::init([](const mpz_class& value, const std::string& key_id) {
                 return digsig::Signature{value, key_id};
             }),
             py::arg("sig_value"), py::arg("signer_key_id") = "")
        .def_readonly("sig_value", &digsig::Signature::sig_value)
        .def_readonly("signer_key_id", &digsig::Signature::signer_key_id);

    m.def("sign", [](const py::bytes& digest, const rsa::RsaPrivateKey& priv) {
        return digsig::sign(as_digest(digest), priv);
    });
    m.def("verify", [](const py::bytes& digest, const digsig::Signature& sig,
                       const rsa::RsaPublicKey& pub) {
        return digsig::verify(as_digest(digest), sig, pub);
    });
    m.def("blind", &digsig::blind);
    m.def("unblind", &digsig::unblind);

    py::class_<telemed::PatientRecord>(m, "PatientRecord")
        .def(py::init([](const py::bytes& patient_id, std::int64_t timestamp,
                         const std::string& measurement, const std::string& value,
                         const std::string& unit) {
                 return telemed::make_record(as_id16(patient_id), timestamp, measurement,
                                             value, unit);
             }),
             py::arg("patient_id"), py::arg("timestamp"), py::arg("measurement"),
             py::arg("value"), py::arg("unit"))
        .def_property_readonly("patient_id",
                               [](const telemed::PatientRecord& r) { return to_py(r.patient_id); })
        .def_readonly("timestamp", &telemed::PatientRecord::timestamp)
        .def_readonly("measurement", &telemed::PatientRecord::measurement)
        .def_readonly("value", &telemed::PatientRecord::value)
        .def_readonly("unit", &telemed::PatientRecord::unit)
        .def("__eq__", [](const telemed::PatientRecord& a, const telemed::PatientRecord& b) {
            return a == b;
        });

    py::class_<telemed::SealedEnvelope>(m, "SealedEnvelope")
        .def_property_readonly("sender_id",
                               [](const telemed::SealedEnvelope& e) { return to_py(e.sender_id); })
        .def_property_readonly("nonce",
                               [](const telemed::SealedEnvelope& e) { return to_py(e.nonce); })
        .def_readonly("suite", &telemed::SealedEnvelope::suite)
        .def_property_readonly(
            "wrapped_key", [](const telemed::SealedEnvelope& e) { return to_py(e.wrapped_key); })
        .def_property_readonly("iv",
                               [](const telemed::SealedEnvelope& e) { return to_py(e.iv); })
        .def_property_readonly(
            "ciphertext", [](const telemed::SealedEnvelope& e) { return to_py(e.ciphertext); });

    py::class_<telemed::Session>(m, "Session")
        .def_property_readonly("suite", [](const telemed::Session& s) { return s.suite; })
        .def_property_readonly("session_key",
                               [](const telemed::Session& s) { return to_py(s.session_key); })
        .def_readwrite("rotation_period", &telemed::Session::rotation_period)
        .def_readonly("send_counter", &telemed::Session::send_counter)
        .def_static("responder", &telemed::Session::responder, py::arg("own_keys"),
                    py::arg("peer_public_key"));

    m.def(
        "start_session",
        [](const rsa::RsaKeyPair& patient_keys, const rsa::RsaPublicKey& doctor_pub,
           SuiteId suite, std::uint64_t seed) {
            auto [session, env] = telemed::start_session(patient_keys, doctor_pub, suite,
                                                         Rng(seed));
            return py::make_tuple(std::move(session), std::move(env));
        },
        py::arg("patient_keys"), py::arg("doctor_pub"), py::arg("suite"), py::arg("seed"));
    m.def("seal_envelope", &telemed::seal_envelope);
    m.def("open_envelope", &telemed::open_envelope);
    m.def("encode_frame", [](const telemed::SealedEnvelope& env) {
        return to_py(telemed::encode_frame(env));
    });
    m.def("decode_frame", [](const py::bytes& frame) {
        return telemed::decode_frame(as_bytes(frame));
    });

    m.def(
        "des_brute_force",
        [](std::uint64_t plaintext, std::uint64_t ciphertext, unsigned unknown_bits,
           std::uint64_t key_template, unsigned threads) {
            auto r = bench::des_brute_force(
                {plaintext, ciphertext, unknown_bits, key_template}, threads);
            return py::make_tuple(r.found, r.key);
        },
        py::arg("plaintext"), py::arg("ciphertext"), py::arg("unknown_bits"),
        py::arg("key_template"), py::arg("threads") = 0);
}
