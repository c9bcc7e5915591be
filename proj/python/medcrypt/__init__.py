"""Block ciphers, textbook RSA signatures, and the sealed-record exchange protocol."""

from ._core import (  # noqa: F401
    AuthenticityError,
    CryptoError,
    DecryptError,
    FrameError,
    PaddingError,
    PatientRecord,
    ReplayError,
    RsaKeyPair,
    RsaPrivateKey,
    RsaPublicKey,
    SealedEnvelope,
    Session,
    Signature,
    Suite,
    aes_decrypt_block,
    aes_encrypt_block,
    blind,
    blowfish_decrypt_block,
    blowfish_encrypt_block,
    brute_force_private_key,
    cycle_attack,
    decode_frame,
    decrypt,
    des_brute_force,
    des_decrypt_block,
    des_encrypt_block,
    encode_frame,
    encrypt,
    generate_prime,
    open_envelope,
    pad,
    random_key,
    rsa_decrypt,
    rsa_encrypt,
    rsa_keygen,
    seal_envelope,
    sha256,
    sign,
    start_session,
    suite_block_size,
    suite_key_bytes,
    tdes_encrypt_block,
    unblind,
    unpad,
    verify,
)

__version__ = "0.1.0"
