#pragma once

#include <stdexcept>

namespace medcrypt {

/// Base class for every failure this library classifies. Anything derived
/// from CryptoError is a crypto/protocol error; plain std exceptions signal
/// caller misuse (bad arguments, unreadable files).
struct CryptoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PaddingError : CryptoError {
    using CryptoError::CryptoError;
};
struct LengthError : CryptoError {
    using CryptoError::CryptoError;
};
struct KeyLengthError : CryptoError {
    using CryptoError::CryptoError;
};
struct InvalidKeyError : CryptoError {
    using CryptoError::CryptoError;
};
struct MessageRangeError : CryptoError {
    using CryptoError::CryptoError;
};
struct ScaleError : CryptoError {
    using CryptoError::CryptoError;
};
struct BlindingError : CryptoError {
    using CryptoError::CryptoError;
};
struct OrderError : CryptoError {
    using CryptoError::CryptoError;
};
struct ReplayError : CryptoError {
    using CryptoError::CryptoError;
};
struct AuthenticityError : CryptoError {
    using CryptoError::CryptoError;
};
struct DecryptError : CryptoError {
    using CryptoError::CryptoError;
};
struct FrameError : CryptoError {
    using CryptoError::CryptoError;
};

}  // namespace medcrypt
