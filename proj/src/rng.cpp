#include "medcrypt/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace medcrypt {

Rng Rng::from_entropy() {
    std::random_device rd;
    std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    return Rng(seed);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::below: zero bound");
    }
    // Rejection sampling keeps the draw unbiased.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = gen_();
    } while (v >= limit);
    return v % bound;
}

void Rng::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
        std::uint64_t v = gen_();
        for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
            out[i] = static_cast<std::uint8_t>(v & 0xff);
            v >>= 8;
        }
    }
}

Bytes Rng::bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

std::string Rng::save_state() const {
    std::ostringstream os;
    os << gen_;
    return os.str();
}

Rng Rng::restore_state(const std::string& state) {
    Rng rng;
    std::istringstream is(state);
    is >> rng.gen_;
    if (!is) {
        throw std::invalid_argument("Rng::restore_state: malformed state");
    }
    return rng;
}

}  // namespace medcrypt
