#include "medcrypt/des.hpp"

#include <cstdint>
#include <stdexcept>

namespace medcrypt::des {

namespace {

#include "des_tables.inc"

inline std::uint32_t rotl32(std::uint32_t x, int n) {
    return n == 0 ? x : (x << n) | (x >> (32 - n));
}

inline std::uint32_t rot28(std::uint32_t x, int n) {
    return ((x << n) | (x >> (28 - n))) & 0x0fffffff;
}

// Byte-indexed permutation tables and the fused S-box/P-box tables, derived
// once from the canonical arrays above.
struct DerivedTables {
    std::uint64_t ip[8][256];
    std::uint64_t fp[8][256];
    std::uint32_t sp[8][64];
};

void build_byte_permutation(const std::uint8_t* table, std::uint64_t (*out)[256]) {
    // out_pos[b] = 0-based output position (from MSB) of input bit number b.
    int out_pos[65];
    for (int o = 0; o < 64; ++o) out_pos[table[o]] = o;
    for (int byte_idx = 0; byte_idx < 8; ++byte_idx) {
        for (int v = 0; v < 256; ++v) {
            std::uint64_t acc = 0;
            for (int j = 0; j < 8; ++j) {
                if ((v >> (7 - j)) & 1) {
                    int in_bit = 8 * byte_idx + j + 1;
                    acc |= 1ull << (63 - out_pos[in_bit]);
                }
            }
            out[byte_idx][v] = acc;
        }
    }
}

DerivedTables build_tables() {
    DerivedTables t{};
    build_byte_permutation(kIp, t.ip);
    build_byte_permutation(kFp, t.fp);

    // The Feistel function selects expansion windows by rotation; confirm the
    // shortcut agrees with the canonical E table.
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 6; ++j) {
            int expected = (4 * i + j - 1) % 32 + 1;
            if (expected <= 0) expected += 32;
            if (kExpansion[6 * i + j] != expected) {
                throw std::logic_error("DES expansion table mismatch");
            }
        }
    }

    for (int box = 0; box < 8; ++box) {
        for (int v = 0; v < 64; ++v) {
            int row = ((v >> 4) & 2) | (v & 1);
            int col = (v >> 1) & 0x0f;
            std::uint32_t s = kSboxes[box][16 * row + col];
            std::uint32_t pre = s << (28 - 4 * box);
            std::uint32_t acc = 0;
            for (int o = 0; o < 32; ++o) {
                if ((pre >> (32 - kPbox[o])) & 1) acc |= 1u << (31 - o);
            }
            t.sp[box][v] = acc;
        }
    }
    return t;
}

const DerivedTables& tables() {
    static const DerivedTables t = build_tables();
    return t;
}

inline std::uint32_t feistel(std::uint32_t r, std::uint64_t subkey, const DerivedTables& t) {
    std::uint32_t out = 0;
    for (int i = 0; i < 8; ++i) {
        std::uint32_t idx = (rotl32(r, (4 * i + 5) & 31) ^
                             static_cast<std::uint32_t>(subkey >> (42 - 6 * i))) &
                            0x3f;
        out |= t.sp[i][idx];
    }
    return out;
}

}  // namespace

namespace detail {

HalfBlock initial_permutation(std::uint64_t block) {
    const DerivedTables& t = tables();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= t.ip[i][(block >> (56 - 8 * i)) & 0xff];
    }
    return {static_cast<std::uint32_t>(v >> 32), static_cast<std::uint32_t>(v)};
}

std::uint64_t final_permutation(HalfBlock half) {
    const DerivedTables& t = tables();
    std::uint64_t in = (static_cast<std::uint64_t>(half.left) << 32) | half.right;
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= t.fp[i][(in >> (56 - 8 * i)) & 0xff];
    }
    return v;
}

HalfBlock run_rounds(HalfBlock in, const DesSubkeys& subkeys, bool decrypt,
                     FeistelTrace* trace) {
    const DerivedTables& t = tables();
    std::uint32_t l = in.left;
    std::uint32_t r = in.right;
    for (int i = 0; i < kRounds; ++i) {
        std::uint64_t k = subkeys.round_keys[static_cast<std::size_t>(decrypt ? kRounds - 1 - i : i)];
        std::uint32_t next = l ^ feistel(r, k, t);
        l = r;
        r = next;
    }
    if (trace) trace->rounds_executed += kRounds;
    // Final swap folded into the return order.
    return {r, l};
}

}  // namespace detail

DesSubkeys des_key_schedule(std::uint64_t key) {
    std::uint64_t cd = 0;
    for (int o = 0; o < 56; ++o) {
        if ((key >> (64 - kPc1[o])) & 1) cd |= 1ull << (55 - o);
    }
    std::uint32_t c = static_cast<std::uint32_t>(cd >> 28);
    std::uint32_t d = static_cast<std::uint32_t>(cd & 0x0fffffff);

    DesSubkeys out;
    for (int round = 0; round < kRounds; ++round) {
        c = rot28(c, kShifts[round]);
        d = rot28(d, kShifts[round]);
        std::uint64_t merged = (static_cast<std::uint64_t>(c) << 28) | d;
        std::uint64_t k = 0;
        for (int o = 0; o < 48; ++o) {
            if ((merged >> (56 - kPc2[o])) & 1) k |= 1ull << (47 - o);
        }
        out.round_keys[static_cast<std::size_t>(round)] = k;
    }
    return out;
}

std::uint64_t des_encrypt_block(std::uint64_t block, const DesSubkeys& subkeys,
                                FeistelTrace* trace) {
    return detail::final_permutation(
        detail::run_rounds(detail::initial_permutation(block), subkeys, false, trace));
}

std::uint64_t des_decrypt_block(std::uint64_t block, const DesSubkeys& subkeys,
                                FeistelTrace* trace) {
    return detail::final_permutation(
        detail::run_rounds(detail::initial_permutation(block), subkeys, true, trace));
}

std::uint64_t tdes_encrypt_block(std::uint64_t block, const TdesKeyBundle& bundle,
                                 FeistelTrace* trace) {
    DesSubkeys ks1 = des_key_schedule(bundle.k1);
    DesSubkeys ks2 = des_key_schedule(bundle.k2);
    DesSubkeys ks3 = des_key_schedule(bundle.k3);
    // FP of one stage cancels IP of the next, so the three stages chain on
    // the permuted halves directly.
    detail::HalfBlock h = detail::initial_permutation(block);
    h = detail::run_rounds(h, ks1, false, trace);
    h = detail::run_rounds(h, ks2, true, trace);
    h = detail::run_rounds(h, ks3, false, trace);
    return detail::final_permutation(h);
}

std::uint64_t tdes_decrypt_block(std::uint64_t block, const TdesKeyBundle& bundle,
                                 FeistelTrace* trace) {
    DesSubkeys ks1 = des_key_schedule(bundle.k1);
    DesSubkeys ks2 = des_key_schedule(bundle.k2);
    DesSubkeys ks3 = des_key_schedule(bundle.k3);
    detail::HalfBlock h = detail::initial_permutation(block);
    h = detail::run_rounds(h, ks3, true, trace);
    h = detail::run_rounds(h, ks2, false, trace);
    h = detail::run_rounds(h, ks1, true, trace);
    return detail::final_permutation(h);
}

}  // namespace medcrypt::des
