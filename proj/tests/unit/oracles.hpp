#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <cstdint>

namespace test_oracles {

// Micro-word packing oracle: assembles the 32-bit word from a field table
// instead of hand-placed shifts.
struct MicroFields {
    unsigned fu, opcode, rd_slot, rs1_slot, rs2_slot;
    unsigned imm10;  // raw 10-bit pattern (two's complement)
    unsigned skip;
};

inline std::uint32_t pack_oracle(const MicroFields& f) {
    struct Field {
        unsigned lo, width, value;
    } fields[] = {
        {0, 4, f.fu},        {4, 8, f.opcode},   {12, 3, f.rs2_slot}, {15, 3, f.rs1_slot},
        {18, 3, f.rd_slot},  {21, 10, f.imm10},  {31, 1, f.skip},
    };
    std::uint32_t w = 0;
    for (const Field& fl : fields) w |= (fl.value & ((1u << fl.width) - 1u)) << fl.lo;
    return w;
}

// AES affine transform in its bit-matrix form (FIPS-197 style), independent
// of the rotate-compose route the microcode uses.
inline std::uint8_t affine_oracle(std::uint8_t b) {
    std::uint8_t s = 0;
    for (int i = 0; i < 8; ++i) {
        const int bit = ((b >> i) ^ (b >> ((i + 4) & 7)) ^ (b >> ((i + 5) & 7)) ^
                         (b >> ((i + 6) & 7)) ^ (b >> ((i + 7) & 7)) ^ (0x63 >> i)) &
                        1;
        s = static_cast<std::uint8_t>(s | (bit << i));
    }
    return s;
}

// GF(2^8) arithmetic for cross-checking the affine oracle against the
// standard AES S-box (sbox(x) = affine(inverse(x))).
inline std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
    std::uint16_t x = a, acc = 0;
    for (int i = 0; i < 8; ++i) {
        if (b & (1 << i)) acc ^= static_cast<std::uint16_t>(x << i);
    }
    for (int i = 15; i >= 8; --i) {
        if (acc & (1 << i)) acc = static_cast<std::uint16_t>(acc ^ (0x11B << (i - 8)));
    }
    return static_cast<std::uint8_t>(acc);
}

inline std::uint8_t gf_inverse(std::uint8_t a) {
    if (a == 0) return 0;
    for (unsigned b = 1; b < 256; ++b) {
        if (gf_mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
    }
    return 0;
}

}  // namespace test_oracles
