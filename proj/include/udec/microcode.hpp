#pragma once

// Bundled microcode: the byte-rotate macro and the AES S-box affine transform
// (s = b ^ rotl8(b,1) ^ rotl8(b,2) ^ rotl8(b,3) ^ rotl8(b,4) ^ 0x63) broken
// down into 18 micro-instructions. Inputs must be clean bytes; high bits of
// rs1 would leak through the cross shifts.
//
// The same sources ship as microcode/rotl8.uasm and microcode/sbox.uasm for
// the CLI; a test pins the copies together.

#include "udec/uasm.hpp"
#include "udec/ucode.hpp"

namespace udec::microcode {

constexpr unsigned kRotl8Idx = 0;
constexpr unsigned kSboxIdx = 1;

inline const char* rotl8_source() {
    return R"(# rotate the low byte of rs1 left by one bit, result in rd
.rom p=1 n=32

.macro 0 rotl8
    slli t0, rs1, 1
    srli t1, rs1, 7
    or t0, t0, t1
    andi rd, t0, 255
)";
}

inline const char* sbox_source() {
    return R"(# AES S-box affine transform: rd = rs1 ^ rotl8(rs1,1) ^ rotl8(rs1,2)
#                                   ^ rotl8(rs1,3) ^ rotl8(rs1,4) ^ 0x63
.rom p=2 n=32

.macro 0 rotl8
    slli t0, rs1, 1
    srli t1, rs1, 7
    or t0, t0, t1
    andi rd, t0, 255

.macro 1 sbox_affine
    slli t0, rs1, 1
    srli t1, rs1, 7
    or t0, t0, t1
    slli t1, rs1, 2
    srli t2, rs1, 6
    or t1, t1, t2
    slli t2, rs1, 3
    srli t3, rs1, 5
    or t2, t2, t3
    slli t3, rs1, 4
    srli t4, rs1, 4
    or t3, t3, t4
    xor t0, t0, t1
    xor t0, t0, t2
    xor t0, t0, t3
    xor t0, t0, rs1
    xori t0, t0, 0x63
    andi rd, t0, 255
)";
}

inline ucode::RomImage rotl8_rom() { return ucode::assemble(rotl8_source()); }
inline ucode::RomImage sbox_rom() { return ucode::assemble(sbox_source()); }

}  // namespace udec::microcode
