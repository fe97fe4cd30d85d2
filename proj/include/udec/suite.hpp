#pragma once

// The bundled benchmark suite: hand-assembled programs generated through the
// instruction encoder. sbox-macro/sbox-inline are the paper-style pair (same
// work, micro-decoded vs inlined); the rest are macro-free workloads for the
// overhead and equivalence laws, plus deterministic random regression seeds.
//
// Layout conventions: flat binaries at the default base, data regions from
// base+1MiB up, loop bodies unrolled far enough that taken-branch flushes stay
// well under the overhead bound.

#include <cstdio>
#include <string>
#include <vector>

#include "udec/builder.hpp"
#include "udec/core.hpp"
#include "udec/generator.hpp"
#include "udec/isa.hpp"
#include "udec/microcode.hpp"
#include "udec/ucode.hpp"

namespace udec::suite {

struct Benchmark {
    std::string name;
    std::vector<u8> image;  // flat binary, entry at base
    bool uses_macros = false;
};

struct Suite {
    std::vector<Benchmark> benches;
    ucode::RomImage rom;  // required by the macro benchmarks
};

constexpr u64 kDataOff = 0x100000;  // data starts 1 MiB above the code

// --- inline expansion of a ROM sequence ------------------------------------------

struct InlineRegs {
    u8 rd, rs1, rs2;
    u8 temps[5];  // architectural stand-ins for t0..t4
};

inline isa::Kind micro_to_isa(u8 opcode) {
    using namespace ucode::op;
    using isa::Kind;
    switch (opcode) {
        case kAdd: return Kind::ADD;
        case kSub: return Kind::SUB;
        case kSll: return Kind::SLL;
        case kSlt: return Kind::SLT;
        case kSltu: return Kind::SLTU;
        case kXor: return Kind::XOR;
        case kSrl: return Kind::SRL;
        case kSra: return Kind::SRA;
        case kOr: return Kind::OR;
        case kAnd: return Kind::AND;
        case kAddi: return Kind::ADDI;
        case kSlli: return Kind::SLLI;
        case kSlti: return Kind::SLTI;
        case kSltiu: return Kind::SLTIU;
        case kXori: return Kind::XORI;
        case kSrli: return Kind::SRLI;
        case kSrai: return Kind::SRAI;
        case kOri: return Kind::ORI;
        case kAndi: return Kind::ANDI;
        case kLb: return Kind::LB;
        case kLh: return Kind::LH;
        case kLw: return Kind::LW;
        case kLd: return Kind::LD;
        case kLbu: return Kind::LBU;
        case kLhu: return Kind::LHU;
        case kLwu: return Kind::LWU;
        case kSb: return Kind::SB;
        case kSh: return Kind::SH;
        case kSw: return Kind::SW;
        default: return Kind::SD;
    }
}

// Emits a macro's ROM sequence as plain RV64I instructions, temps replaced by
// the given dead architectural registers. This is the exact hand-inlined
// equivalent the equivalence criteria compare against.
inline void emit_inlined_sequence(builder::ProgramBuilder& pb, const ucode::RomImage& rom,
                                  unsigned idx, const InlineRegs& map) {
    auto phys = [&](u8 slot_code) -> u8 {
        switch (slot_code) {
            case ucode::slot::kRd: return map.rd;
            case ucode::slot::kRs1: return map.rs1;
            case ucode::slot::kRs2: return map.rs2;
            default: return map.temps[slot_code - 3];
        }
    };
    const unsigned len = rom.sequence_length(idx);
    for (unsigned off = 0; off < len; ++off) {
        const ucode::MicroWord w = ucode::unpack(rom.word(idx, off));
        const i64 imm = w.uses_macro_imm() ? 0 : i64(w.imm);
        const isa::Kind k = micro_to_isa(w.opcode);
        if (ucode::is_alu_reg_op(w.opcode)) {
            pb.op3(k, phys(w.rd_slot), phys(w.rs1_slot), phys(w.rs2_slot));
        } else if (ucode::is_alu_imm_op(w.opcode) || ucode::is_load_op(w.opcode)) {
            pb.opi(k, phys(w.rd_slot), phys(w.rs1_slot), imm);
        } else {
            pb.emit({k, 0, phys(w.rs1_slot), phys(w.rs2_slot), imm, 0});
        }
    }
}

// --- the sbox pair -----------------------------------------------------------------

// Registers used by the sbox pair; zeroed in the shared epilogue so both
// versions halt with identical x0..x31.
namespace sbox_regs {
constexpr u8 kTable = 6;    // write pointer during generation
constexpr u8 kTableBase = 16;
constexpr u8 kAcc = 14;
constexpr u8 kAccPtr = 7;
constexpr u8 kB = 8;        // current input byte block base
constexpr u8 kCnt = 9;
constexpr u8 kIn = 11;
constexpr u8 kOut = 12;
constexpr u8 kTmp = 13;
constexpr u8 kRot = 15;
constexpr u8 kTemps[5] = {20, 21, 22, 23, 24};
}  // namespace sbox_regs

// Generates the 256-entry S-box table (32 entries per loop iteration, 8
// iterations), then runs a macro-free mixing phase over the table, storing a
// digest beside it. `use_macro` selects micro-decoded vs inlined generation.
inline std::vector<u8> build_sbox_program(bool use_macro, const ucode::RomImage& rom,
                                          unsigned mix_iterations = 150) {
    using namespace sbox_regs;
    builder::ProgramBuilder pb(core::kDefaultBase);
    const u64 table = core::kDefaultBase + kDataOff;
    const u64 digest = table + 0x1000;

    pb.li(kTable, table);
    pb.li(kTableBase, table);
    pb.li(kAccPtr, digest);
    pb.li(kB, 0);
    pb.li(kCnt, 8);

    // Table generation: 8 iterations x 32 unrolled entries.
    const auto gen_head = pb.bind_here();
    for (unsigned j = 0; j < 32; ++j) {
        pb.addi(kIn, kB, static_cast<i64>(j));
        if (use_macro) {
            pb.macro(microcode::kSboxIdx, kOut, kIn, 0);
        } else {
            emit_inlined_sequence(pb, rom, microcode::kSboxIdx,
                                  {kOut, kIn, 0, {kTemps[0], kTemps[1], kTemps[2], kTemps[3], kTemps[4]}});
        }
        pb.sb(kOut, kTable, static_cast<i64>(j));
    }
    pb.addi(kTable, kTable, 32);
    pb.addi(kB, kB, 32);
    pb.addi(kCnt, kCnt, -1);
    pb.bne(kCnt, 0, gen_head);

    // Mixing phase (identical in both versions): rotate-xor over table bytes.
    pb.li(kAcc, 0x243F6A8885A308D3ull);  // arbitrary nonzero seed
    pb.li(kCnt, mix_iterations);
    const auto mix_head = pb.bind_here();
    for (unsigned s = 0; s < 64; ++s) {
        const i64 off = static_cast<i64>((s * 37 + 11) & 255);
        pb.lbu(kTmp, kTableBase, off);
        pb.xor_(kAcc, kAcc, kTmp);
        pb.slli(kRot, kAcc, 13);
        pb.srli(kTmp, kAcc, 51);
        pb.or_(kAcc, kRot, kTmp);
    }
    pb.addi(kCnt, kCnt, -1);
    pb.bne(kCnt, 0, mix_head);
    pb.sd(kAcc, kAccPtr, 0);

    // Shared epilogue: clear every scratch register either version touched.
    for (u8 r : {kTable, kTableBase, kAcc, kAccPtr, kB, kCnt, kIn, kOut, kTmp, kRot,
                 kTemps[0], kTemps[1], kTemps[2], kTemps[3], kTemps[4]})
        pb.li(r, 0);
    pb.li(10, 0);  // clean exit code
    pb.ebreak();
    return pb.build();
}

// --- macro-free workloads ------------------------------------------------------------

// Table-driven xor/rotate rounds with data-dependent lookups.
inline std::vector<u8> build_aes_roundish() {
    builder::ProgramBuilder pb(core::kDefaultBase);
    const u64 table = core::kDefaultBase + kDataOff;
    pb.li(6, table);
    pb.li(11, 0x55);
    pb.li(9, 4);
    // Init: 4 iterations x 64 bytes of an additive byte pattern.
    const auto init_head = pb.bind_here();
    for (unsigned j = 0; j < 64; ++j) {
        pb.sb(11, 6, static_cast<i64>(j));
        pb.addi(11, 11, 7);
        pb.andi(11, 11, 255);
    }
    pb.addi(6, 6, 64);
    pb.addi(9, 9, -1);
    pb.bne(9, 0, init_head);

    pb.li(6, table);
    pb.li(14, 0x0123456789ABCDEFull);  // state
    pb.li(9, 100);
    const auto round_head = pb.bind_here();
    for (unsigned s = 0; s < 48; ++s) {
        pb.andi(13, 14, 255);
        pb.add(15, 6, 13);
        pb.lbu(13, 15, 0);
        pb.xor_(14, 14, 13);
        pb.slli(15, 14, 9);
        pb.srli(13, 14, 55);
        pb.or_(14, 15, 13);
    }
    pb.addi(9, 9, -1);
    pb.bne(9, 0, round_head);
    pb.sd(14, 6, 0x400);
    pb.li(10, 0);
    pb.ebreak();
    return pb.build();
}

inline std::vector<u8> build_memcpy() {
    builder::ProgramBuilder pb(core::kDefaultBase);
    const u64 src = core::kDefaultBase + kDataOff;
    const u64 dst = src + 0x8000;
    // Seed the source with a recognizable pattern.
    pb.li(5, src);
    pb.li(11, 0x1111111111111111ull);
    for (unsigned j = 0; j < 16; ++j) {
        pb.sd(11, 5, static_cast<i64>(8 * j));
        pb.add(11, 11, 11);
        pb.xori(11, 11, 0x2F);
    }
    // Copy 24 KiB, 96 dwords per iteration.
    pb.li(5, src);
    pb.li(6, dst);
    pb.li(9, 32);
    const auto head = pb.bind_here();
    for (unsigned j = 0; j < 96; ++j) {
        pb.ld(12, 5, static_cast<i64>(8 * j));
        pb.sd(12, 6, static_cast<i64>(8 * j));
    }
    pb.addi(5, 5, 768);
    pb.addi(6, 6, 768);
    pb.addi(9, 9, -1);
    pb.bne(9, 0, head);
    pb.li(10, 0);
    pb.ebreak();
    return pb.build();
}

// Dot product with 8-bit weights via branchless shift-add multiplies.
inline std::vector<u8> build_dot_product() {
    builder::ProgramBuilder pb(core::kDefaultBase);
    const u64 vec_a = core::kDefaultBase + kDataOff;
    const u64 vec_b = vec_a + 0x1000;
    pb.li(5, vec_a);
    pb.li(6, vec_b);
    pb.li(11, 0x9E3779B97F4A7C15ull);
    for (unsigned j = 0; j < 64; ++j) {  // a[j] 64-bit, b[j] one byte
        pb.sd(11, 5, static_cast<i64>(8 * j));
        pb.sb(11, 6, static_cast<i64>(j));
        pb.slli(12, 11, 13);
        pb.xor_(11, 11, 12);
        pb.srli(12, 11, 7);
        pb.xor_(11, 11, 12);
    }
    pb.li(14, 0);  // acc
    pb.li(9, 4);
    const auto head = pb.bind_here();
    for (unsigned e = 0; e < 16; ++e) {
        pb.ld(12, 5, static_cast<i64>(8 * e));   // a_e
        pb.lbu(13, 6, static_cast<i64>(e));      // b_e
        for (unsigned k = 0; k < 8; ++k) {
            pb.andi(20, 13, i64(1) << k);
            pb.sltu(21, 0, 20);
            pb.sub(21, 0, 21);       // all-ones mask when bit k set
            pb.slli(22, 12, k);
            pb.and_(22, 22, 21);
            pb.add(14, 14, 22);
        }
    }
    pb.addi(5, 5, 128);
    pb.addi(6, 6, 16);
    pb.addi(9, 9, -1);
    pb.bne(9, 0, head);
    pb.sd(14, 5, 0x800);
    pb.li(10, 0);
    pb.ebreak();
    return pb.build();
}

inline std::vector<u8> build_fibonacci() {
    builder::ProgramBuilder pb(core::kDefaultBase);
    pb.li(11, 0);  // fib(0)
    pb.li(12, 1);  // fib(1)
    pb.li(9, 4);
    const auto head = pb.bind_here();
    for (unsigned s = 0; s < 256; ++s) {  // 512 fib steps per iteration
        pb.add(11, 11, 12);
        pb.add(12, 12, 11);
    }
    pb.addi(9, 9, -1);
    pb.bne(9, 0, head);
    pb.li(5, core::kDefaultBase + kDataOff);
    pb.sd(11, 5, 0);  // fib(2048) mod 2^64
    pb.sd(12, 5, 8);
    pb.li(10, 0);
    pb.ebreak();
    return pb.build();
}

// Bubble-sort network over 32 dwords, branchless compare-exchange, pass loop
// rolled, exchanges unrolled.
inline std::vector<u8> build_sort_small() {
    builder::ProgramBuilder pb(core::kDefaultBase);
    const u64 buf = core::kDefaultBase + kDataOff;
    pb.li(5, buf);
    pb.li(11, 0xDEADBEEFCAFE1234ull);
    for (unsigned j = 0; j < 32; ++j) {
        pb.sd(11, 5, static_cast<i64>(8 * j));
        pb.slli(12, 11, 7);
        pb.xor_(11, 11, 12);
        pb.srli(12, 11, 9);
        pb.xor_(11, 11, 12);
    }
    pb.li(9, 31);  // passes
    const auto head = pb.bind_here();
    for (unsigned j = 0; j < 31; ++j) {
        const i64 off = static_cast<i64>(8 * j);
        pb.ld(12, 5, off);
        pb.ld(13, 5, off + 8);
        pb.slt(14, 13, 12);   // need swap? (signed compare)
        pb.sub(14, 0, 14);    // mask
        pb.xor_(15, 12, 13);
        pb.and_(15, 15, 14);
        pb.xor_(12, 12, 15);
        pb.xor_(13, 13, 15);
        pb.sd(12, 5, off);
        pb.sd(13, 5, off + 8);
    }
    pb.addi(9, 9, -1);
    pb.bne(9, 0, head);
    pb.li(10, 0);
    pb.ebreak();
    return pb.build();
}

inline Suite build_suite() {
    Suite s;
    s.rom = microcode::sbox_rom();
    s.benches.push_back({"sbox-macro", build_sbox_program(true, s.rom), true});
    s.benches.push_back({"sbox-inline", build_sbox_program(false, s.rom), false});
    s.benches.push_back({"aes-roundish", build_aes_roundish(), false});
    s.benches.push_back({"memcpy", build_memcpy(), false});
    s.benches.push_back({"dot-product", build_dot_product(), false});
    s.benches.push_back({"fibonacci", build_fibonacci(), false});
    s.benches.push_back({"sort-small", build_sort_small(), false});
    for (unsigned i = 0; i < 8; ++i) {
        gen::GenOptions opt;
        opt.seed = 0xC0FFEE00 + i;
        opt.blocks = 40;
        opt.loops = false;  // straight-line regression seeds
        opt.calls = false;
        opt.max_retired = 100'000;
        gen::Generated g = gen::random_program(opt);
        char name[16];
        std::snprintf(name, sizeof name, "rand-%02u", i);
        s.benches.push_back({name, std::move(g.image), false});
    }
    return s;
}

}  // namespace udec::suite
