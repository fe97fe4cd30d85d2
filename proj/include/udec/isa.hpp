#pragma once

// RV64I subset codec: bit-exact decode/encode plus the custom macro-instruction
// format that triggers the micro-decoder (custom-0 major opcode, funct3=0,
// idx in funct7).

#include <string>
#include <variant>

#include "udec/common.hpp"

namespace udec::isa {

enum class Kind : u8 {
    LUI, AUIPC, JAL, JALR,
    BEQ, BNE, BLT, BGE, BLTU, BGEU,
    LB, LH, LW, LD, LBU, LHU, LWU,
    SB, SH, SW, SD,
    ADDI, SLTI, SLTIU, XORI, ORI, ANDI, SLLI, SRLI, SRAI,
    ADD, SUB, SLL, SLT, SLTU, XOR, SRL, SRA, OR, AND,
    ADDIW, SLLIW, SRLIW, SRAIW,
    ADDW, SUBW, SLLW, SRLW, SRAW,
    FENCE, ECALL, EBREAK,
    CSRRS,  // read-only form: rs1 must be x0, csr in imm
};

constexpr u32 kCustomMajor = 0b0001011;  // custom-0, reserved for vendor extensions
constexpr unsigned kMaxMacroIdx = 127;   // idx lives in funct7

constexpr u16 kCsrCycle = 0xC00;
constexpr u16 kCsrInstret = 0xC02;

struct Instr {
    Kind kind{Kind::ADDI};
    u8 rd = 0, rs1 = 0, rs2 = 0;
    i64 imm = 0;   // sign-extended; csr number for CSRRS; shamt for shifts
    u32 raw = 0;   // original word when produced by decode

    bool operator==(const Instr& o) const {
        return kind == o.kind && rd == o.rd && rs1 == o.rs1 && rs2 == o.rs2 && imm == o.imm;
    }
};

struct MacroInstr {
    u8 idx = 0;
    u8 rd = 0, rs1 = 0, rs2 = 0;
    u32 raw = 0;

    bool operator==(const MacroInstr& o) const {
        return idx == o.idx && rd == o.rd && rs1 == o.rs1 && rs2 == o.rs2;
    }
};

using Decoded = std::variant<Instr, MacroInstr>;

namespace detail {

inline Instr make(Kind k, u8 rd, u8 rs1, u8 rs2, i64 imm, u32 raw) {
    return Instr{k, rd, rs1, rs2, imm, raw};
}

inline i64 imm_i(u32 w) { return static_cast<i64>(sext(bits(w, 31, 20), 12)); }
inline i64 imm_s(u32 w) {
    return static_cast<i64>(sext((bits(w, 31, 25) << 5) | bits(w, 11, 7), 12));
}
inline i64 imm_b(u32 w) {
    u32 v = (bits(w, 31, 31) << 12) | (bits(w, 7, 7) << 11) | (bits(w, 30, 25) << 5) |
            (bits(w, 11, 8) << 1);
    return static_cast<i64>(sext(v, 13));
}
inline i64 imm_u(u32 w) { return static_cast<i64>(sext(w & 0xFFFFF000u, 32)); }
inline i64 imm_j(u32 w) {
    u32 v = (bits(w, 31, 31) << 20) | (bits(w, 19, 12) << 12) | (bits(w, 20, 20) << 11) |
            (bits(w, 30, 21) << 1);
    return static_cast<i64>(sext(v, 21));
}

}  // namespace detail

// Decodes a 32-bit word. Words with the custom-0 major opcode and funct3=0
// decode as MacroInstr; every other supported encoding decodes as Instr.
// Throws IllegalInstruction for anything else.
inline Decoded decode(u32 w, u64 pc = 0) {
    using detail::make;
    const u32 opcode = bits(w, 6, 0);
    const u8 rd = static_cast<u8>(bits(w, 11, 7));
    const u8 rs1 = static_cast<u8>(bits(w, 19, 15));
    const u8 rs2 = static_cast<u8>(bits(w, 24, 20));
    const u32 f3 = bits(w, 14, 12);
    const u32 f7 = bits(w, 31, 25);

    switch (opcode) {
        case kCustomMajor:
            if (f3 != 0) break;
            return MacroInstr{static_cast<u8>(f7), rd, rs1, rs2, w};
        case 0b0110111: return make(Kind::LUI, rd, 0, 0, detail::imm_u(w), w);
        case 0b0010111: return make(Kind::AUIPC, rd, 0, 0, detail::imm_u(w), w);
        case 0b1101111: return make(Kind::JAL, rd, 0, 0, detail::imm_j(w), w);
        case 0b1100111:
            if (f3 != 0) break;
            return make(Kind::JALR, rd, rs1, 0, detail::imm_i(w), w);
        case 0b1100011: {
            Kind k;
            switch (f3) {
                case 0b000: k = Kind::BEQ; break;
                case 0b001: k = Kind::BNE; break;
                case 0b100: k = Kind::BLT; break;
                case 0b101: k = Kind::BGE; break;
                case 0b110: k = Kind::BLTU; break;
                case 0b111: k = Kind::BGEU; break;
                default: goto illegal;
            }
            return make(k, 0, rs1, rs2, detail::imm_b(w), w);
        }
        case 0b0000011: {
            Kind k;
            switch (f3) {
                case 0b000: k = Kind::LB; break;
                case 0b001: k = Kind::LH; break;
                case 0b010: k = Kind::LW; break;
                case 0b011: k = Kind::LD; break;
                case 0b100: k = Kind::LBU; break;
                case 0b101: k = Kind::LHU; break;
                case 0b110: k = Kind::LWU; break;
                default: goto illegal;
            }
            return make(k, rd, rs1, 0, detail::imm_i(w), w);
        }
        case 0b0100011: {
            Kind k;
            switch (f3) {
                case 0b000: k = Kind::SB; break;
                case 0b001: k = Kind::SH; break;
                case 0b010: k = Kind::SW; break;
                case 0b011: k = Kind::SD; break;
                default: goto illegal;
            }
            return make(k, 0, rs1, rs2, detail::imm_s(w), w);
        }
        case 0b0010011: {
            switch (f3) {
                case 0b000: return make(Kind::ADDI, rd, rs1, 0, detail::imm_i(w), w);
                case 0b010: return make(Kind::SLTI, rd, rs1, 0, detail::imm_i(w), w);
                case 0b011: return make(Kind::SLTIU, rd, rs1, 0, detail::imm_i(w), w);
                case 0b100: return make(Kind::XORI, rd, rs1, 0, detail::imm_i(w), w);
                case 0b110: return make(Kind::ORI, rd, rs1, 0, detail::imm_i(w), w);
                case 0b111: return make(Kind::ANDI, rd, rs1, 0, detail::imm_i(w), w);
                case 0b001:
                    if (bits(w, 31, 26) != 0) break;
                    return make(Kind::SLLI, rd, rs1, 0, bits(w, 25, 20), w);
                case 0b101:
                    if (bits(w, 31, 26) == 0b000000)
                        return make(Kind::SRLI, rd, rs1, 0, bits(w, 25, 20), w);
                    if (bits(w, 31, 26) == 0b010000)
                        return make(Kind::SRAI, rd, rs1, 0, bits(w, 25, 20), w);
                    break;
                default: break;
            }
            break;
        }
        case 0b0110011: {
            Kind k;
            if (f7 == 0) {
                switch (f3) {
                    case 0b000: k = Kind::ADD; break;
                    case 0b001: k = Kind::SLL; break;
                    case 0b010: k = Kind::SLT; break;
                    case 0b011: k = Kind::SLTU; break;
                    case 0b100: k = Kind::XOR; break;
                    case 0b101: k = Kind::SRL; break;
                    case 0b110: k = Kind::OR; break;
                    case 0b111: k = Kind::AND; break;
                    default: goto illegal;
                }
            } else if (f7 == 0b0100000) {
                if (f3 == 0b000) k = Kind::SUB;
                else if (f3 == 0b101) k = Kind::SRA;
                else goto illegal;
            } else {
                goto illegal;
            }
            return make(k, rd, rs1, rs2, 0, w);
        }
        case 0b0011011: {
            switch (f3) {
                case 0b000: return make(Kind::ADDIW, rd, rs1, 0, detail::imm_i(w), w);
                case 0b001:
                    if (f7 != 0) break;
                    return make(Kind::SLLIW, rd, rs1, 0, bits(w, 24, 20), w);
                case 0b101:
                    if (f7 == 0b0000000)
                        return make(Kind::SRLIW, rd, rs1, 0, bits(w, 24, 20), w);
                    if (f7 == 0b0100000)
                        return make(Kind::SRAIW, rd, rs1, 0, bits(w, 24, 20), w);
                    break;
                default: break;
            }
            break;
        }
        case 0b0111011: {
            Kind k;
            if (f7 == 0) {
                switch (f3) {
                    case 0b000: k = Kind::ADDW; break;
                    case 0b001: k = Kind::SLLW; break;
                    case 0b101: k = Kind::SRLW; break;
                    default: goto illegal;
                }
            } else if (f7 == 0b0100000) {
                if (f3 == 0b000) k = Kind::SUBW;
                else if (f3 == 0b101) k = Kind::SRAW;
                else goto illegal;
            } else {
                goto illegal;
            }
            return make(k, rd, rs1, rs2, 0, w);
        }
        case 0b0001111:
            if (f3 != 0) break;
            // Executes as NOP; keep the fm/pred/succ bits in imm so re-encoding
            // reproduces the original word.
            return make(Kind::FENCE, rd, rs1, 0, detail::imm_i(w), w);
        case 0b1110011: {
            if (w == 0x00000073u) return make(Kind::ECALL, 0, 0, 0, 0, w);
            if (w == 0x00100073u) return make(Kind::EBREAK, 0, 0, 0, 0, w);
            if (f3 == 0b010 && rs1 == 0) {
                const u32 csr = bits(w, 31, 20);
                if (csr == kCsrCycle || csr == kCsrInstret)
                    return make(Kind::CSRRS, rd, 0, 0, static_cast<i64>(csr), w);
            }
            break;
        }
        default: break;
    }
illegal:
    throw IllegalInstruction(w, pc);
}

namespace detail {

inline void check_reg(unsigned r, const char* name) {
    if (r >= 32) throw RangeError(std::string(name) + " register index " + std::to_string(r) + " >= 32");
}
inline void check_simm(i64 v, unsigned bitcount, const char* what) {
    const i64 lo = -(i64(1) << (bitcount - 1));
    const i64 hi = (i64(1) << (bitcount - 1)) - 1;
    if (v < lo || v > hi)
        throw RangeError(std::string(what) + " immediate " + std::to_string(v) + " out of range");
}

inline u32 r_type(u32 f7, u8 rs2, u8 rs1, u32 f3, u8 rd, u32 op) {
    return (f7 << 25) | (u32(rs2) << 20) | (u32(rs1) << 15) | (f3 << 12) | (u32(rd) << 7) | op;
}
inline u32 i_type(i64 imm, u8 rs1, u32 f3, u8 rd, u32 op, const char* what) {
    check_simm(imm, 12, what);
    return (u32(imm & 0xFFF) << 20) | (u32(rs1) << 15) | (f3 << 12) | (u32(rd) << 7) | op;
}
inline u32 s_type(i64 imm, u8 rs2, u8 rs1, u32 f3, u32 op) {
    check_simm(imm, 12, "store");
    const u32 v = u32(imm & 0xFFF);
    return (bits(v, 11, 5) << 25) | (u32(rs2) << 20) | (u32(rs1) << 15) | (f3 << 12) |
           (bits(v, 4, 0) << 7) | op;
}
inline u32 b_type(i64 imm, u8 rs2, u8 rs1, u32 f3) {
    check_simm(imm, 13, "branch");
    if (imm & 1) throw RangeError("branch offset must be even");
    const u32 v = u32(imm & 0x1FFF);
    return (bits(v, 12, 12) << 31) | (bits(v, 10, 5) << 25) | (u32(rs2) << 20) |
           (u32(rs1) << 15) | (f3 << 12) | (bits(v, 4, 1) << 8) | (bits(v, 11, 11) << 7) |
           0b1100011;
}
inline u32 u_type(i64 imm, u8 rd, u32 op) {
    if (imm != static_cast<i64>(sext(u64(imm) & 0xFFFFF000u, 32)))
        throw RangeError("upper immediate not a sign-extended 20-bit<<12 value");
    return (u32(imm) & 0xFFFFF000u) | (u32(rd) << 7) | op;
}
inline u32 j_type(i64 imm, u8 rd) {
    check_simm(imm, 21, "jump");
    if (imm & 1) throw RangeError("jump offset must be even");
    const u32 v = u32(imm & 0x1FFFFF);
    return (bits(v, 20, 20) << 31) | (bits(v, 10, 1) << 21) | (bits(v, 11, 11) << 20) |
           (bits(v, 19, 12) << 12) | (u32(rd) << 7) | 0b1101111;
}
// 6-bit shamt shifts carry funct6 in [31:26]; 5-bit (word) shifts carry funct7
// in [31:25]. `arith` selects the SRA/SRAI bit (bit 30).
inline u32 shamt_type(i64 sh, u8 rs1, u32 f3, u8 rd, bool arith, u32 op, unsigned width) {
    if (sh < 0 || sh >= (i64(1) << width))
        throw RangeError("shift amount " + std::to_string(sh) + " out of range");
    return (u32(arith) << 30) | (u32(sh) << 20) | (u32(rs1) << 15) | (f3 << 12) |
           (u32(rd) << 7) | op;
}

}  // namespace detail

inline u32 encode(const Instr& in) {
    using namespace detail;
    check_reg(in.rd, "rd");
    check_reg(in.rs1, "rs1");
    check_reg(in.rs2, "rs2");
    switch (in.kind) {
        case Kind::LUI: return u_type(in.imm, in.rd, 0b0110111);
        case Kind::AUIPC: return u_type(in.imm, in.rd, 0b0010111);
        case Kind::JAL: return j_type(in.imm, in.rd);
        case Kind::JALR: return i_type(in.imm, in.rs1, 0, in.rd, 0b1100111, "jalr");
        case Kind::BEQ: return b_type(in.imm, in.rs2, in.rs1, 0b000);
        case Kind::BNE: return b_type(in.imm, in.rs2, in.rs1, 0b001);
        case Kind::BLT: return b_type(in.imm, in.rs2, in.rs1, 0b100);
        case Kind::BGE: return b_type(in.imm, in.rs2, in.rs1, 0b101);
        case Kind::BLTU: return b_type(in.imm, in.rs2, in.rs1, 0b110);
        case Kind::BGEU: return b_type(in.imm, in.rs2, in.rs1, 0b111);
        case Kind::LB: return i_type(in.imm, in.rs1, 0b000, in.rd, 0b0000011, "load");
        case Kind::LH: return i_type(in.imm, in.rs1, 0b001, in.rd, 0b0000011, "load");
        case Kind::LW: return i_type(in.imm, in.rs1, 0b010, in.rd, 0b0000011, "load");
        case Kind::LD: return i_type(in.imm, in.rs1, 0b011, in.rd, 0b0000011, "load");
        case Kind::LBU: return i_type(in.imm, in.rs1, 0b100, in.rd, 0b0000011, "load");
        case Kind::LHU: return i_type(in.imm, in.rs1, 0b101, in.rd, 0b0000011, "load");
        case Kind::LWU: return i_type(in.imm, in.rs1, 0b110, in.rd, 0b0000011, "load");
        case Kind::SB: return s_type(in.imm, in.rs2, in.rs1, 0b000, 0b0100011);
        case Kind::SH: return s_type(in.imm, in.rs2, in.rs1, 0b001, 0b0100011);
        case Kind::SW: return s_type(in.imm, in.rs2, in.rs1, 0b010, 0b0100011);
        case Kind::SD: return s_type(in.imm, in.rs2, in.rs1, 0b011, 0b0100011);
        case Kind::ADDI: return i_type(in.imm, in.rs1, 0b000, in.rd, 0b0010011, "addi");
        case Kind::SLTI: return i_type(in.imm, in.rs1, 0b010, in.rd, 0b0010011, "slti");
        case Kind::SLTIU: return i_type(in.imm, in.rs1, 0b011, in.rd, 0b0010011, "sltiu");
        case Kind::XORI: return i_type(in.imm, in.rs1, 0b100, in.rd, 0b0010011, "xori");
        case Kind::ORI: return i_type(in.imm, in.rs1, 0b110, in.rd, 0b0010011, "ori");
        case Kind::ANDI: return i_type(in.imm, in.rs1, 0b111, in.rd, 0b0010011, "andi");
        case Kind::SLLI: return shamt_type(in.imm, in.rs1, 0b001, in.rd, false, 0b0010011, 6);
        case Kind::SRLI: return shamt_type(in.imm, in.rs1, 0b101, in.rd, false, 0b0010011, 6);
        case Kind::SRAI: return shamt_type(in.imm, in.rs1, 0b101, in.rd, true, 0b0010011, 6);
        case Kind::ADD: return r_type(0, in.rs2, in.rs1, 0b000, in.rd, 0b0110011);
        case Kind::SUB: return r_type(0b0100000, in.rs2, in.rs1, 0b000, in.rd, 0b0110011);
        case Kind::SLL: return r_type(0, in.rs2, in.rs1, 0b001, in.rd, 0b0110011);
        case Kind::SLT: return r_type(0, in.rs2, in.rs1, 0b010, in.rd, 0b0110011);
        case Kind::SLTU: return r_type(0, in.rs2, in.rs1, 0b011, in.rd, 0b0110011);
        case Kind::XOR: return r_type(0, in.rs2, in.rs1, 0b100, in.rd, 0b0110011);
        case Kind::SRL: return r_type(0, in.rs2, in.rs1, 0b101, in.rd, 0b0110011);
        case Kind::SRA: return r_type(0b0100000, in.rs2, in.rs1, 0b101, in.rd, 0b0110011);
        case Kind::OR: return r_type(0, in.rs2, in.rs1, 0b110, in.rd, 0b0110011);
        case Kind::AND: return r_type(0, in.rs2, in.rs1, 0b111, in.rd, 0b0110011);
        case Kind::ADDIW: return i_type(in.imm, in.rs1, 0b000, in.rd, 0b0011011, "addiw");
        case Kind::SLLIW: return shamt_type(in.imm, in.rs1, 0b001, in.rd, false, 0b0011011, 5);
        case Kind::SRLIW: return shamt_type(in.imm, in.rs1, 0b101, in.rd, false, 0b0011011, 5);
        case Kind::SRAIW: return shamt_type(in.imm, in.rs1, 0b101, in.rd, true, 0b0011011, 5);
        case Kind::ADDW: return r_type(0, in.rs2, in.rs1, 0b000, in.rd, 0b0111011);
        case Kind::SUBW: return r_type(0b0100000, in.rs2, in.rs1, 0b000, in.rd, 0b0111011);
        case Kind::SLLW: return r_type(0, in.rs2, in.rs1, 0b001, in.rd, 0b0111011);
        case Kind::SRLW: return r_type(0, in.rs2, in.rs1, 0b101, in.rd, 0b0111011);
        case Kind::SRAW: return r_type(0b0100000, in.rs2, in.rs1, 0b101, in.rd, 0b0111011);
        case Kind::FENCE: return i_type(in.imm, in.rs1, 0b000, in.rd, 0b0001111, "fence");
        case Kind::ECALL: return 0x00000073u;
        case Kind::EBREAK: return 0x00100073u;
        case Kind::CSRRS: {
            if (in.imm != kCsrCycle && in.imm != kCsrInstret)
                throw RangeError("unsupported csr " + std::to_string(in.imm));
            return (u32(in.imm) << 20) | (0b010u << 12) | (u32(in.rd) << 7) | 0b1110011;
        }
    }
    throw RangeError("unencodable instruction kind");
}

inline u32 encode(const MacroInstr& m) {
    if (m.idx > kMaxMacroIdx) throw RangeError("macro idx " + std::to_string(m.idx) + " >= 128");
    detail::check_reg(m.rd, "rd");
    detail::check_reg(m.rs1, "rs1");
    detail::check_reg(m.rs2, "rs2");
    return detail::r_type(m.idx, m.rs2, m.rs1, 0, m.rd, kCustomMajor);
}

inline u32 encode(const Decoded& d) {
    return std::holds_alternative<Instr>(d) ? encode(std::get<Instr>(d))
                                            : encode(std::get<MacroInstr>(d));
}

inline const char* mnemonic(Kind k) {
    switch (k) {
        case Kind::LUI: return "lui";
        case Kind::AUIPC: return "auipc";
        case Kind::JAL: return "jal";
        case Kind::JALR: return "jalr";
        case Kind::BEQ: return "beq";
        case Kind::BNE: return "bne";
        case Kind::BLT: return "blt";
        case Kind::BGE: return "bge";
        case Kind::BLTU: return "bltu";
        case Kind::BGEU: return "bgeu";
        case Kind::LB: return "lb";
        case Kind::LH: return "lh";
        case Kind::LW: return "lw";
        case Kind::LD: return "ld";
        case Kind::LBU: return "lbu";
        case Kind::LHU: return "lhu";
        case Kind::LWU: return "lwu";
        case Kind::SB: return "sb";
        case Kind::SH: return "sh";
        case Kind::SW: return "sw";
        case Kind::SD: return "sd";
        case Kind::ADDI: return "addi";
        case Kind::SLTI: return "slti";
        case Kind::SLTIU: return "sltiu";
        case Kind::XORI: return "xori";
        case Kind::ORI: return "ori";
        case Kind::ANDI: return "andi";
        case Kind::SLLI: return "slli";
        case Kind::SRLI: return "srli";
        case Kind::SRAI: return "srai";
        case Kind::ADD: return "add";
        case Kind::SUB: return "sub";
        case Kind::SLL: return "sll";
        case Kind::SLT: return "slt";
        case Kind::SLTU: return "sltu";
        case Kind::XOR: return "xor";
        case Kind::SRL: return "srl";
        case Kind::SRA: return "sra";
        case Kind::OR: return "or";
        case Kind::AND: return "and";
        case Kind::ADDIW: return "addiw";
        case Kind::SLLIW: return "slliw";
        case Kind::SRLIW: return "srliw";
        case Kind::SRAIW: return "sraiw";
        case Kind::ADDW: return "addw";
        case Kind::SUBW: return "subw";
        case Kind::SLLW: return "sllw";
        case Kind::SRLW: return "srlw";
        case Kind::SRAW: return "sraw";
        case Kind::FENCE: return "fence";
        case Kind::ECALL: return "ecall";
        case Kind::EBREAK: return "ebreak";
        case Kind::CSRRS: return "csrrs";
    }
    return "?";
}

inline bool is_load(Kind k) { return k >= Kind::LB && k <= Kind::LWU; }
inline bool is_store(Kind k) { return k >= Kind::SB && k <= Kind::SD; }
inline bool is_branch(Kind k) { return k >= Kind::BEQ && k <= Kind::BGEU; }

inline std::string reg_name(unsigned r) { return "x" + std::to_string(r); }

inline std::string disassemble(const Instr& in) {
    const std::string m = mnemonic(in.kind);
    const std::string rd = reg_name(in.rd), rs1 = reg_name(in.rs1), rs2 = reg_name(in.rs2);
    switch (in.kind) {
        case Kind::LUI:
        case Kind::AUIPC:
            return m + " " + rd + ", 0x" + to_hex((u64(in.imm) >> 12) & 0xFFFFF, 5);
        case Kind::JAL: return m + " " + rd + ", " + std::to_string(in.imm);
        case Kind::JALR: return m + " " + rd + ", " + std::to_string(in.imm) + "(" + rs1 + ")";
        case Kind::BEQ: case Kind::BNE: case Kind::BLT:
        case Kind::BGE: case Kind::BLTU: case Kind::BGEU:
            return m + " " + rs1 + ", " + rs2 + ", " + std::to_string(in.imm);
        case Kind::LB: case Kind::LH: case Kind::LW: case Kind::LD:
        case Kind::LBU: case Kind::LHU: case Kind::LWU:
            return m + " " + rd + ", " + std::to_string(in.imm) + "(" + rs1 + ")";
        case Kind::SB: case Kind::SH: case Kind::SW: case Kind::SD:
            return m + " " + rs2 + ", " + std::to_string(in.imm) + "(" + rs1 + ")";
        case Kind::FENCE: return m;
        case Kind::ECALL: case Kind::EBREAK: return m;
        case Kind::CSRRS:
            return m + " " + rd + ", " + (in.imm == kCsrCycle ? "cycle" : "instret") + ", x0";
        case Kind::ADD: case Kind::SUB: case Kind::SLL: case Kind::SLT: case Kind::SLTU:
        case Kind::XOR: case Kind::SRL: case Kind::SRA: case Kind::OR: case Kind::AND:
        case Kind::ADDW: case Kind::SUBW: case Kind::SLLW: case Kind::SRLW: case Kind::SRAW:
            return m + " " + rd + ", " + rs1 + ", " + rs2;
        default:
            return m + " " + rd + ", " + rs1 + ", " + std::to_string(in.imm);
    }
}

inline std::string disassemble(const MacroInstr& m) {
    return "macro." + std::to_string(m.idx) + " " + reg_name(m.rd) + ", " + reg_name(m.rs1) +
           ", " + reg_name(m.rs2);
}

inline std::string disassemble(const Decoded& d) {
    return std::holds_alternative<Instr>(d) ? disassemble(std::get<Instr>(d))
                                            : disassemble(std::get<MacroInstr>(d));
}

}  // namespace udec::isa
