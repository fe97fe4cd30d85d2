#pragma once

// Small in-process assembler for building test and benchmark programs
// straight through the isa encoder: label/fixup support for branches and
// jumps, and a li() helper that materializes arbitrary 64-bit constants.

#include <vector>

#include "udec/common.hpp"
#include "udec/isa.hpp"

namespace udec::builder {

class ProgramBuilder {
  public:
    using Label = size_t;

    explicit ProgramBuilder(u64 base = 0x80000000ull) : base_(base) {}

    u64 base() const { return base_; }
    u64 here() const { return base_ + words_.size() * 4; }
    size_t size_words() const { return words_.size(); }

    Label new_label() {
        labels_.push_back(kUnbound);
        return labels_.size() - 1;
    }
    void bind(Label l) { labels_[l] = here(); }
    Label bind_here() {
        Label l = new_label();
        bind(l);
        return l;
    }

    void raw(u32 word) { words_.push_back(word); }
    void emit(const isa::Instr& in) { words_.push_back(isa::encode(in)); }

    // --- plain instruction helpers ---
    void op3(isa::Kind k, u8 rd, u8 rs1, u8 rs2) { emit({k, rd, rs1, rs2, 0, 0}); }
    void opi(isa::Kind k, u8 rd, u8 rs1, i64 imm) { emit({k, rd, rs1, 0, imm, 0}); }

    void add(u8 rd, u8 rs1, u8 rs2) { op3(isa::Kind::ADD, rd, rs1, rs2); }
    void sub(u8 rd, u8 rs1, u8 rs2) { op3(isa::Kind::SUB, rd, rs1, rs2); }
    void xor_(u8 rd, u8 rs1, u8 rs2) { op3(isa::Kind::XOR, rd, rs1, rs2); }
    void or_(u8 rd, u8 rs1, u8 rs2) { op3(isa::Kind::OR, rd, rs1, rs2); }
    void and_(u8 rd, u8 rs1, u8 rs2) { op3(isa::Kind::AND, rd, rs1, rs2); }
    void sll(u8 rd, u8 rs1, u8 rs2) { op3(isa::Kind::SLL, rd, rs1, rs2); }
    void srl(u8 rd, u8 rs1, u8 rs2) { op3(isa::Kind::SRL, rd, rs1, rs2); }
    void slt(u8 rd, u8 rs1, u8 rs2) { op3(isa::Kind::SLT, rd, rs1, rs2); }
    void sltu(u8 rd, u8 rs1, u8 rs2) { op3(isa::Kind::SLTU, rd, rs1, rs2); }
    void addi(u8 rd, u8 rs1, i64 imm) { opi(isa::Kind::ADDI, rd, rs1, imm); }
    void xori(u8 rd, u8 rs1, i64 imm) { opi(isa::Kind::XORI, rd, rs1, imm); }
    void ori(u8 rd, u8 rs1, i64 imm) { opi(isa::Kind::ORI, rd, rs1, imm); }
    void andi(u8 rd, u8 rs1, i64 imm) { opi(isa::Kind::ANDI, rd, rs1, imm); }
    void slli(u8 rd, u8 rs1, unsigned sh) { opi(isa::Kind::SLLI, rd, rs1, sh); }
    void srli(u8 rd, u8 rs1, unsigned sh) { opi(isa::Kind::SRLI, rd, rs1, sh); }
    void srai(u8 rd, u8 rs1, unsigned sh) { opi(isa::Kind::SRAI, rd, rs1, sh); }
    void lui(u8 rd, i64 imm) { emit({isa::Kind::LUI, rd, 0, 0, imm, 0}); }
    void ld(u8 rd, u8 rs1, i64 off) { opi(isa::Kind::LD, rd, rs1, off); }
    void lw(u8 rd, u8 rs1, i64 off) { opi(isa::Kind::LW, rd, rs1, off); }
    void lbu(u8 rd, u8 rs1, i64 off) { opi(isa::Kind::LBU, rd, rs1, off); }
    void sd(u8 rs2, u8 rs1, i64 off) { emit({isa::Kind::SD, 0, rs1, rs2, off, 0}); }
    void sw(u8 rs2, u8 rs1, i64 off) { emit({isa::Kind::SW, 0, rs1, rs2, off, 0}); }
    void sb(u8 rs2, u8 rs1, i64 off) { emit({isa::Kind::SB, 0, rs1, rs2, off, 0}); }
    void nop() { addi(0, 0, 0); }
    void mv(u8 rd, u8 rs) { addi(rd, rs, 0); }
    void ebreak() { emit({isa::Kind::EBREAK, 0, 0, 0, 0, 0}); }
    void ecall() { emit({isa::Kind::ECALL, 0, 0, 0, 0, 0}); }
    void macro(u8 idx, u8 rd, u8 rs1, u8 rs2) {
        words_.push_back(isa::encode(isa::MacroInstr{idx, rd, rs1, rs2, 0}));
    }

    // --- control flow against labels ---
    void branch(isa::Kind k, u8 rs1, u8 rs2, Label target) {
        fixups_.push_back({words_.size(), target, FixupKind::Branch});
        emit({k, 0, rs1, rs2, 0, 0});
    }
    void beq(u8 a, u8 b, Label t) { branch(isa::Kind::BEQ, a, b, t); }
    void bne(u8 a, u8 b, Label t) { branch(isa::Kind::BNE, a, b, t); }
    void blt(u8 a, u8 b, Label t) { branch(isa::Kind::BLT, a, b, t); }
    void bge(u8 a, u8 b, Label t) { branch(isa::Kind::BGE, a, b, t); }
    void bltu(u8 a, u8 b, Label t) { branch(isa::Kind::BLTU, a, b, t); }
    void bgeu(u8 a, u8 b, Label t) { branch(isa::Kind::BGEU, a, b, t); }
    void jal(u8 rd, Label t) {
        fixups_.push_back({words_.size(), t, FixupKind::Jal});
        emit({isa::Kind::JAL, rd, 0, 0, 0, 0});
    }
    void jalr(u8 rd, u8 rs1, i64 off = 0) { opi(isa::Kind::JALR, rd, rs1, off); }
    void ret() { jalr(0, 1, 0); }

    // Materializes an arbitrary 64-bit constant.
    void li(u8 rd, u64 value) {
        const i64 sv = static_cast<i64>(value);
        if (sv >= -2048 && sv <= 2047) {
            addi(rd, 0, sv);
            return;
        }
        if (sv == static_cast<i64>(sext(value & 0xFFFFFFFFull, 32))) {
            // 32-bit signed: lui + addiw.
            const i64 lo = static_cast<i64>(sext(value & 0xFFF, 12));
            const u64 hi = (value - static_cast<u64>(lo)) & 0xFFFFF000ull;
            lui(rd, static_cast<i64>(sext(hi, 32)));
            if (lo != 0) opi(isa::Kind::ADDIW, rd, rd, lo);
            return;
        }
        // Recursive: materialize the upper part, shift, add the low chunk.
        const i64 lo = static_cast<i64>(sext(value & 0xFFF, 12));
        li(rd, (value - static_cast<u64>(lo)) >> 12);
        slli(rd, rd, 12);
        if (lo != 0) addi(rd, rd, lo);
    }

    // Resolves fixups and returns the flat image bytes.
    std::vector<u8> build() {
        for (const Fixup& f : fixups_) {
            const u64 target = labels_[f.label];
            if (target == kUnbound) throw RangeError("unbound label in program");
            const u64 pc = base_ + f.index * 4;
            const i64 off = static_cast<i64>(target) - static_cast<i64>(pc);
            isa::Decoded d = isa::decode(words_[f.index]);
            isa::Instr in = std::get<isa::Instr>(d);
            in.imm = off;
            words_[f.index] = isa::encode(in);
        }
        fixups_.clear();
        std::vector<u8> out;
        out.reserve(words_.size() * 4);
        for (u32 w : words_) {
            out.push_back(u8(w & 0xFF));
            out.push_back(u8((w >> 8) & 0xFF));
            out.push_back(u8((w >> 16) & 0xFF));
            out.push_back(u8((w >> 24) & 0xFF));
        }
        return out;
    }

  private:
    enum class FixupKind { Branch, Jal };
    struct Fixup {
        size_t index;
        Label label;
        FixupKind kind;
    };
    static constexpr u64 kUnbound = ~u64(0);

    u64 base_;
    std::vector<u32> words_;
    std::vector<u64> labels_;
    std::vector<Fixup> fixups_;
};

}  // namespace udec::builder
