#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "udec/isa.hpp"

using namespace udec;
using namespace udec::isa;

namespace {

Instr expect_instr(u32 word) {
    Decoded d = decode(word);
    REQUIRE(std::holds_alternative<Instr>(d));
    return std::get<Instr>(d);
}

MacroInstr expect_macro(u32 word) {
    Decoded d = decode(word);
    REQUIRE(std::holds_alternative<MacroInstr>(d));
    return std::get<MacroInstr>(d);
}

// Independent R-type field packer for the macro format oracle.
u32 pack_rtype(u32 f7, u32 rs2, u32 rs1, u32 f3, u32 rd, u32 op) {
    return (f7 << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | op;
}

}  // namespace

TEST_CASE("decode canonical examples") {
    const Instr nop = expect_instr(0x00000013);
    CHECK(nop.kind == Kind::ADDI);
    CHECK(nop.rd == 0);
    CHECK(nop.rs1 == 0);
    CHECK(nop.imm == 0);

    const Instr add = expect_instr(0x003100B3);
    CHECK(add.kind == Kind::ADD);
    CHECK(add.rd == 1);
    CHECK(add.rs1 == 2);
    CHECK(add.rs2 == 3);
}

TEST_CASE("decode macro example against field-packing oracle") {
    // funct7=0x21 (idx 33), rs2=2, rs1=1, funct3=0, rd=10, custom-0
    const u32 word = pack_rtype(0x21, 2, 1, 0, 10, 0b0001011);
    CHECK(word == 0x4220850Bu);
    const MacroInstr m = expect_macro(word);
    CHECK(m.idx == 33);
    CHECK(m.rd == 10);
    CHECK(m.rs1 == 1);
    CHECK(m.rs2 == 2);
    CHECK(encode(m) == word);

    // Same register fields with funct7=2.
    const MacroInstr m2 = expect_macro(0x0420850B);
    CHECK(m2.idx == 2);
    CHECK(m2.rd == 10);
    CHECK(m2.rs1 == 1);
    CHECK(m2.rs2 == 2);
}

TEST_CASE("encode examples") {
    CHECK(encode(Instr{Kind::ADDI, 0, 0, 0, 0, 0}) == 0x00000013u);
    CHECK(encode(MacroInstr{0, 0, 0, 0, 0}) == 0x0000000Bu);
    CHECK(encode(Instr{Kind::ADD, 1, 2, 3, 0, 0}) == 0x003100B3u);
    CHECK(encode(Instr{Kind::EBREAK, 0, 0, 0, 0, 0}) == 0x00100073u);
    CHECK(encode(Instr{Kind::ECALL, 0, 0, 0, 0, 0}) == 0x00000073u);
}

TEST_CASE("encode range errors") {
    CHECK_THROWS_AS(encode(Instr{Kind::ADDI, 32, 0, 0, 0, 0}), RangeError);
    CHECK_THROWS_AS(encode(Instr{Kind::ADDI, 0, 0, 0, 5000, 0}), RangeError);
    CHECK_THROWS_AS(encode(Instr{Kind::BEQ, 0, 0, 0, 3, 0}), RangeError);  // odd offset
    CHECK_THROWS_AS(encode(Instr{Kind::SLLI, 1, 1, 0, 64, 0}), RangeError);
    CHECK_THROWS_AS(encode(Instr{Kind::SLLIW, 1, 1, 0, 32, 0}), RangeError);
    MacroInstr m;
    m.idx = 200;
    CHECK_THROWS_AS(encode(m), RangeError);
}

TEST_CASE("illegal encodings carry the offending word") {
    for (u32 w : {0x00000000u, 0xFFFFFFFFu, 0x0000007Fu}) {
        try {
            decode(w, 0x1000);
            FAIL("expected IllegalInstruction");
        } catch (const IllegalInstruction& e) {
            CHECK(e.word == w);
        }
    }
}

TEST_CASE("custom-0 words with nonzero funct3 are illegal, funct3=0 are macros") {
    std::mt19937 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const u32 f3 = rng() & 7;
        const u32 w = pack_rtype(rng() & 0x7F, rng() & 31, rng() & 31, f3, rng() & 31, 0b0001011);
        if (f3 == 0) {
            CHECK(std::holds_alternative<MacroInstr>(decode(w)));
        } else {
            CHECK_THROWS_AS(decode(w), IllegalInstruction);
        }
    }
}

namespace {

// Generates a random structurally-valid Instr for the round-trip property.
Instr random_instr(std::mt19937_64& rng) {
    static const Kind kinds[] = {
        Kind::LUI, Kind::AUIPC, Kind::JAL, Kind::JALR, Kind::BEQ, Kind::BNE, Kind::BLT,
        Kind::BGE, Kind::BLTU, Kind::BGEU, Kind::LB, Kind::LH, Kind::LW, Kind::LD,
        Kind::LBU, Kind::LHU, Kind::LWU, Kind::SB, Kind::SH, Kind::SW, Kind::SD,
        Kind::ADDI, Kind::SLTI, Kind::SLTIU, Kind::XORI, Kind::ORI, Kind::ANDI,
        Kind::SLLI, Kind::SRLI, Kind::SRAI, Kind::ADD, Kind::SUB, Kind::SLL, Kind::SLT,
        Kind::SLTU, Kind::XOR, Kind::SRL, Kind::SRA, Kind::OR, Kind::AND, Kind::ADDIW,
        Kind::SLLIW, Kind::SRLIW, Kind::SRAIW, Kind::ADDW, Kind::SUBW, Kind::SLLW,
        Kind::SRLW, Kind::SRAW, Kind::FENCE, Kind::ECALL, Kind::EBREAK, Kind::CSRRS,
    };
    Instr in;
    in.kind = kinds[rng() % std::size(kinds)];
    auto reg = [&]() { return static_cast<u8>(rng() & 31); };
    auto imm12 = [&]() { return static_cast<i64>(rng() % 4096) - 2048; };
    switch (in.kind) {
        case Kind::LUI:
        case Kind::AUIPC:
            in.rd = reg();
            in.imm = static_cast<i64>(sext((rng() & 0xFFFFF) << 12, 32));
            break;
        case Kind::JAL:
            in.rd = reg();
            in.imm = (static_cast<i64>(rng() % (1 << 20)) - (1 << 19)) * 2;
            break;
        case Kind::JALR:
            in.rd = reg();
            in.rs1 = reg();
            in.imm = imm12();
            break;
        case Kind::BEQ: case Kind::BNE: case Kind::BLT:
        case Kind::BGE: case Kind::BLTU: case Kind::BGEU:
            in.rs1 = reg();
            in.rs2 = reg();
            in.imm = (static_cast<i64>(rng() % (1 << 12)) - (1 << 11)) * 2;
            break;
        case Kind::LB: case Kind::LH: case Kind::LW: case Kind::LD:
        case Kind::LBU: case Kind::LHU: case Kind::LWU:
            in.rd = reg();
            in.rs1 = reg();
            in.imm = imm12();
            break;
        case Kind::SB: case Kind::SH: case Kind::SW: case Kind::SD:
            in.rs1 = reg();
            in.rs2 = reg();
            in.imm = imm12();
            break;
        case Kind::ADDI: case Kind::SLTI: case Kind::SLTIU: case Kind::XORI:
        case Kind::ORI: case Kind::ANDI: case Kind::ADDIW:
            in.rd = reg();
            in.rs1 = reg();
            in.imm = imm12();
            break;
        case Kind::SLLI: case Kind::SRLI: case Kind::SRAI:
            in.rd = reg();
            in.rs1 = reg();
            in.imm = static_cast<i64>(rng() & 63);
            break;
        case Kind::SLLIW: case Kind::SRLIW: case Kind::SRAIW:
            in.rd = reg();
            in.rs1 = reg();
            in.imm = static_cast<i64>(rng() & 31);
            break;
        case Kind::FENCE:
            in.rd = reg();
            in.rs1 = reg();
            in.imm = imm12();
            break;
        case Kind::ECALL:
        case Kind::EBREAK:
            break;
        case Kind::CSRRS:
            in.rd = reg();
            in.imm = (rng() & 1) ? kCsrCycle : kCsrInstret;
            break;
        default:  // three-register ALU forms
            in.rd = reg();
            in.rs1 = reg();
            in.rs2 = reg();
            break;
    }
    return in;
}

}  // namespace

TEST_CASE("decode(encode(x)) is identity over random legal instructions") {
    std::mt19937_64 rng(0xDECAFBAD);
    for (int i = 0; i < 20000; ++i) {
        const Instr in = random_instr(rng);
        const u32 w = encode(in);
        const Instr back = expect_instr(w);
        CHECK(back == in);
        CHECK(back.raw == w);
    }
    for (int i = 0; i < 2000; ++i) {
        MacroInstr m{static_cast<u8>(rng() & 127), static_cast<u8>(rng() & 31),
                     static_cast<u8>(rng() & 31), static_cast<u8>(rng() & 31), 0};
        CHECK(expect_macro(encode(m)) == m);
    }
}

TEST_CASE("encode(decode(x)) reproduces every word that decodes") {
    std::mt19937_64 rng(0xF00D);
    int decoded = 0;
    for (int i = 0; i < 200000; ++i) {
        const u32 w = static_cast<u32>(rng());
        try {
            Decoded d = decode(w);
            ++decoded;
            CHECK(encode(d) == w);
        } catch (const IllegalInstruction&) {
        }
    }
    CHECK(decoded > 100);  // the fuzz actually hit valid encodings
}

TEST_CASE("disassembly formats") {
    CHECK(disassemble(Instr{Kind::ADD, 1, 2, 3, 0, 0}) == "add x1, x2, x3");
    CHECK(disassemble(MacroInstr{5, 10, 11, 0, 0}) == "macro.5 x10, x11, x0");
    CHECK(disassemble(Instr{Kind::ADDI, 0, 0, 0, 0, 0}) == "addi x0, x0, 0");
    CHECK(disassemble(Instr{Kind::LD, 5, 2, 0, 8, 0}) == "ld x5, 8(x2)");
    CHECK(disassemble(Instr{Kind::SD, 0, 2, 3, 8, 0}) == "sd x3, 8(x2)");
    CHECK(disassemble(Instr{Kind::BEQ, 0, 1, 2, -8, 0}) == "beq x1, x2, -8");
    CHECK(disassemble(Instr{Kind::CSRRS, 5, 0, 0, kCsrCycle, 0}) == "csrrs x5, cycle, x0");
}

TEST_CASE("hand-checked reference encodings") {
    // Frozen from the RISC-V base layout, assembled by hand.
    CHECK(encode(Instr{Kind::ADDI, 1, 0, 0, 100, 0}) == 0x06400093u);
    CHECK(encode(Instr{Kind::SD, 0, 2, 3, 8, 0}) == 0x00313423u);
    CHECK(encode(Instr{Kind::BEQ, 0, 1, 2, -8, 0}) == 0xFE208CE3u);
    CHECK(encode(Instr{Kind::JAL, 0, 0, 0, -16, 0}) == 0xFF1FF06Fu);
    const Instr lw = expect_instr(0x0007A883u);  // lw x17, 0(x15)
    CHECK(lw.kind == Kind::LW);
    CHECK(lw.rd == 17);
    CHECK(lw.rs1 == 15);
    CHECK(lw.imm == 0);
}
