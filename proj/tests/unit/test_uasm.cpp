#include <catch2/catch_amalgamated.hpp>

#include "udec/microcode.hpp"
#include "udec/uasm.hpp"

using namespace udec;
using namespace udec::ucode;

static const char* kRotl8N32 = R"(
.rom p=1 n=32
.macro 0 rotl8
    slli t0, rs1, 1
    srli t1, rs1, 7
    or t0, t0, t1
    andi rd, t0, 255
)";

TEST_CASE("assemble rotl8 block layout") {
    const RomImage rom = assemble(kRotl8N32);
    REQUIRE(rom.p == 1);
    REQUIRE(rom.n == 32);
    for (unsigned off = 0; off < 4; ++off) {
        const MicroWord w = unpack(rom.word(0, off));
        CHECK(w.fu == Fu::Alu);
        CHECK(w.skip == (off == 3));
    }
    for (unsigned off = 4; off < 32; ++off) CHECK(rom.word(0, off) == 0);
    CHECK(rom.sequence_length(0) == 4);
    CHECK(rom.labels.at(0) == "rotl8");

    const MicroWord w0 = unpack(rom.word(0, 0));
    CHECK(w0.opcode == op::kSlli);
    CHECK(w0.rd_slot == slot::kT0);
    CHECK(w0.rs1_slot == slot::kRs1);
    CHECK(w0.imm == 1);
    const MicroWord w3 = unpack(rom.word(0, 3));
    CHECK(w3.opcode == op::kAndi);
    CHECK(w3.rd_slot == slot::kRd);
    CHECK(w3.imm == 255);
}

TEST_CASE("empty source yields zero words") {
    const RomImage rom = assemble(".rom p=2 n=2\n");
    CHECK(rom.p == 2);
    CHECK(rom.n == 2);
    CHECK(rom.words == std::vector<u32>(4, 0));
}

TEST_CASE("assembler diagnostics") {
    CHECK_THROWS_AS(assemble(".rom p=2 n=2\n.macro 0\nadd rd, rs1, rs2\n.macro 0\nadd rd, rs1, rs2\n"),
                    DuplicateIdx);
    CHECK_THROWS_AS(assemble(".rom p=1 n=2\n.macro 0\nadd rd, rs1, rs2\nadd rd, rs1, rs2\nadd rd, rs1, rs2\n"),
                    SequenceTooLong);
    CHECK_THROWS_AS(assemble(".rom p=1 n=4\n.macro 0\naddi t0, rs1, -512\n"), ImmOutOfRange);
    CHECK_THROWS_AS(assemble(".rom p=1 n=4\n.macro 0\naddi t0, rs1, 600\n"), ImmOutOfRange);
    CHECK_THROWS_AS(assemble(".rom p=2 n=2\n.macro 5\nadd rd, rs1, rs2\n"), RangeError);
    CHECK_THROWS_AS(assemble(".rom p=1 n=4\n.macro 0\nbogus rd, rs1, rs2\n"), ParseError);
    CHECK_THROWS_AS(assemble(".rom p=1 n=4\nadd rd, rs1, rs2\n"), ParseError);
    CHECK_THROWS_AS(assemble(".macro 0\n"), ParseError);
    CHECK_THROWS_AS(assemble("add rd, rs1, rs2\n"), ParseError);
    CHECK_THROWS_AS(assemble(".rom p=1 n=4\n.macro 0\nadd rd, rs1\n"), ParseError);
    CHECK_THROWS_AS(
        assemble(".rom p=1 n=4\n.macro 0\nadd rd, rs1, rs2 !end\nadd rd, rs1, rs2\n"),
        ParseError);
    try {
        assemble(".rom p=1 n=4\n.macro 0\naddi t0, rs1, 99999\n");
        FAIL("expected ImmOutOfRange");
    } catch (const ImmOutOfRange& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("macro immediate sentinel") {
    const RomImage rom = assemble(".rom p=1 n=4\n.macro 0\naddi t0, rs1, $imm\nlbu t1, $imm(rs1)\n");
    CHECK(unpack(rom.word(0, 0)).uses_macro_imm());
    CHECK(unpack(rom.word(0, 1)).uses_macro_imm());
}

TEST_CASE("store and load operand forms") {
    const RomImage rom =
        assemble(".rom p=1 n=4\n.macro 0\nld t0, 8(rs1)\nsd t0, -16(rs2)\n");
    const MicroWord ld = unpack(rom.word(0, 0));
    CHECK(ld.opcode == op::kLd);
    CHECK(ld.rd_slot == slot::kT0);
    CHECK(ld.rs1_slot == slot::kRs1);
    CHECK(ld.imm == 8);
    const MicroWord sd = unpack(rom.word(0, 1));
    CHECK(sd.opcode == op::kSd);
    CHECK(sd.rs2_slot == slot::kT0);   // data
    CHECK(sd.rs1_slot == slot::kRs2);  // base
    CHECK(sd.imm == -16);
    CHECK(sd.skip);
}

TEST_CASE("assembler fixpoint on the bundled sources") {
    for (const char* src : {microcode::rotl8_source(), microcode::sbox_source()}) {
        const RomImage rom = assemble(src);
        const std::string text = disassemble_rom(rom);
        const RomImage again = assemble(text);
        CHECK(again == rom);
        CHECK(again.labels == rom.labels);
        // And a second round for the true fixpoint.
        CHECK(disassemble_rom(again) == text);
    }
}

TEST_CASE("sbox source has exactly 18 micro-instructions") {
    const RomImage rom = microcode::sbox_rom();
    CHECK(rom.sequence_length(microcode::kSboxIdx) == 18);
    CHECK(rom.sequence_length(microcode::kRotl8Idx) == 4);
}

TEST_CASE("disassemble_rom of an empty image is header-only") {
    const std::string text = disassemble_rom(RomImage(2, 2));
    CHECK(text == ".rom p=2 n=2\n");
}

TEST_CASE("shipped .uasm files match the embedded sources") {
#ifdef UDEC_SOURCE_DIR
    auto read = [](const std::string& path) {
        std::FILE* f = std::fopen(path.c_str(), "rb");
        REQUIRE(f != nullptr);
        std::string s;
        char buf[4096];
        size_t got;
        while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) s.append(buf, got);
        std::fclose(f);
        return s;
    };
    const std::string dir = UDEC_SOURCE_DIR;
    CHECK(read(dir + "/microcode/rotl8.uasm") == microcode::rotl8_source());
    CHECK(read(dir + "/microcode/sbox.uasm") == microcode::sbox_source());
#endif
}
