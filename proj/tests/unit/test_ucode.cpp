#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <random>

#include "oracles.hpp"
#include "udec/ucode.hpp"

using namespace udec;
using namespace udec::ucode;

TEST_CASE("pack trivial cases") {
    CHECK(pack(MicroWord{}) == 0x00000000u);
    MicroWord skip_only;
    skip_only.skip = true;
    CHECK(pack(skip_only) == 0x80000000u);
}

TEST_CASE("pack xori example against the field-table oracle") {
    // {fu=ALU, opcode=XORI, rd=t0, rs1=rs1, imm=0x063, skip=0}
    const u32 expect = test_oracles::pack_oracle({1, 0x15, 3, 1, 0, 0x063, 0});
    CHECK(expect == 0x0C6C8151u);

    MicroWord w;
    w.fu = Fu::Alu;
    w.opcode = op::kXori;
    w.rd_slot = slot::kT0;
    w.rs1_slot = slot::kRs1;
    w.imm = 0x063;
    CHECK(pack(w) == expect);
    CHECK(unpack(0x0C6C8151u) == w);
}

TEST_CASE("unpack trivial and error cases") {
    const MicroWord w = unpack(0x80000000u);
    CHECK(w.skip);
    CHECK(w.fu == Fu::None);
    CHECK(w.opcode == 0);
    CHECK(w.imm == 0);

    CHECK_THROWS_AS(unpack(0x00000003u), UnknownFu);   // fu=3 reserved
    CHECK_THROWS_AS(unpack(0x0000000Fu), UnknownFu);   // fu=15 reserved
    CHECK_THROWS_AS(unpack(0x00000FF1u), UnknownOpcode);  // ALU with opcode 0xFF
    CHECK_THROWS_AS(unpack(0x00000112u), UnknownOpcode);  // LSU with ALU opcode 0x11
}

TEST_CASE("pack range errors") {
    MicroWord w;
    w.imm = 512;
    CHECK_THROWS_AS(pack(w), RangeError);
    w.imm = -513;
    CHECK_THROWS_AS(pack(w), RangeError);
}

namespace {

MicroWord random_word(std::mt19937_64& rng) {
    static const u8 alu_ops[] = {op::kAdd,  op::kSub,   op::kSll,  op::kSlt,  op::kSltu,
                                 op::kXor,  op::kSrl,   op::kSra,  op::kOr,   op::kAnd,
                                 op::kAddi, op::kSlli,  op::kSlti, op::kSltiu, op::kXori,
                                 op::kSrli, op::kSrai,  op::kOri,  op::kAndi};
    static const u8 lsu_ops[] = {op::kLb, op::kLh, op::kLw, op::kLd, op::kLbu, op::kLhu,
                                 op::kLwu, op::kSb, op::kSh, op::kSw, op::kSd};
    MicroWord w;
    switch (rng() % 3) {
        case 0: w.fu = Fu::None; break;
        case 1:
            w.fu = Fu::Alu;
            w.opcode = alu_ops[rng() % std::size(alu_ops)];
            break;
        default:
            w.fu = Fu::Lsu;
            w.opcode = lsu_ops[rng() % std::size(lsu_ops)];
            break;
    }
    w.rd_slot = rng() & 7;
    w.rs1_slot = rng() & 7;
    w.rs2_slot = rng() & 7;
    w.imm = static_cast<i16>(static_cast<i64>(rng() % 1024) - 512);
    w.skip = rng() & 1;
    return w;
}

}  // namespace

TEST_CASE("pack/unpack round-trips over random valid words") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 10000; ++i) {
        const MicroWord w = random_word(rng);
        const u32 raw = pack(w);
        CHECK(unpack(raw) == w);
        CHECK(pack(unpack(raw)) == raw);
    }
}

TEST_CASE("slot resolution is total; temp codes map onto 32..36") {
    isa::MacroInstr m;
    m.rd = 10;
    m.rs1 = 5;
    m.rs2 = 6;
    CHECK(resolve_slot(slot::kRs1, m) == 5);
    CHECK(resolve_slot(slot::kRd, m) == 10);
    CHECK(resolve_slot(slot::kRs2, m) == 6);
    isa::MacroInstr any;
    any.rd = 31;
    for (u8 code = 3; code <= 7; ++code) {
        CHECK(resolve_slot(code, m) == 32u + code - 3);
        CHECK(resolve_slot(code, any) == 32u + code - 3);  // independent of the macro
    }
    // Injective from codes 3..7 onto 32..36.
    bool seen[37] = {};
    for (u8 code = 3; code <= 7; ++code) {
        const u8 r = resolve_slot(code, m);
        CHECK(!seen[r]);
        seen[r] = true;
        CHECK(r >= 32);
        CHECK(r <= 36);
    }
}

TEST_CASE("rom payload size law") {
    for (auto [p, n] : {std::pair<u16, u16>{2, 2}, {32, 32}, {64, 32}, {1, 1}, {128, 7}}) {
        RomImage rom(p, n);
        CHECK(rom.payload_bytes() == size_t(p) * n * 4);
        CHECK(serialize_rom(rom).size() == 16 + size_t(p) * n * 4);
    }
}

TEST_CASE("rom serialize/deserialize round-trips bit-exactly") {
    std::mt19937_64 rng(99);
    RomImage rom(4, 8);
    // Slot 0: full-length valid sequence; slot 2: short skip-terminated one.
    for (unsigned off = 0; off < 8; ++off) {
        MicroWord w = random_word(rng);
        w.fu = Fu::Alu;
        w.opcode = op::kAdd;
        w.skip = off == 7;
        rom.set_word(0, off, pack(w));
    }
    MicroWord last;
    last.fu = Fu::Alu;
    last.opcode = op::kXori;
    last.imm = 17;
    last.skip = true;
    rom.set_word(2, 0, pack(last));
    rom.labels[2] = "tiny";

    const std::string blob = serialize_rom(rom);
    const RomImage back = deserialize_rom(blob);
    CHECK(back == rom);
    CHECK(back.payload_bytes() == rom.payload_bytes());
}

TEST_CASE("rom file errors") {
    RomImage rom(2, 2);
    std::string blob = serialize_rom(rom);
    CHECK(blob.size() == 32);  // 16-byte header + 16-byte payload

    std::string bad_magic = blob;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(deserialize_rom(bad_magic), BadMagic);

    std::string bad_version = blob;
    bad_version[4] = 9;
    CHECK_THROWS_AS(deserialize_rom(bad_version), VersionMismatch);

    std::string truncated = blob.substr(0, 20);
    CHECK_THROWS_AS(deserialize_rom(truncated), TruncatedFile);

    std::string bad_len = blob;
    bad_len[12] = 0xFF;
    CHECK_THROWS_AS(deserialize_rom(bad_len), TruncatedFile);

    CHECK_THROWS_AS(deserialize_rom(std::string("URV")), TruncatedFile);
}

TEST_CASE("rom write/read through a file") {
    RomImage rom(2, 4);
    MicroWord w;
    w.fu = Fu::Lsu;
    w.opcode = op::kLbu;
    w.rd_slot = slot::kT1;
    w.rs1_slot = slot::kRs1;
    w.imm = 4;
    w.skip = true;
    rom.set_word(1, 0, pack(w));
    const std::string path = "test_rom_tmp.rom";
    write_rom(rom, path);
    const RomImage back = read_rom(path);
    std::remove(path.c_str());
    CHECK(back == rom);
}

TEST_CASE("rom shape validation rejects content after sequence end") {
    RomImage rom(1, 4);
    MicroWord w;
    w.fu = Fu::Alu;
    w.opcode = op::kAdd;
    w.skip = true;
    rom.set_word(0, 0, pack(w));
    rom.set_word(0, 2, pack(w));  // unreachable non-zero filler
    CHECK_THROWS_AS(deserialize_rom(serialize_rom(rom)), SimError);
}
