#pragma once

// Micro-instruction word codec and the ROM image container.
//
// A micro-word packs into exactly 32 bits:
//   [31]    skip     last-valid-instruction flag
//   [30:21] imm      10-bit two's complement immediate
//   [20:18] rd_slot  operand slot codes (0=rd, 1=rs1, 2=rs2, 3..7=t0..t4)
//   [17:15] rs1_slot
//   [14:12] rs2_slot
//   [11:4]  opcode   8-bit operation code
//   [3:0]   fu       functional unit (0=NONE, 1=ALU, 2=LSU; 3..15 reserved)

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "udec/common.hpp"
#include "udec/isa.hpp"

namespace udec::ucode {

enum class Fu : u8 {
    None = 0,
    Alu = 1,
    Lsu = 2,
};

// 8-bit micro opcode space. Register ALU ops sit at 0x00-0x09, immediate ALU
// ops at 0x10-0x19 (0x11 reserved), LSU loads at 0x20-0x26 and stores at
// 0x28-0x2B. Everything else is reserved.
namespace op {
constexpr u8 kAdd = 0x00, kSub = 0x01, kSll = 0x02, kSlt = 0x03, kSltu = 0x04;
constexpr u8 kXor = 0x05, kSrl = 0x06, kSra = 0x07, kOr = 0x08, kAnd = 0x09;
constexpr u8 kAddi = 0x10, kSlli = 0x12, kSlti = 0x13, kSltiu = 0x14, kXori = 0x15;
constexpr u8 kSrli = 0x16, kSrai = 0x17, kOri = 0x18, kAndi = 0x19;
constexpr u8 kLb = 0x20, kLh = 0x21, kLw = 0x22, kLd = 0x23;
constexpr u8 kLbu = 0x24, kLhu = 0x25, kLwu = 0x26;
constexpr u8 kSb = 0x28, kSh = 0x29, kSw = 0x2A, kSd = 0x2B;
}  // namespace op

inline bool is_alu_reg_op(u8 code) { return code <= op::kAnd; }
inline bool is_alu_imm_op(u8 code) {
    return code >= op::kAddi && code <= op::kAndi && code != 0x11;
}
inline bool is_load_op(u8 code) { return code >= op::kLb && code <= op::kLwu; }
inline bool is_store_op(u8 code) { return code >= op::kSb && code <= op::kSd; }

inline bool is_valid_opcode(Fu fu, u8 code) {
    switch (fu) {
        case Fu::Alu: return is_alu_reg_op(code) || is_alu_imm_op(code);
        case Fu::Lsu: return is_load_op(code) || is_store_op(code);
        case Fu::None: return true;  // filler; opcode unused
    }
    return false;
}

// imm bit pattern 0b1000000000 (-512) is reserved: it substitutes the
// macro-instruction's latched immediate. Literal -512 is not encodable.
constexpr i16 kMacroImmSentinel = -512;
constexpr i16 kImmMin = -511;
constexpr i16 kImmMax = 511;

struct MicroWord {
    Fu fu = Fu::None;
    u8 opcode = 0;
    u8 rd_slot = 0, rs1_slot = 0, rs2_slot = 0;
    i16 imm = 0;  // [-512, 511]; -512 is the MACRO_IMM sentinel
    bool skip = false;

    bool uses_macro_imm() const { return imm == kMacroImmSentinel; }
    bool operator==(const MicroWord&) const = default;
};

inline u32 pack(const MicroWord& w) {
    if (static_cast<u8>(w.fu) > 15) throw RangeError("fu code > 15");
    if (w.rd_slot > 7 || w.rs1_slot > 7 || w.rs2_slot > 7)
        throw RangeError("operand slot code > 7");
    if (w.imm < -512 || w.imm > 511)
        throw RangeError("micro immediate " + std::to_string(w.imm) + " outside 10 bits");
    return (u32(w.skip) << 31) | ((u32(w.imm) & 0x3FF) << 21) | (u32(w.rd_slot) << 18) |
           (u32(w.rs1_slot) << 15) | (u32(w.rs2_slot) << 12) | (u32(w.opcode) << 4) |
           u32(static_cast<u8>(w.fu));
}

inline MicroWord unpack(u32 raw) {
    MicroWord w;
    const u8 fu = raw & 0xF;
    if (fu > 2) throw UnknownFu(fu);
    w.fu = static_cast<Fu>(fu);
    w.opcode = static_cast<u8>(bits(raw, 11, 4));
    if (w.fu != Fu::None && !is_valid_opcode(w.fu, w.opcode)) throw UnknownOpcode(w.opcode);
    w.rs2_slot = static_cast<u8>(bits(raw, 14, 12));
    w.rs1_slot = static_cast<u8>(bits(raw, 17, 15));
    w.rd_slot = static_cast<u8>(bits(raw, 20, 18));
    w.imm = static_cast<i16>(sext(bits(raw, 30, 21), 10));
    w.skip = bits(raw, 31, 31) != 0;
    return w;
}

// Operand slot codes.
namespace slot {
constexpr u8 kRd = 0, kRs1 = 1, kRs2 = 2, kT0 = 3, kT1 = 4, kT2 = 5, kT3 = 6, kT4 = 7;
}

constexpr unsigned kNumTemps = 5;
constexpr unsigned kTempBase = 32;  // temps live at indices 32..36 of the extended file

// Maps a 3-bit slot code onto a physical register index in the extended
// register file: 0/1/2 follow the macro's operands, 3..7 select t0..t4.
inline u8 resolve_slot(u8 code, const isa::MacroInstr& macro) {
    switch (code & 7) {
        case slot::kRd: return macro.rd;
        case slot::kRs1: return macro.rs1;
        case slot::kRs2: return macro.rs2;
        default: return static_cast<u8>(kTempBase + (code & 7) - 3);
    }
}

// Dense P x N array of packed micro-words. Words for macro idx occupy
// positions [idx*n, (idx+1)*n - 1]. Labels are tooling metadata and are not
// part of the binary format.
struct RomImage {
    u16 p = 0;
    u16 n = 0;
    std::vector<u32> words;  // p*n packed words
    std::map<u16, std::string> labels;

    RomImage() = default;
    RomImage(u16 p_, u16 n_) : p(p_), n(n_), words(size_t(p_) * n_, 0) {}

    size_t payload_bytes() const { return size_t(p) * n * 4; }

    u32 word(unsigned idx, unsigned off) const { return words[size_t(idx) * n + off]; }
    void set_word(unsigned idx, unsigned off, u32 w) { words[size_t(idx) * n + off] = w; }

    bool slot_empty(unsigned idx) const {
        for (unsigned off = 0; off < n; ++off)
            if (word(idx, off) != 0) return false;
        return true;
    }

    // Number of executed words in a slot: the prefix up to and including the
    // first skip-flagged word, or n if none carries the flag.
    unsigned sequence_length(unsigned idx) const {
        for (unsigned off = 0; off < n; ++off)
            if (unpack(word(idx, off)).skip) return off + 1;
        return n;
    }

    // Equality over the binary content (dimensions + payload); labels are
    // tooling-only and excluded.
    bool operator==(const RomImage& o) const { return p == o.p && n == o.n && words == o.words; }

    // Shape check: each slot is either all-zero (unprogrammed) or an executed
    // prefix of ALU/LSU words followed by zero filler. Word-level validity
    // (fu/opcode) is checked via unpack.
    void validate() const {
        for (unsigned idx = 0; idx < p; ++idx) {
            unsigned off = 0;
            for (; off < n; ++off) {
                const MicroWord w = unpack(word(idx, off));
                if (w.fu == Fu::None) break;
                if (w.skip) {
                    ++off;
                    break;
                }
            }
            for (; off < n; ++off) {
                if (word(idx, off) != 0)
                    throw SimError("rom slot " + std::to_string(idx) +
                                   " has a non-zero word after its sequence end (offset " +
                                   std::to_string(off) + ")");
            }
        }
    }
};

// --- binary ROM file format -------------------------------------------------
//
// Little-endian. 16-byte header: magic "URVM", u16 version (=1), u16 p,
// u16 n, u16 reserved (=0), u32 payload length (= p*n*4). Payload follows as
// p*n little-endian 32-bit words.

constexpr char kRomMagic[4] = {'U', 'R', 'V', 'M'};
constexpr u16 kRomVersion = 1;

inline void append_u16(std::string& s, u16 v) {
    s.push_back(char(v & 0xFF));
    s.push_back(char(v >> 8));
}
inline void append_u32(std::string& s, u32 v) {
    s.push_back(char(v & 0xFF));
    s.push_back(char((v >> 8) & 0xFF));
    s.push_back(char((v >> 16) & 0xFF));
    s.push_back(char((v >> 24) & 0xFF));
}

inline std::string serialize_rom(const RomImage& rom) {
    std::string out;
    out.reserve(16 + rom.payload_bytes());
    out.append(kRomMagic, 4);
    append_u16(out, kRomVersion);
    append_u16(out, rom.p);
    append_u16(out, rom.n);
    append_u16(out, 0);
    append_u32(out, static_cast<u32>(rom.payload_bytes()));
    for (u32 w : rom.words) append_u32(out, w);
    return out;
}

inline RomImage deserialize_rom(const std::string& data) {
    if (data.size() < 16) throw TruncatedFile("rom header needs 16 bytes, got " +
                                              std::to_string(data.size()));
    if (data.compare(0, 4, kRomMagic, 4) != 0)
        throw BadMagic("expected URVM rom header");
    auto rd16 = [&](size_t off) { return u16(u8(data[off])) | (u16(u8(data[off + 1])) << 8); };
    auto rd32 = [&](size_t off) {
        return u32(u8(data[off])) | (u32(u8(data[off + 1])) << 8) |
               (u32(u8(data[off + 2])) << 16) | (u32(u8(data[off + 3])) << 24);
    };
    const u16 version = rd16(4);
    if (version != kRomVersion)
        throw VersionMismatch("rom version " + std::to_string(version) + ", expected " +
                              std::to_string(kRomVersion));
    RomImage rom(rd16(6), rd16(8));
    const u32 payload_len = rd32(12);
    if (payload_len != rom.payload_bytes())
        throw TruncatedFile("payload length field " + std::to_string(payload_len) +
                            " does not match p*n*4 = " + std::to_string(rom.payload_bytes()));
    if (data.size() < 16 + rom.payload_bytes())
        throw TruncatedFile("payload needs " + std::to_string(rom.payload_bytes()) +
                            " bytes, got " + std::to_string(data.size() - 16));
    for (size_t i = 0; i < rom.words.size(); ++i) rom.words[i] = rd32(16 + i * 4);
    rom.validate();
    return rom;
}

inline void write_rom(const RomImage& rom, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw LoadError("cannot open " + path + " for writing");
    const std::string data = serialize_rom(rom);
    const size_t written = std::fwrite(data.data(), 1, data.size(), f);
    std::fclose(f);
    if (written != data.size()) throw LoadError("short write to " + path);
}

inline RomImage read_rom(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw LoadError("cannot open " + path);
    std::string data;
    char buf[4096];
    size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) data.append(buf, got);
    std::fclose(f);
    return deserialize_rom(data);
}

// Mnemonic table for the micro opcode space (assembler/disassembler/trace).
inline const char* micro_mnemonic(u8 code) {
    switch (code) {
        case op::kAdd: return "add";
        case op::kSub: return "sub";
        case op::kSll: return "sll";
        case op::kSlt: return "slt";
        case op::kSltu: return "sltu";
        case op::kXor: return "xor";
        case op::kSrl: return "srl";
        case op::kSra: return "sra";
        case op::kOr: return "or";
        case op::kAnd: return "and";
        case op::kAddi: return "addi";
        case op::kSlli: return "slli";
        case op::kSlti: return "slti";
        case op::kSltiu: return "sltiu";
        case op::kXori: return "xori";
        case op::kSrli: return "srli";
        case op::kSrai: return "srai";
        case op::kOri: return "ori";
        case op::kAndi: return "andi";
        case op::kLb: return "lb";
        case op::kLh: return "lh";
        case op::kLw: return "lw";
        case op::kLd: return "ld";
        case op::kLbu: return "lbu";
        case op::kLhu: return "lhu";
        case op::kLwu: return "lwu";
        case op::kSb: return "sb";
        case op::kSh: return "sh";
        case op::kSw: return "sw";
        case op::kSd: return "sd";
        default: return nullptr;
    }
}

inline const char* slot_name(u8 code) {
    static const char* names[8] = {"rd", "rs1", "rs2", "t0", "t1", "t2", "t3", "t4"};
    return names[code & 7];
}

}  // namespace udec::ucode
