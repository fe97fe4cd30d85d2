#pragma once

// Microcode assembly text format:
//
//   .rom p=<int> n=<int>        header, required, before any block
//   .macro <idx> [name]         starts the sequence for macro <idx>
//   <mnemonic> <operands> [!end]
//   # comment
//
// Operands name the macro's own registers (rd, rs1, rs2) or the
// micro-decoder-private temporaries (t0..t4). Immediates are decimal or
// 0x-hex; the token $imm selects the latched macro immediate. The assembler
// sets the skip flag on the last instruction of each block; the disassembler
// renders it as a trailing !end marker.

#include <sstream>
#include <string>
#include <vector>

#include "udec/common.hpp"
#include "udec/ucode.hpp"

namespace udec::ucode {

namespace uasm_detail {

struct Token {
    std::string text;
    int col;
};

inline std::vector<Token> split_operands(const std::string& s, int base_col) {
    // Splits on commas, trimming whitespace, tracking 1-based columns.
    std::vector<Token> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t comma = s.find(',', start);
        size_t end = (comma == std::string::npos) ? s.size() : comma;
        size_t a = start, b = end;
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        if (a < b) out.push_back({s.substr(a, b - a), base_col + static_cast<int>(a)});
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

inline bool parse_slot(const std::string& t, u8& out) {
    if (t == "rd") { out = slot::kRd; return true; }
    if (t == "rs1") { out = slot::kRs1; return true; }
    if (t == "rs2") { out = slot::kRs2; return true; }
    if (t.size() == 2 && t[0] == 't' && t[1] >= '0' && t[1] <= '4') {
        out = static_cast<u8>(slot::kT0 + (t[1] - '0'));
        return true;
    }
    return false;
}

inline i64 parse_int(const std::string& t, int line, int col) {
    bool neg = false;
    size_t i = 0;
    if (i < t.size() && (t[i] == '-' || t[i] == '+')) {
        neg = t[i] == '-';
        ++i;
    }
    if (i >= t.size()) throw ParseError(line, col, "expected integer, got '" + t + "'");
    i64 v = 0;
    if (t.compare(i, 2, "0x") == 0 || t.compare(i, 2, "0X") == 0) {
        i += 2;
        if (i >= t.size()) throw ParseError(line, col, "bad hex literal '" + t + "'");
        for (; i < t.size(); ++i) {
            const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(t[i])));
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else throw ParseError(line, col, "bad hex digit in '" + t + "'");
            v = v * 16 + d;
            if (v > i64(1) << 32) throw ParseError(line, col, "integer '" + t + "' too large");
        }
    } else {
        for (; i < t.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t[i])))
                throw ParseError(line, col, "bad digit in '" + t + "'");
            v = v * 10 + (t[i] - '0');
            if (v > i64(1) << 32) throw ParseError(line, col, "integer '" + t + "' too large");
        }
    }
    return neg ? -v : v;
}

// Parses an immediate operand: decimal, 0x-hex, or $imm.
inline i16 parse_imm(const std::string& t, int line, int col) {
    if (t == "$imm") return kMacroImmSentinel;
    const i64 v = parse_int(t, line, col);
    if (v < kImmMin || v > kImmMax)
        throw ImmOutOfRange(line, col, "immediate " + std::to_string(v) + " outside [" +
                                           std::to_string(kImmMin) + ", " +
                                           std::to_string(kImmMax) + "] ($imm selects the latched value)");
    return static_cast<i16>(v);
}

// Parses `imm(slot)` memory operands.
inline void parse_mem(const std::string& t, int line, int col, i16& imm, u8& base) {
    const size_t open = t.find('(');
    const size_t close = t.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close != t.size() - 1 ||
        close <= open + 1)
        throw ParseError(line, col, "expected imm(reg) memory operand, got '" + t + "'");
    imm = parse_imm(t.substr(0, open), line, col);
    if (!parse_slot(t.substr(open + 1, close - open - 1), base))
        throw ParseError(line, col + static_cast<int>(open) + 1,
                         "bad operand slot in '" + t + "'");
}

struct MnemonicEntry {
    const char* name;
    Fu fu;
    u8 opcode;
};

inline const MnemonicEntry* lookup_mnemonic(const std::string& m) {
    static const MnemonicEntry table[] = {
        {"add", Fu::Alu, op::kAdd},   {"sub", Fu::Alu, op::kSub},
        {"sll", Fu::Alu, op::kSll},   {"slt", Fu::Alu, op::kSlt},
        {"sltu", Fu::Alu, op::kSltu}, {"xor", Fu::Alu, op::kXor},
        {"srl", Fu::Alu, op::kSrl},   {"sra", Fu::Alu, op::kSra},
        {"or", Fu::Alu, op::kOr},     {"and", Fu::Alu, op::kAnd},
        {"addi", Fu::Alu, op::kAddi}, {"slli", Fu::Alu, op::kSlli},
        {"slti", Fu::Alu, op::kSlti}, {"sltiu", Fu::Alu, op::kSltiu},
        {"xori", Fu::Alu, op::kXori}, {"srli", Fu::Alu, op::kSrli},
        {"srai", Fu::Alu, op::kSrai}, {"ori", Fu::Alu, op::kOri},
        {"andi", Fu::Alu, op::kAndi}, {"lb", Fu::Lsu, op::kLb},
        {"lh", Fu::Lsu, op::kLh},     {"lw", Fu::Lsu, op::kLw},
        {"ld", Fu::Lsu, op::kLd},     {"lbu", Fu::Lsu, op::kLbu},
        {"lhu", Fu::Lsu, op::kLhu},   {"lwu", Fu::Lsu, op::kLwu},
        {"sb", Fu::Lsu, op::kSb},     {"sh", Fu::Lsu, op::kSh},
        {"sw", Fu::Lsu, op::kSw},     {"sd", Fu::Lsu, op::kSd},
    };
    for (const auto& e : table)
        if (m == e.name) return &e;
    return nullptr;
}

}  // namespace uasm_detail

inline RomImage assemble(const std::string& source) {
    using namespace uasm_detail;

    RomImage rom;
    bool have_rom_directive = false;
    int current_idx = -1;
    unsigned current_off = 0;
    int end_marker_line = -1;  // line of a !end already seen in the block
    std::vector<bool> seen(128, false);

    auto close_block = [&](int line) {
        if (current_idx < 0) return;
        if (current_off > 0) {
            // Auto-set skip on the last listed instruction.
            const u32 last = rom.word(unsigned(current_idx), current_off - 1);
            rom.set_word(unsigned(current_idx), current_off - 1, last | 0x80000000u);
        } else if (end_marker_line >= 0) {
            throw ParseError(end_marker_line, 1, "!end marker in empty block");
        }
        (void)line;
        current_idx = -1;
        current_off = 0;
        end_marker_line = -1;
    };

    std::istringstream in(source);
    std::string raw_line;
    int lineno = 0;
    while (std::getline(in, raw_line)) {
        ++lineno;
        std::string line = raw_line;
        if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        // Trim.
        size_t a = 0, b = line.size();
        while (a < b && std::isspace(static_cast<unsigned char>(line[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) --b;
        if (a == b) continue;
        const int col = static_cast<int>(a) + 1;
        line = line.substr(a, b - a);

        std::istringstream ls(line);
        std::string head;
        ls >> head;

        if (head == ".rom") {
            if (have_rom_directive) throw ParseError(lineno, col, "duplicate .rom directive");
            std::string tok;
            i64 p = -1, n = -1;
            while (ls >> tok) {
                if (tok.compare(0, 2, "p=") == 0) p = parse_int(tok.substr(2), lineno, col);
                else if (tok.compare(0, 2, "n=") == 0) n = parse_int(tok.substr(2), lineno, col);
                else throw ParseError(lineno, col, "unexpected token '" + tok + "' in .rom");
            }
            if (p < 1 || p > 128) throw RangeError("line " + std::to_string(lineno) +
                                                   ": p must be in [1, 128], got " + std::to_string(p));
            if (n < 1 || n > 1024) throw RangeError("line " + std::to_string(lineno) +
                                                    ": n must be in [1, 1024], got " + std::to_string(n));
            rom = RomImage(static_cast<u16>(p), static_cast<u16>(n));
            have_rom_directive = true;
            continue;
        }

        if (head == ".macro") {
            if (!have_rom_directive)
                throw ParseError(lineno, col, ".macro before .rom directive");
            close_block(lineno);
            std::string idx_tok;
            if (!(ls >> idx_tok)) throw ParseError(lineno, col, ".macro needs an index");
            const i64 idx = parse_int(idx_tok, lineno, col);
            if (idx < 0 || idx >= rom.p)
                throw RangeError("line " + std::to_string(lineno) + ": macro idx " +
                                 std::to_string(idx) + " out of range (p=" + std::to_string(rom.p) + ")");
            if (seen[static_cast<size_t>(idx)])
                throw DuplicateIdx(lineno, col, "macro idx " + std::to_string(idx) + " defined twice");
            seen[static_cast<size_t>(idx)] = true;
            current_idx = static_cast<int>(idx);
            current_off = 0;
            std::string name;
            if (ls >> name) rom.labels[static_cast<u16>(idx)] = name;
            continue;
        }

        if (head[0] == '.') throw ParseError(lineno, col, "unknown directive '" + head + "'");

        // A micro-op line.
        if (current_idx < 0) throw ParseError(lineno, col, "instruction outside a .macro block");
        if (end_marker_line >= 0)
            throw ParseError(lineno, col, "instruction after !end (marked on line " +
                                              std::to_string(end_marker_line) + ")");
        const MnemonicEntry* ent = lookup_mnemonic(head);
        if (!ent) throw ParseError(lineno, col, "unknown mnemonic '" + head + "'");

        std::string rest;
        std::getline(ls, rest);
        // Peel a trailing !end marker.
        {
            size_t e = rest.find_last_not_of(" \t");
            if (e != std::string::npos && e + 1 >= 4 && rest.compare(e - 3, 4, "!end") == 0 &&
                (e == 3 || std::isspace(static_cast<unsigned char>(rest[e - 4])))) {
                end_marker_line = lineno;
                rest.resize(e - 3);
            }
        }
        const auto ops = split_operands(rest, col + static_cast<int>(head.size()) + 1);

        MicroWord w;
        w.fu = ent->fu;
        w.opcode = ent->opcode;
        auto need = [&](size_t count) {
            if (ops.size() != count)
                throw ParseError(lineno, col, head + " expects " + std::to_string(count) +
                                                  " operands, got " + std::to_string(ops.size()));
        };
        auto slot_of = [&](const Token& t) {
            u8 s;
            if (!parse_slot(t.text, s))
                throw ParseError(lineno, t.col, "bad operand slot '" + t.text +
                                                    "' (want rd, rs1, rs2 or t0..t4)");
            return s;
        };

        if (is_alu_reg_op(w.opcode)) {
            need(3);
            w.rd_slot = slot_of(ops[0]);
            w.rs1_slot = slot_of(ops[1]);
            w.rs2_slot = slot_of(ops[2]);
        } else if (is_alu_imm_op(w.opcode)) {
            need(3);
            w.rd_slot = slot_of(ops[0]);
            w.rs1_slot = slot_of(ops[1]);
            w.imm = parse_imm(ops[2].text, lineno, ops[2].col);
        } else if (is_load_op(w.opcode)) {
            need(2);
            w.rd_slot = slot_of(ops[0]);
            parse_mem(ops[1].text, lineno, ops[1].col, w.imm, w.rs1_slot);
        } else {  // store: data slot, imm(base)
            need(2);
            w.rs2_slot = slot_of(ops[0]);
            parse_mem(ops[1].text, lineno, ops[1].col, w.imm, w.rs1_slot);
        }

        if (current_off >= rom.n)
            throw SequenceTooLong(lineno, col, "macro " + std::to_string(current_idx) +
                                                   " exceeds n=" + std::to_string(rom.n) +
                                                   " micro-instructions");
        rom.set_word(unsigned(current_idx), current_off, pack(w));
        ++current_off;
    }
    if (!have_rom_directive) throw ParseError(lineno ? lineno : 1, 1, "missing .rom directive");
    close_block(lineno);
    return rom;
}

inline std::string disassemble_word(const MicroWord& w) {
    const std::string m = micro_mnemonic(w.opcode);
    auto imm_str = [&]() -> std::string {
        return w.uses_macro_imm() ? "$imm" : std::to_string(w.imm);
    };
    if (is_alu_reg_op(w.opcode))
        return m + " " + slot_name(w.rd_slot) + ", " + slot_name(w.rs1_slot) + ", " +
               slot_name(w.rs2_slot);
    if (is_alu_imm_op(w.opcode))
        return m + " " + slot_name(w.rd_slot) + ", " + slot_name(w.rs1_slot) + ", " + imm_str();
    if (is_load_op(w.opcode))
        return m + " " + slot_name(w.rd_slot) + ", " + imm_str() + "(" + slot_name(w.rs1_slot) + ")";
    return m + " " + slot_name(w.rs2_slot) + ", " + imm_str() + "(" + slot_name(w.rs1_slot) + ")";
}

// Renders a valid RomImage back to assembly text. For assembler-produced
// images (every sequence ends on a skip-flagged word), reassembling the text
// reproduces the word array exactly.
inline std::string disassemble_rom(const RomImage& rom) {
    std::ostringstream out;
    out << ".rom p=" << rom.p << " n=" << rom.n << "\n";
    for (unsigned idx = 0; idx < rom.p; ++idx) {
        if (rom.slot_empty(idx)) continue;
        out << "\n.macro " << idx;
        if (auto it = rom.labels.find(static_cast<u16>(idx)); it != rom.labels.end())
            out << " " << it->second;
        out << "\n";
        const unsigned len = rom.sequence_length(idx);
        for (unsigned off = 0; off < len; ++off) {
            const MicroWord w = unpack(rom.word(idx, off));
            out << "    " << disassemble_word(w);
            if (w.skip) out << " !end";
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace udec::ucode
