#pragma once

// Architectural state, functional semantics of instructions and micro-ops,
// and a pure functional ISS (oracle_run) with no timing model. The pipeline
// executes through the same exec_* functions, so the oracle is the
// equivalence reference for everything the timed model does.

#include <algorithm>
#include <array>
#include <vector>

#include "udec/common.hpp"
#include "udec/isa.hpp"
#include "udec/ucode.hpp"

namespace udec::core {

constexpr unsigned kNumRegs = 37;  // x0..x31 + t0..t4 at 32..36
constexpr u64 kDefaultBase = 0x80000000ull;
constexpr u64 kDefaultRamSize = 16ull * 1024 * 1024;

// Register index 32..36 are the micro-decoder temporaries.
inline std::string phys_reg_name(unsigned r) {
    if (r >= ucode::kTempBase) return "t" + std::to_string(r - ucode::kTempBase);
    return isa::reg_name(r);
}

struct MemoryImage {
    u64 base = kDefaultBase;
    std::vector<u8> bytes;

    MemoryImage() = default;
    MemoryImage(u64 base_, size_t size) : base(base_), bytes(size, 0) {}

    u64 size() const { return bytes.size(); }
    u64 end() const { return base + bytes.size(); }

    bool contains(u64 addr, unsigned sz) const {
        return addr >= base && addr + sz >= addr && addr + sz <= end();
    }

    void check(u64 addr, unsigned sz, const char* what) const {
        if (!contains(addr, sz)) throw MemoryFault(addr, sz, std::string(what) + " out of range");
        if (addr % sz != 0) throw MemoryFault(addr, sz, std::string(what) + " misaligned");
    }

    u64 load(u64 addr, unsigned sz) const {
        check(addr, sz, "load");
        u64 v = 0;
        const size_t off = static_cast<size_t>(addr - base);
        for (unsigned i = 0; i < sz; ++i) v |= u64(bytes[off + i]) << (8 * i);
        return v;
    }

    void store(u64 addr, unsigned sz, u64 value) {
        check(addr, sz, "store");
        const size_t off = static_cast<size_t>(addr - base);
        for (unsigned i = 0; i < sz; ++i) bytes[off + i] = u8((value >> (8 * i)) & 0xFF);
    }

    // Instruction fetch; no alignment/bounds tolerance beyond load's.
    u32 fetch(u64 pc) const {
        if (!contains(pc, 4)) throw MemoryFault(pc, 4, "fetch out of range");
        if (pc % 4 != 0) throw MemoryFault(pc, 4, "fetch misaligned");
        const size_t off = static_cast<size_t>(pc - base);
        return u32(bytes[off]) | (u32(bytes[off + 1]) << 8) | (u32(bytes[off + 2]) << 16) |
               (u32(bytes[off + 3]) << 24);
    }

    void place(u64 addr, const std::vector<u8>& data) {
        if (!contains(addr, 1) || addr + data.size() > end())
            throw LoadError("image does not fit in memory");
        std::copy(data.begin(), data.end(), bytes.begin() + static_cast<size_t>(addr - base));
    }
};

struct ArchState {
    std::array<u64, kNumRegs> regs{};
    u64 pc = 0;
    u64 csr_cycle = 0;
    u64 csr_instret = 0;
    bool halted = false;
    u8 exit_code = 0;

    u64 read(unsigned r) const { return regs[r]; }
    // Writes to x0 are discarded; temporaries write normally.
    void write(unsigned r, u64 v) {
        if (r != 0) regs[r] = v;
    }
};

inline ArchState make_initial_state(const MemoryImage& mem, u64 entry) {
    ArchState s;
    s.pc = entry;
    s.regs[2] = mem.end();  // stack pointer at top of RAM
    return s;
}

// Compares architectural registers x0..x31 and memory; temporaries and CSRs
// are excluded on purpose (temps are scratch, cycle differs by design).
// `mem_from` lets callers comparing two different binaries skip the program
// images themselves (which differ by construction) and compare data memory
// above them; 0 compares everything.
inline void require_arch_equal(const ArchState& a, const MemoryImage& am, const ArchState& b,
                               const MemoryImage& bm, u64 mem_from = 0) {
    for (unsigned r = 0; r < 32; ++r)
        if (a.regs[r] != b.regs[r])
            throw StateMismatch("register " + isa::reg_name(r) + ": " +
                                IllegalInstruction::hex64(a.regs[r]) + " vs " +
                                IllegalInstruction::hex64(b.regs[r]));
    if (am.base != bm.base || am.size() != bm.size())
        throw StateMismatch("memory geometry differs");
    const size_t from =
        mem_from <= am.base ? 0 : static_cast<size_t>(std::min(mem_from - am.base, am.size()));
    if (std::equal(am.bytes.begin() + from, am.bytes.end(), bm.bytes.begin() + from)) return;
    for (size_t i = from; i < am.bytes.size(); ++i)
        if (am.bytes[i] != bm.bytes[i])
            throw StateMismatch("memory byte at " + IllegalInstruction::hex64(am.base + i) +
                                ": " + std::to_string(am.bytes[i]) + " vs " +
                                std::to_string(bm.bytes[i]));
}

// --- ALU ---------------------------------------------------------------------

// RV64I semantics over the 8-bit micro opcode space. Immediate forms share the
// register-form data path; the caller passes the immediate as b.
inline u64 exec_alu(u8 opcode, u64 a, u64 b) {
    using namespace ucode::op;
    switch (opcode) {
        case kAdd: case kAddi: return a + b;
        case kSub: return a - b;
        case kSll: case kSlli: return a << (b & 63);
        case kSlt: case kSlti: return u64(static_cast<i64>(a) < static_cast<i64>(b));
        case kSltu: case kSltiu: return u64(a < b);
        case kXor: case kXori: return a ^ b;
        case kSrl: case kSrli: return a >> (b & 63);
        case kSra: case kSrai: return u64(static_cast<i64>(a) >> (b & 63));
        case kOr: case kOri: return a | b;
        case kAnd: case kAndi: return a & b;
        default: throw UnknownOpcode(opcode);
    }
}

// --- micro-op execution --------------------------------------------------------

// A micro-word after operand-slot resolution; what the udec stage emits into
// the pipeline and what EX executes.
struct ResolvedMicro {
    ucode::Fu fu = ucode::Fu::None;
    u8 opcode = 0;
    u8 rd = 0, rs1 = 0, rs2 = 0;  // physical indices in the extended file
    i64 imm = 0;                  // sentinel already substituted
};

inline ResolvedMicro resolve_micro(const ucode::MicroWord& w, const isa::MacroInstr& macro,
                                   i64 latched_imm) {
    ResolvedMicro r;
    r.fu = w.fu;
    r.opcode = w.opcode;
    r.rd = ucode::resolve_slot(w.rd_slot, macro);
    r.rs1 = ucode::resolve_slot(w.rs1_slot, macro);
    r.rs2 = ucode::resolve_slot(w.rs2_slot, macro);
    r.imm = w.uses_macro_imm() ? latched_imm : i64(w.imm);
    return r;
}

inline unsigned load_size(u8 opcode) {
    using namespace ucode::op;
    switch (opcode) {
        case kLb: case kLbu: return 1;
        case kLh: case kLhu: return 2;
        case kLw: case kLwu: return 4;
        default: return 8;
    }
}
inline unsigned store_size(u8 opcode) {
    using namespace ucode::op;
    switch (opcode) {
        case kSb: return 1;
        case kSh: return 2;
        case kSw: return 4;
        default: return 8;
    }
}

struct WriteBack {
    u8 reg = 0;  // 0 means no (visible) register write
    u64 value = 0;
};

inline WriteBack exec_resolved_micro(const ResolvedMicro& m, ArchState& st, MemoryImage& mem) {
    using namespace ucode::op;
    WriteBack wb;
    if (m.fu == ucode::Fu::Alu) {
        const u64 a = st.read(m.rs1);
        const u64 b = ucode::is_alu_imm_op(m.opcode) ? u64(m.imm) : st.read(m.rs2);
        wb.value = exec_alu(m.opcode, a, b);
        wb.reg = m.rd;
        st.write(m.rd, wb.value);
        if (m.rd == 0) wb.reg = 0;
        return wb;
    }
    if (m.fu == ucode::Fu::Lsu) {
        const u64 addr = st.read(m.rs1) + u64(m.imm);
        if (ucode::is_load_op(m.opcode)) {
            const unsigned sz = load_size(m.opcode);
            u64 v = mem.load(addr, sz);
            const bool sign = (m.opcode == kLb || m.opcode == kLh || m.opcode == kLw);
            if (sign) v = sext(v, sz * 8);
            wb.value = v;
            wb.reg = m.rd;
            st.write(m.rd, v);
            if (m.rd == 0) wb.reg = 0;
            return wb;
        }
        mem.store(addr, store_size(m.opcode), st.read(m.rs2));
        return wb;
    }
    throw UnknownFu(static_cast<unsigned>(m.fu));
}

// Executes one micro-word in the context of a macro-instruction. The latched
// immediate is always 0 for R-type macros; the parameter exists so the
// MACRO_IMM path stays exercised end to end.
inline WriteBack exec_micro(const ucode::MicroWord& w, const isa::MacroInstr& macro,
                            ArchState& st, MemoryImage& mem, i64 latched_imm = 0) {
    return exec_resolved_micro(resolve_micro(w, macro, latched_imm), st, mem);
}

// --- full instruction execution -----------------------------------------------

struct StepResult {
    u64 next_pc = 0;
    bool taken = false;  // control transfer resolved taken (redirect source)
    WriteBack wb;
};

inline StepResult execute_instr(const isa::Instr& in, ArchState& st, MemoryImage& mem) {
    using isa::Kind;
    StepResult r;
    r.next_pc = st.pc + 4;
    auto wr = [&](u64 v) {
        st.write(in.rd, v);
        if (in.rd != 0) r.wb = {in.rd, v};
    };
    const u64 a = st.read(in.rs1);
    const u64 b = st.read(in.rs2);
    const u64 imm = u64(in.imm);

    auto sext32 = [](u64 v) { return sext(v & 0xFFFFFFFFull, 32); };

    switch (in.kind) {
        case Kind::LUI: wr(imm); break;
        case Kind::AUIPC: wr(st.pc + imm); break;
        case Kind::JAL:
            wr(st.pc + 4);
            r.next_pc = st.pc + imm;
            r.taken = true;
            break;
        case Kind::JALR: {
            const u64 target = (a + imm) & ~u64(1);
            wr(st.pc + 4);
            r.next_pc = target;
            r.taken = true;
            break;
        }
        case Kind::BEQ: r.taken = a == b; goto branch;
        case Kind::BNE: r.taken = a != b; goto branch;
        case Kind::BLT: r.taken = static_cast<i64>(a) < static_cast<i64>(b); goto branch;
        case Kind::BGE: r.taken = static_cast<i64>(a) >= static_cast<i64>(b); goto branch;
        case Kind::BLTU: r.taken = a < b; goto branch;
        case Kind::BGEU: r.taken = a >= b; goto branch;
        branch:
            if (r.taken) r.next_pc = st.pc + imm;
            break;
        case Kind::LB: wr(sext(mem.load(a + imm, 1), 8)); break;
        case Kind::LH: wr(sext(mem.load(a + imm, 2), 16)); break;
        case Kind::LW: wr(sext(mem.load(a + imm, 4), 32)); break;
        case Kind::LD: wr(mem.load(a + imm, 8)); break;
        case Kind::LBU: wr(mem.load(a + imm, 1)); break;
        case Kind::LHU: wr(mem.load(a + imm, 2)); break;
        case Kind::LWU: wr(mem.load(a + imm, 4)); break;
        case Kind::SB: mem.store(a + imm, 1, b); break;
        case Kind::SH: mem.store(a + imm, 2, b); break;
        case Kind::SW: mem.store(a + imm, 4, b); break;
        case Kind::SD: mem.store(a + imm, 8, b); break;
        case Kind::ADDI: wr(a + imm); break;
        case Kind::SLTI: wr(u64(static_cast<i64>(a) < in.imm)); break;
        case Kind::SLTIU: wr(u64(a < imm)); break;
        case Kind::XORI: wr(a ^ imm); break;
        case Kind::ORI: wr(a | imm); break;
        case Kind::ANDI: wr(a & imm); break;
        case Kind::SLLI: wr(a << (imm & 63)); break;
        case Kind::SRLI: wr(a >> (imm & 63)); break;
        case Kind::SRAI: wr(u64(static_cast<i64>(a) >> (imm & 63))); break;
        case Kind::ADD: wr(a + b); break;
        case Kind::SUB: wr(a - b); break;
        case Kind::SLL: wr(a << (b & 63)); break;
        case Kind::SLT: wr(u64(static_cast<i64>(a) < static_cast<i64>(b))); break;
        case Kind::SLTU: wr(u64(a < b)); break;
        case Kind::XOR: wr(a ^ b); break;
        case Kind::SRL: wr(a >> (b & 63)); break;
        case Kind::SRA: wr(u64(static_cast<i64>(a) >> (b & 63))); break;
        case Kind::OR: wr(a | b); break;
        case Kind::AND: wr(a & b); break;
        case Kind::ADDIW: wr(sext32(a + imm)); break;
        case Kind::SLLIW: wr(sext32(a << (imm & 31))); break;
        case Kind::SRLIW: wr(sext32((a & 0xFFFFFFFFull) >> (imm & 31))); break;
        case Kind::SRAIW: wr(sext32(u64(static_cast<i32>(a & 0xFFFFFFFFull) >> (imm & 31)))); break;
        case Kind::ADDW: wr(sext32(a + b)); break;
        case Kind::SUBW: wr(sext32(a - b)); break;
        case Kind::SLLW: wr(sext32(a << (b & 31))); break;
        case Kind::SRLW: wr(sext32((a & 0xFFFFFFFFull) >> (b & 31))); break;
        case Kind::SRAW: wr(sext32(u64(static_cast<i32>(a & 0xFFFFFFFFull) >> (b & 31)))); break;
        case Kind::FENCE: break;  // no-op on this single-hart model
        case Kind::ECALL:
        case Kind::EBREAK:
            st.halted = true;
            st.exit_code = u8(st.regs[10] & 0xFF);
            r.next_pc = st.pc;
            break;
        case Kind::CSRRS:
            wr(in.imm == isa::kCsrCycle ? st.csr_cycle : st.csr_instret);
            break;
    }
    return r;
}

inline bool uses_lsu(const isa::Instr& in) { return isa::is_load(in.kind) || isa::is_store(in.kind); }

// --- oracle -------------------------------------------------------------------

struct OracleLimits {
    u64 max_retired = 10'000'000;
};

struct OracleResult {
    ArchState state;
    MemoryImage mem;
    u64 retired = 0;           // macro words retire nothing; their micro-ops do
    u64 macro_expansions = 0;
};

// Sequential reference execution with no timing model: macros expand in place
// by walking their ROM sequence. Halts on EBREAK/ECALL; throws LimitExceeded
// past limits.max_retired.
inline OracleResult oracle_run(const MemoryImage& program, u64 entry,
                               const ucode::RomImage* rom = nullptr,
                               OracleLimits limits = {}) {
    OracleResult res;
    res.mem = program;
    res.state = make_initial_state(res.mem, entry);
    ArchState& st = res.state;

    while (!st.halted) {
        if (res.retired >= limits.max_retired)
            throw LimitExceeded("oracle retired " + std::to_string(res.retired) + " ops");
        st.csr_cycle = st.csr_instret = res.retired;  // cycle mirrors instret in the oracle
        const u32 word = res.mem.fetch(st.pc);
        const isa::Decoded d = isa::decode(word, st.pc);
        if (std::holds_alternative<isa::Instr>(d)) {
            const StepResult step = execute_instr(std::get<isa::Instr>(d), st, res.mem);
            ++res.retired;
            st.pc = step.next_pc;
            continue;
        }
        const isa::MacroInstr& m = std::get<isa::MacroInstr>(d);
        if (!rom) throw MacroWithoutUdec(st.pc, m.idx);
        if (m.idx >= rom->p)
            throw EmptySequence(m.idx);  // idx beyond the ROM's macro slots
        for (unsigned off = 0; off < rom->n; ++off) {
            const ucode::MicroWord w = ucode::unpack(rom->word(m.idx, off));
            if (w.fu == ucode::Fu::None) {
                if (off == 0) throw EmptySequence(m.idx);
                throw SimError("macro idx=" + std::to_string(m.idx) +
                               " hit fu=NONE filler mid-sequence at offset " + std::to_string(off));
            }
            st.csr_cycle = st.csr_instret = res.retired;
            exec_micro(w, m, st, res.mem, 0);
            ++res.retired;
            if (res.retired > limits.max_retired)
                throw LimitExceeded("oracle retired " + std::to_string(res.retired) + " ops");
            if (w.skip) break;
        }
        ++res.macro_expansions;
        st.pc += 4;
    }
    return res;
}

}  // namespace udec::core
