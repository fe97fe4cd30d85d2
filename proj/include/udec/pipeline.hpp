#pragma once

// The timed model: six baseline stages (F1 PC-gen, F2 fetch, ID, ISSUE, EX,
// COMMIT) plus the optional micro-decode stage (UDEC) between ID and ISSUE.
// Single-issue, in-order, full ALU forwarding, 1-cycle load-use stall, static
// not-taken prediction with redirects resolved in EX.
//
// The UDEC stage holds the bypass/inject FSM and a depth-2 first-word-fall-
// through FIFO toward ISSUE. In bypass the stage is a register barrier (one
// cycle, no elasticity); in inject it emits one micro-op per cycle from the
// ROM, buffering up to two entries when ISSUE stalls.

#include <functional>
#include <optional>
#include <string>
#include <unordered_set>

#include "udec/common.hpp"
#include "udec/core.hpp"
#include "udec/isa.hpp"
#include "udec/ucode.hpp"

namespace udec::pipeline {

struct IcacheConfig {
    u32 line_size_instrs = 16;
    u32 miss_penalty_cycles = 20;
    bool enabled = true;
};

struct PipelineConfig {
    bool udec_enabled = true;
    IcacheConfig icache{};
    u32 lsu_latency_cycles = 2;
    u64 max_cycles = 50'000'000;

    void validate() const {
        if (!is_pow2(icache.line_size_instrs))
            throw RangeError("icache line size must be a power of two");
        if (lsu_latency_cycles < 1) throw RangeError("lsu latency must be >= 1");
    }

    // Stages in front of EX: F1, F2, ID, [UDEC], ISSUE. Determines both the
    // pipeline fill depth and the flush penalty of a redirect.
    unsigned frontend_depth() const { return udec_enabled ? 5 : 4; }
};

struct CycleStats {
    u64 cycles = 0;
    u64 retired_ops = 0;
    u64 macro_expansions = 0;
    u64 icache_hits = 0;
    u64 icache_misses = 0;
    u64 redirects_taken = 0;
    u64 flush_cycles = 0;

    bool operator==(const CycleStats&) const = default;
};

// Warm/cold line model: the first access to a line pays the miss penalty and
// warms it (on refill completion); later accesses hit. No capacity evictions.
class IcacheModel {
  public:
    explicit IcacheModel(IcacheConfig cfg = {}) : cfg_(cfg) {}

    struct Access {
        bool hit;
        u32 penalty;  // 0 on hit
        u64 line;
    };

    Access access(u64 pc) const {
        const u64 line = pc / (u64(cfg_.line_size_instrs) * 4);
        if (!cfg_.enabled || warm_.count(line)) return {true, 0, line};
        return {false, cfg_.miss_penalty_cycles, line};
    }

    // Called when a miss refill completes. A fetch squashed mid-miss never
    // gets here, so the line stays cold.
    void mark_warm(u64 line) { warm_.insert(line); }

    const IcacheConfig& config() const { return cfg_; }

  private:
    IcacheConfig cfg_;
    std::unordered_set<u64> warm_;
};

// --- decoded entries -----------------------------------------------------------

// One issued operation flowing down the pipe: a decoded RV64I instruction, a
// resolved micro-op, or a poisoned slot whose fault fires if it ever commits.
struct DecodedEntry {
    enum class Kind : u8 { Instr, Micro, Poison };

    u64 pc = 0;
    u32 raw = 0;
    Kind kind = Kind::Poison;
    isa::Instr instr{};
    core::ResolvedMicro micro{};
    bool is_micro_op = false;
    bool is_last_of_macro = false;
    std::exception_ptr fault{};  // set when kind == Poison

    // Source registers actually read (0 = none); drives the load-use check.
    u8 src1 = 0, src2 = 0;

    bool is_halt() const {
        return kind == Kind::Instr &&
               (instr.kind == isa::Kind::EBREAK || instr.kind == isa::Kind::ECALL);
    }
    bool is_load() const {
        return (kind == Kind::Instr && isa::is_load(instr.kind)) ||
               (kind == Kind::Micro && ucode::is_load_op(micro.opcode));
    }
    bool uses_lsu() const {
        return (kind == Kind::Instr && core::uses_lsu(instr)) ||
               (kind == Kind::Micro && micro.fu == ucode::Fu::Lsu);
    }
};

inline DecodedEntry make_instr_entry(u64 pc, u32 raw, const isa::Instr& in) {
    DecodedEntry e;
    e.pc = pc;
    e.raw = raw;
    e.kind = DecodedEntry::Kind::Instr;
    e.instr = in;
    e.src1 = in.rs1;  // decode leaves unused fields at 0
    e.src2 = in.rs2;
    return e;
}

inline DecodedEntry make_micro_entry(u64 pc, u32 raw, const core::ResolvedMicro& m, bool last) {
    DecodedEntry e;
    e.pc = pc;
    e.raw = raw;
    e.kind = DecodedEntry::Kind::Micro;
    e.micro = m;
    e.is_micro_op = true;
    e.is_last_of_macro = last;
    e.src1 = m.rs1;
    e.src2 = (ucode::is_alu_reg_op(m.opcode) || ucode::is_store_op(m.opcode)) ? m.rs2 : 0;
    return e;
}

inline DecodedEntry make_poison_entry(u64 pc, u32 raw, std::exception_ptr fault) {
    DecodedEntry e;
    e.pc = pc;
    e.raw = raw;
    e.kind = DecodedEntry::Kind::Poison;
    e.fault = std::move(fault);
    return e;
}

// ID-stage output: either a decoded entry or a macro headed for the FSM.
struct IdOut {
    bool is_macro = false;
    isa::MacroInstr macro{};
    DecodedEntry entry{};
    u64 pc = 0;
    u32 raw = 0;
};

// --- FWFT FIFO -----------------------------------------------------------------

// Depth-2 first-word-fall-through queue: an entry pushed into an empty queue
// is poppable in the same cycle. Push/pop take the current cycle so the
// fall-through property stays observable.
template <typename T, unsigned Capacity = 2>
class FwftFifo {
  public:
    bool empty() const { return count_ == 0; }
    bool full() const { return count_ == Capacity; }
    unsigned size() const { return count_; }

    void push(const T& v, u64 cycle) {
        if (full()) throw SimError("fifo overflow");
        slots_[(head_ + count_) % Capacity] = Slot{v, cycle};
        ++count_;
        if (count_ > max_size_) max_size_ = count_;
    }

    T pop(u64 cycle) {
        if (empty()) throw SimError("fifo underflow");
        Slot s = slots_[head_];
        head_ = (head_ + 1) % Capacity;
        --count_;
        if (s.pushed_at == cycle) ++fall_throughs_;
        return s.value;
    }

    const T& front() const { return slots_[head_].value; }
    void clear() { count_ = 0; }

    unsigned max_size() const { return max_size_; }
    u64 fall_throughs() const { return fall_throughs_; }

  private:
    struct Slot {
        T value{};
        u64 pushed_at = 0;
    };
    Slot slots_[Capacity]{};
    unsigned head_ = 0;
    unsigned count_ = 0;
    unsigned max_size_ = 0;
    u64 fall_throughs_ = 0;
};

// --- bypass/inject FSM ----------------------------------------------------------

// The micro-decode state machine. In BYPASS it forwards decoded instructions
// unchanged and latches macro info when one shows up; in INJECT it emits one
// resolved micro-op per step, walking rom addresses idx*n .. idx*n + L-1.
class UdecFsm {
  public:
    enum class Mode : u8 { Bypass, Inject };

    struct Latched {
        u64 pc = 0;
        i64 imm = 0;  // latched macro immediate (0: macros are R-type)
        u8 rd = 0, rs1 = 0, rs2 = 0;
    };

    struct Output {
        bool emitted = false;
        DecodedEntry entry{};
        bool consumed_input = false;
    };

    Mode mode() const { return mode_; }
    unsigned idx() const { return idx_; }
    unsigned offset() const { return offset_; }
    const Latched& latched() const { return latched_; }

    void reset() {
        mode_ = Mode::Bypass;
        idx_ = offset_ = 0;
    }

    // One cycle of FSM work. `input` is the content of the stage register
    // (null when empty); it is only consumed when the output says so.
    Output step(const IdOut* input, const ucode::RomImage* rom) {
        Output out;
        if (mode_ == Mode::Inject) {
            out.emitted = true;
            out.entry = emit_word(rom);
            return out;
        }
        if (!input) return out;
        if (!input->is_macro) {
            out.emitted = true;
            out.entry = input->entry;
            out.consumed_input = true;
            return out;
        }
        // Macro detected: latch its fields and start injecting this cycle.
        const isa::MacroInstr& m = input->macro;
        macro_ = m;
        latched_ = Latched{input->pc, 0, m.rd, m.rs1, m.rs2};
        out.consumed_input = true;
        out.emitted = true;
        if (!rom) {
            out.entry = make_poison_entry(
                input->pc, input->raw,
                std::make_exception_ptr(MacroWithoutUdec(input->pc, m.idx)));
            return out;
        }
        if (m.idx >= rom->p || ucode::unpack(rom->word(m.idx, 0)).fu == ucode::Fu::None) {
            out.entry = make_poison_entry(input->pc, input->raw,
                                          std::make_exception_ptr(EmptySequence(m.idx)));
            return out;
        }
        idx_ = m.idx;
        offset_ = 0;
        mode_ = Mode::Inject;
        out.entry = emit_word(rom);
        return out;
    }

  private:
    DecodedEntry emit_word(const ucode::RomImage* rom) {
        const u32 raw = rom->word(idx_, offset_);
        const unsigned at = offset_;
        ucode::MicroWord w;
        try {
            w = ucode::unpack(raw);
        } catch (const SimError&) {
            mode_ = Mode::Bypass;
            return make_poison_entry(latched_.pc, raw, std::current_exception());
        }
        if (w.fu == ucode::Fu::None) {
            // Filler mid-sequence: only reachable with hand-built images.
            mode_ = Mode::Bypass;
            return make_poison_entry(
                latched_.pc, raw,
                std::make_exception_ptr(SimError("macro idx=" + std::to_string(idx_) +
                                                 " hit fu=NONE filler mid-sequence at offset " +
                                                 std::to_string(at))));
        }
        const bool last = w.skip || offset_ == unsigned(rom->n) - 1;
        ++offset_;
        if (last) mode_ = Mode::Bypass;
        return make_micro_entry(latched_.pc, raw,
                                core::resolve_micro(w, macro_, latched_.imm), last);
    }

    Mode mode_ = Mode::Bypass;
    unsigned idx_ = 0;
    unsigned offset_ = 0;
    Latched latched_{};
    isa::MacroInstr macro_{};
};

// --- commit trace ----------------------------------------------------------------

struct CommitEvent {
    u64 cycle = 0;
    u64 pc = 0;
    u32 raw = 0;
    bool is_micro = false;
    bool is_last_of_macro = false;
    std::string disasm;
    core::WriteBack wb{};
};

using CommitHook = std::function<void(const CommitEvent&)>;

inline std::string micro_disasm(const core::ResolvedMicro& m) {
    const std::string mn = ucode::micro_mnemonic(m.opcode);
    const std::string rd = core::phys_reg_name(m.rd);
    const std::string rs1 = core::phys_reg_name(m.rs1);
    const std::string rs2 = core::phys_reg_name(m.rs2);
    if (ucode::is_alu_reg_op(m.opcode)) return mn + " " + rd + ", " + rs1 + ", " + rs2;
    if (ucode::is_alu_imm_op(m.opcode)) return mn + " " + rd + ", " + rs1 + ", " + std::to_string(m.imm);
    if (ucode::is_load_op(m.opcode)) return mn + " " + rd + ", " + std::to_string(m.imm) + "(" + rs1 + ")";
    return mn + " " + rs2 + ", " + std::to_string(m.imm) + "(" + rs1 + ")";
}

// `cycle pc raw disasm [wb reg=value]`, micro-ops prefixed `u|`.
inline std::string format_trace_line(const CommitEvent& ev) {
    std::string line;
    if (ev.is_micro) line += "u| ";
    line += std::to_string(ev.cycle) + " " + to_hex(ev.pc, 16) + " " + to_hex(ev.raw, 8) + " " +
            ev.disasm;
    if (ev.wb.reg != 0)
        line += " wb " + core::phys_reg_name(ev.wb.reg) + "=0x" + to_hex(ev.wb.value, 16);
    return line;
}

// --- the machine -----------------------------------------------------------------

struct RunResult {
    core::ArchState state;
    CycleStats stats;
};

class Machine {
  public:
    Machine(core::MemoryImage mem, u64 entry, const ucode::RomImage* rom, PipelineConfig cfg,
            CommitHook on_commit = nullptr)
        : cfg_(cfg),
          mem_(std::move(mem)),
          rom_(rom),
          icache_(cfg.icache),
          on_commit_(std::move(on_commit)),
          f1_pc_(entry) {
        cfg_.validate();
        st_ = core::make_initial_state(mem_, entry);
    }

    bool halted() const { return committed_halt_; }
    const core::ArchState& state() const { return st_; }
    const core::MemoryImage& mem() const { return mem_; }
    const CycleStats& stats() const { return stats_; }
    const PipelineConfig& config() const { return cfg_; }
    unsigned fifo_max_size() const { return fifo_.max_size(); }
    u64 fifo_fall_throughs() const { return fifo_.fall_throughs(); }
    UdecFsm::Mode fsm_mode() const { return fsm_.mode(); }

    // Advances the machine one clock cycle.
    void tick() {
        ++stats_.cycles;
        const u64 now = stats_.cycles;

        // COMMIT: retire one entry per cycle.
        if (commit_in_) {
            const DecodedEntry& e = commit_in_->e;
            if (e.kind == DecodedEntry::Kind::Poison) std::rethrow_exception(e.fault);
            ++stats_.retired_ops;
            if (e.is_last_of_macro) ++stats_.macro_expansions;
            if (on_commit_) {
                CommitEvent ev{now, e.pc, e.raw, e.is_micro_op, e.is_last_of_macro,
                               e.kind == DecodedEntry::Kind::Micro ? micro_disasm(e.micro)
                                                                   : isa::disassemble(e.instr),
                               commit_in_->wb};
                on_commit_(ev);
            }
            const bool halt = e.is_halt();
            commit_in_.reset();
            if (halt) {
                committed_halt_ = true;
                return;
            }
        }

        // EX: execute on entry, then count down occupancy.
        if (ex_) {
            if (!ex_->executed) {
                ex_->executed = true;
                ex_->remaining = ex_->e.uses_lsu() ? cfg_.lsu_latency_cycles : 1;
                if (ex_->e.kind != DecodedEntry::Kind::Poison) {
                    st_.csr_cycle = now;
                    st_.csr_instret = stats_.retired_ops;
                    st_.pc = ex_->e.pc;
                    try {
                        if (ex_->e.kind == DecodedEntry::Kind::Instr) {
                            const core::StepResult sr =
                                core::execute_instr(ex_->e.instr, st_, mem_);
                            ex_->wb = sr.wb;
                            if (sr.taken) {
                                redirect_target_ = sr.next_pc;
                                ++stats_.redirects_taken;
                            }
                        } else {
                            ex_->wb = core::exec_resolved_micro(ex_->e.micro, st_, mem_);
                        }
                    } catch (const SimError&) {
                        // Faults surface at commit.
                        ex_->e.kind = DecodedEntry::Kind::Poison;
                        ex_->e.fault = std::current_exception();
                        ex_->remaining = 1;
                    }
                }
            }
            if (--ex_->remaining == 0) {
                if (ex_->e.is_load() && ex_->wb.reg != 0) last_load_ = {ex_->wb.reg, now};
                commit_in_ = CommitSlot{ex_->e, ex_->wb};
                ex_.reset();
            }
        }

        // ISSUE: dispatch into EX unless blocked by occupancy, a pending
        // redirect (the entry is wrong-path), or the load-use hazard.
        if (issue_in_ && !ex_ && !redirect_target_) {
            const bool load_use =
                last_load_.reg != 0 && now == last_load_.ex_end &&
                (issue_in_->src1 == last_load_.reg || issue_in_->src2 == last_load_.reg);
            if (!load_use) {
                ex_ = ExSlot{*issue_in_, 0, false, {}};
                issue_in_.reset();
            }
        }

        if (cfg_.udec_enabled) {
            // UDEC: FSM emission into the FIFO.
            if (fsm_.mode() == UdecFsm::Mode::Inject) {
                if (!fifo_.full()) {
                    UdecFsm::Output out = fsm_.step(nullptr, rom_);
                    fifo_.push(out.entry, now);
                }
            } else if (fsm_in_) {
                if (fsm_in_->is_macro) {
                    if (!fifo_.full()) {
                        UdecFsm::Output out = fsm_.step(&*fsm_in_, rom_);
                        fifo_.push(out.entry, now);
                        fsm_in_.reset();
                    }
                } else if (fifo_.empty() && !issue_in_) {
                    // Bypass is a register barrier: forward only when the
                    // entry falls through to ISSUE this cycle.
                    UdecFsm::Output out = fsm_.step(&*fsm_in_, rom_);
                    fifo_.push(out.entry, now);
                    fsm_in_.reset();
                }
            }
            if (!issue_in_ && !fifo_.empty()) issue_in_ = fifo_.pop(now);
        }

        // ID: decode the fetched word.
        if (id_in_) {
            if (cfg_.udec_enabled) {
                if (!fsm_in_) {
                    fsm_in_ = decode_udec(*id_in_);
                    id_in_.reset();
                }
            } else if (!issue_in_) {
                issue_in_ = decode_baseline(*id_in_);
                id_in_.reset();
            }
        }

        // F2: icache access + fetch.
        if (f2_) {
            if (!f2_->accessed) {
                f2_->accessed = true;
                if (mem_.contains(f2_->pc, 4) && f2_->pc % 4 == 0) {
                    const IcacheModel::Access a = icache_.access(f2_->pc);
                    if (a.hit) {
                        ++stats_.icache_hits;
                        f2_->wait = 0;
                    } else {
                        ++stats_.icache_misses;
                        f2_->wait = a.penalty;
                        f2_->missed_line = a.line;
                    }
                } else {
                    f2_->wait = 0;  // out-of-range/misaligned: poison, no cache access
                }
            } else if (f2_->wait > 0) {
                --f2_->wait;
            }
            if (f2_->wait == 0 && !id_in_) {
                if (f2_->missed_line) icache_.mark_warm(*f2_->missed_line);
                id_in_ = fetch_word(f2_->pc);
                f2_.reset();
            }
        }

        // F1: PC generation.
        if (!f2_ && !redirect_target_ && !st_.halted) {
            f2_ = FetchSlot{f1_pc_};
            f1_pc_ += 4;
        }

        // Redirect: squash everything younger than the taken branch and
        // refetch. An in-flight miss is abandoned without warming its line.
        if (redirect_target_) {
            f1_pc_ = *redirect_target_;
            f2_.reset();
            id_in_.reset();
            fsm_in_.reset();
            fifo_.clear();
            fsm_.reset();
            issue_in_.reset();
            stats_.flush_cycles += cfg_.frontend_depth();
            redirect_target_.reset();
        }
    }

    // Ticks until halt; throws LimitExceeded at cfg.max_cycles.
    RunResult run() {
        while (!committed_halt_) {
            if (stats_.cycles >= cfg_.max_cycles)
                throw LimitExceeded("pipeline ran " + std::to_string(stats_.cycles) +
                                    " cycles without halting");
            tick();
        }
        st_.csr_cycle = stats_.cycles;
        st_.csr_instret = stats_.retired_ops;
        return RunResult{st_, stats_};
    }

  private:
    struct FetchSlot {
        u64 pc = 0;
        bool accessed = false;
        u32 wait = 0;
        std::optional<u64> missed_line{};
    };
    struct RawSlot {
        u64 pc = 0;
        u32 raw = 0;
        std::exception_ptr fault{};
    };
    struct ExSlot {
        DecodedEntry e{};
        u32 remaining = 0;
        bool executed = false;
        core::WriteBack wb{};
    };
    struct CommitSlot {
        DecodedEntry e{};
        core::WriteBack wb{};
    };
    struct LastLoad {
        u8 reg = 0;
        u64 ex_end = 0;
    };

    RawSlot fetch_word(u64 pc) {
        RawSlot s;
        s.pc = pc;
        try {
            s.raw = mem_.fetch(pc);
        } catch (const SimError&) {
            s.fault = std::current_exception();
        }
        return s;
    }

    IdOut decode_udec(const RawSlot& r) {
        IdOut out;
        out.pc = r.pc;
        out.raw = r.raw;
        if (r.fault) {
            out.entry = make_poison_entry(r.pc, r.raw, r.fault);
            return out;
        }
        try {
            isa::Decoded d = isa::decode(r.raw, r.pc);
            if (std::holds_alternative<isa::MacroInstr>(d)) {
                out.is_macro = true;
                out.macro = std::get<isa::MacroInstr>(d);
            } else {
                out.entry = make_instr_entry(r.pc, r.raw, std::get<isa::Instr>(d));
            }
        } catch (const SimError&) {
            out.entry = make_poison_entry(r.pc, r.raw, std::current_exception());
        }
        return out;
    }

    DecodedEntry decode_baseline(const RawSlot& r) {
        if (r.fault) return make_poison_entry(r.pc, r.raw, r.fault);
        try {
            isa::Decoded d = isa::decode(r.raw, r.pc);
            if (std::holds_alternative<isa::MacroInstr>(d)) {
                // Macro with the micro-decoder absent: illegal.
                const auto& m = std::get<isa::MacroInstr>(d);
                return make_poison_entry(
                    r.pc, r.raw, std::make_exception_ptr(MacroWithoutUdec(r.pc, m.idx)));
            }
            return make_instr_entry(r.pc, r.raw, std::get<isa::Instr>(d));
        } catch (const SimError&) {
            return make_poison_entry(r.pc, r.raw, std::current_exception());
        }
    }

    PipelineConfig cfg_;
    core::MemoryImage mem_;
    const ucode::RomImage* rom_;
    core::ArchState st_{};
    CycleStats stats_{};
    IcacheModel icache_;
    CommitHook on_commit_;

    u64 f1_pc_;
    std::optional<FetchSlot> f2_{};
    std::optional<RawSlot> id_in_{};
    std::optional<IdOut> fsm_in_{};
    UdecFsm fsm_{};
    FwftFifo<DecodedEntry, 2> fifo_{};
    std::optional<DecodedEntry> issue_in_{};
    std::optional<ExSlot> ex_{};
    std::optional<CommitSlot> commit_in_{};
    LastLoad last_load_{};
    std::optional<u64> redirect_target_{};
    bool committed_halt_ = false;
};

// Convenience wrapper mirroring oracle_run's shape.
inline RunResult run(const core::MemoryImage& program, u64 entry, const ucode::RomImage* rom,
                     const PipelineConfig& cfg, CommitHook hook = nullptr) {
    Machine m(program, entry, rom, cfg, std::move(hook));
    return m.run();
}

}  // namespace udec::pipeline
