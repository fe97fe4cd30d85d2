#pragma once

// Deterministic random-program generator. Produces halting macro-free RV64I
// programs for oracle/pipeline equivalence fuzzing and for the bench suite's
// regression seeds: straight-line blocks of ALU/memory work, optional bounded
// loops, forward branches, and call/return pairs. Stores stay inside a
// scratch window away from the code so programs cannot self-modify.

#include <random>

#include "udec/builder.hpp"
#include "udec/core.hpp"

namespace udec::gen {

struct GenOptions {
    u64 seed = 1;
    unsigned blocks = 12;       // structured blocks per program
    bool loops = true;          // bounded loops + taken forward branches
    bool calls = true;          // jal/jalr pairs
    u64 ram_size = 1u << 20;
    u64 max_retired = 10'000;
};

struct Generated {
    core::MemoryImage mem;
    std::vector<u8> image;  // the flat binary placed at the base
    u64 entry = 0;
    u64 expected_retired = 0;  // from the vetting oracle pass
    u64 seed_used = 0;
};

namespace detail {

constexpr u64 kScratchOff = 0x40000;  // 256 KiB above the code
constexpr u8 kScratchReg = 5;

class Emitter {
  public:
    Emitter(builder::ProgramBuilder& pb, std::mt19937_64& rng) : pb_(pb), rng_(rng) {}

    u8 reg() {
        // x1 (ra) and x5 (scratch base) stay reserved.
        static const u8 pool[] = {3,  4,  6,  7,  8,  9,  10, 11, 12, 13, 14, 15, 16,
                                  17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29,
                                  30, 31, 2,  0};
        return pool[rng_() % std::size(pool)];
    }
    u8 wreg() {  // writable target (skip x0 to keep the op observable, mostly)
        u8 r = reg();
        return r == 0 ? u8(6) : r;
    }

    void alu_op(u8 forbidden = 0) {
        using isa::Kind;
        static const Kind reg3[] = {Kind::ADD,  Kind::SUB,  Kind::SLL, Kind::SLT,
                                    Kind::SLTU, Kind::XOR,  Kind::SRL, Kind::SRA,
                                    Kind::OR,   Kind::AND,  Kind::ADDW, Kind::SUBW,
                                    Kind::SLLW, Kind::SRLW, Kind::SRAW};
        static const Kind immk[] = {Kind::ADDI, Kind::SLTI, Kind::SLTIU, Kind::XORI,
                                    Kind::ORI,  Kind::ANDI, Kind::ADDIW};
        static const Kind shf[] = {Kind::SLLI, Kind::SRLI, Kind::SRAI,
                                   Kind::SLLIW, Kind::SRLIW, Kind::SRAIW};
        u8 rd = wreg();
        while (rd == forbidden || rd == detail::kScratchReg) rd = wreg();
        switch (rng_() % 5) {
            case 0:
            case 1:
                pb_.op3(reg3[rng_() % std::size(reg3)], rd, reg(), reg());
                break;
            case 2:
                pb_.opi(immk[rng_() % std::size(immk)], rd, reg(),
                        static_cast<i64>(rng_() % 4096) - 2048);
                break;
            case 3: {
                const isa::Kind k = shf[rng_() % std::size(shf)];
                const bool word = k == isa::Kind::SLLIW || k == isa::Kind::SRLIW ||
                                  k == isa::Kind::SRAIW;
                pb_.opi(k, rd, reg(), static_cast<i64>(rng_() & (word ? 31 : 63)));
                break;
            }
            default:
                if (rng_() & 1) pb_.lui(rd, static_cast<i64>(sext((rng_() & 0xFFFFF) << 12, 32)));
                else pb_.emit({isa::Kind::AUIPC, rd, 0, 0,
                               static_cast<i64>(sext((rng_() & 0xFFFFF) << 12, 32)), 0});
                break;
        }
    }

    void mem_op(u8 forbidden = 0) {
        using isa::Kind;
        static const Kind loads[] = {Kind::LB, Kind::LH, Kind::LW, Kind::LD,
                                     Kind::LBU, Kind::LHU, Kind::LWU};
        static const Kind stores[] = {Kind::SB, Kind::SH, Kind::SW, Kind::SD};
        static const unsigned sizes_l[] = {1, 2, 4, 8, 1, 2, 4};
        static const unsigned sizes_s[] = {1, 2, 4, 8};
        if (rng_() & 1) {
            const unsigned i = rng_() % std::size(loads);
            const i64 off = aligned_off(sizes_l[i]);
            u8 rd = wreg();
            while (rd == forbidden || rd == detail::kScratchReg) rd = wreg();
            pb_.opi(loads[i], rd, detail::kScratchReg, off);
        } else {
            const unsigned i = rng_() % std::size(stores);
            pb_.emit({stores[i], 0, detail::kScratchReg, reg(), aligned_off(sizes_s[i]), 0});
        }
    }

    void op(u8 forbidden = 0) {
        const unsigned roll = rng_() % 100;
        if (roll < 60) alu_op(forbidden);
        else if (roll < 95) mem_op(forbidden);
        else pb_.emit({isa::Kind::FENCE, 0, 0, 0, 0, 0});
    }

  private:
    i64 aligned_off(unsigned size) {
        return static_cast<i64>((rng_() % (2000 / size)) * size);
    }
    builder::ProgramBuilder& pb_;
    std::mt19937_64& rng_;
};

inline void emit_program(builder::ProgramBuilder& pb, std::mt19937_64& rng,
                         const GenOptions& opt) {
    Emitter em(pb, rng);
    // Scratch window pointer and a few seeded registers.
    pb.li(kScratchReg, pb.base() + kScratchOff);
    for (u8 r : {6, 7, 8, 9, 10, 11}) pb.li(r, rng());

    std::vector<builder::ProgramBuilder::Label> functions;
    const unsigned nfuncs = opt.calls ? 1 + rng() % 2 : 0;
    for (unsigned i = 0; i < nfuncs; ++i) functions.push_back(pb.new_label());

    for (unsigned b = 0; b < opt.blocks; ++b) {
        switch (rng() % (opt.loops ? 4 : 2)) {
            case 0:  // straight-line chunk
            case 1: {
                const unsigned len = 4 + rng() % 12;
                for (unsigned i = 0; i < len; ++i) em.op();
                break;
            }
            case 2: {  // bounded loop
                const u8 cnt = static_cast<u8>(26 + rng() % 4);  // x26..x29
                const unsigned trips = 1 + rng() % 8;
                const unsigned body = 3 + rng() % 8;
                pb.li(cnt, trips);
                const auto head = pb.bind_here();
                for (unsigned i = 0; i < body; ++i) em.op(cnt);
                pb.addi(cnt, cnt, -1);
                pb.bne(cnt, 0, head);
                break;
            }
            default: {  // forward branch over a small chunk
                using isa::Kind;
                static const Kind branches[] = {Kind::BEQ, Kind::BNE, Kind::BLT,
                                                Kind::BGE, Kind::BLTU, Kind::BGEU};
                const auto skip = pb.new_label();
                pb.branch(branches[rng() % std::size(branches)], em.reg(), em.reg(), skip);
                const unsigned len = 1 + rng() % 4;
                for (unsigned i = 0; i < len; ++i) em.op();
                pb.bind(skip);
                break;
            }
        }
        if (!functions.empty() && rng() % 3 == 0) {
            pb.jal(1, functions[rng() % functions.size()]);
        }
    }
    pb.ebreak();

    // Leaf functions after the halt: a few ops, then return.
    for (auto f : functions) {
        pb.bind(f);
        const unsigned len = 2 + rng() % 5;
        for (unsigned i = 0; i < len; ++i) em.op(1);
        pb.ret();
    }
}

}  // namespace detail

// Builds a random program and vets it against the oracle (halts, no faults,
// within the retired-op bound), retrying derived seeds until one passes.
inline Generated random_program(const GenOptions& opt) {
    u64 seed = opt.seed;
    for (int attempt = 0; attempt < 64; ++attempt, seed = seed * 6364136223846793005ull + 1442695040888963407ull) {
        std::mt19937_64 rng(seed);
        builder::ProgramBuilder pb(core::kDefaultBase);
        detail::emit_program(pb, rng, opt);
        core::MemoryImage mem(core::kDefaultBase, static_cast<size_t>(opt.ram_size));
        try {
            std::vector<u8> image = pb.build();
            mem.place(core::kDefaultBase, image);
            const core::OracleResult vet =
                core::oracle_run(mem, core::kDefaultBase, nullptr, {opt.max_retired});
            Generated out;
            out.mem = std::move(mem);
            out.image = std::move(image);
            out.entry = core::kDefaultBase;
            out.expected_retired = vet.retired;
            out.seed_used = seed;
            return out;
        } catch (const SimError&) {
            continue;  // fell off the end, faulted, or ran too long; next seed
        }
    }
    throw SimError("random_program: no viable program after 64 attempts for seed " +
                   std::to_string(opt.seed));
}

}  // namespace udec::gen
