#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace udec {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i8 = std::int8_t;
using i16 = std::int16_t;
using i32 = std::int32_t;
using i64 = std::int64_t;

// Base class for every error the simulator raises on purpose.
struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IllegalInstruction : SimError {
    u32 word;
    u64 pc;
    IllegalInstruction(u32 w, u64 at)
        : SimError("illegal instruction " + hex32(w) + " at pc " + hex64(at)), word(w), pc(at) {}
    static std::string hex32(u32 v);
    static std::string hex64(u64 v);
};

struct MacroWithoutUdec : SimError {
    u64 pc;
    unsigned idx;
    MacroWithoutUdec(u64 at, unsigned i)
        : SimError("macro-instruction idx=" + std::to_string(i) + " at pc " +
                   IllegalInstruction::hex64(at) + " requires the micro-decoder and a loaded ROM"),
          pc(at), idx(i) {}
};

struct MemoryFault : SimError {
    u64 addr;
    unsigned size;
    MemoryFault(u64 a, unsigned sz, const std::string& what)
        : SimError("memory fault: " + what + " at " + IllegalInstruction::hex64(a) +
                   " (size " + std::to_string(sz) + ")"),
          addr(a), size(sz) {}
};

struct LimitExceeded : SimError {
    explicit LimitExceeded(const std::string& msg) : SimError("limit exceeded: " + msg) {}
};

struct EmptySequence : SimError {
    unsigned idx;
    explicit EmptySequence(unsigned i)
        : SimError("macro idx=" + std::to_string(i) + " points at an empty ROM sequence (first word fu=NONE)"),
          idx(i) {}
};

struct RangeError : SimError {
    explicit RangeError(const std::string& msg) : SimError("range error: " + msg) {}
};

struct UnknownFu : SimError {
    unsigned code;
    explicit UnknownFu(unsigned c) : SimError("unknown fu code " + std::to_string(c)), code(c) {}
};

struct UnknownOpcode : SimError {
    unsigned code;
    explicit UnknownOpcode(unsigned c) : SimError("unknown micro opcode 0x" + hex8(c)), code(c) {}
    static std::string hex8(unsigned v);
};

struct StateMismatch : SimError {
    explicit StateMismatch(const std::string& msg) : SimError("state mismatch: " + msg) {}
};

// ROM file errors.
struct BadMagic : SimError {
    explicit BadMagic(const std::string& msg) : SimError("bad magic: " + msg) {}
};
struct VersionMismatch : SimError {
    explicit VersionMismatch(const std::string& msg) : SimError("version mismatch: " + msg) {}
};
struct TruncatedFile : SimError {
    explicit TruncatedFile(const std::string& msg) : SimError("truncated file: " + msg) {}
};

// Assembler diagnostics carry a 1-based source position.
struct AsmError : SimError {
    int line, col;
    AsmError(int l, int c, const std::string& msg)
        : SimError("line " + std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}
};
struct ParseError : AsmError {
    using AsmError::AsmError;
};
struct DuplicateIdx : AsmError {
    using AsmError::AsmError;
};
struct SequenceTooLong : AsmError {
    using AsmError::AsmError;
};
struct ImmOutOfRange : AsmError {
    using AsmError::AsmError;
};

struct LoadError : SimError {
    explicit LoadError(const std::string& msg) : SimError("load error: " + msg) {}
};

inline std::string to_hex(u64 v, int digits) {
    static const char* d = "0123456789abcdef";
    std::string s(static_cast<size_t>(digits), '0');
    for (int i = digits - 1; i >= 0; --i) {
        s[static_cast<size_t>(i)] = d[v & 0xF];
        v >>= 4;
    }
    return s;
}

inline std::string IllegalInstruction::hex32(u32 v) { return "0x" + to_hex(v, 8); }
inline std::string IllegalInstruction::hex64(u64 v) { return "0x" + to_hex(v, 16); }
inline std::string UnknownOpcode::hex8(unsigned v) { return to_hex(v, 2); }

// Sign-extend the low `bits` bits of `value` to 64 bits.
inline constexpr u64 sext(u64 value, unsigned bits) {
    const unsigned shift = 64 - bits;
    return static_cast<u64>(static_cast<i64>(value << shift) >> shift);
}

// Extract bits [hi:lo] of a 32-bit word.
inline constexpr u32 bits(u32 word, unsigned hi, unsigned lo) {
    return (word >> lo) & ((hi - lo == 31) ? 0xFFFFFFFFu : ((1u << (hi - lo + 1)) - 1u));
}

inline constexpr bool is_pow2(u64 v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace udec
