#pragma once

// Program loading: flat binaries (placed at the RAM base, entry = base) and
// minimal static ELF64 executables (PT_LOAD segments honored, entry from the
// header).

#include <cstdio>
#include <string>
#include <vector>

#include "udec/common.hpp"
#include "udec/core.hpp"

namespace udec::loader {

struct Program {
    core::MemoryImage mem;
    u64 entry = 0;
};

inline std::vector<u8> read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw LoadError("cannot open " + path);
    std::vector<u8> data;
    u8 buf[65536];
    size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) data.insert(data.end(), buf, buf + got);
    std::fclose(f);
    return data;
}

inline void write_file(const std::string& path, const std::vector<u8>& data) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw LoadError("cannot open " + path + " for writing");
    const size_t written = data.empty() ? 0 : std::fwrite(data.data(), 1, data.size(), f);
    std::fclose(f);
    if (written != data.size()) throw LoadError("short write to " + path);
}

inline Program load_flat(const std::vector<u8>& image, u64 base = core::kDefaultBase,
                         u64 ram_size = core::kDefaultRamSize) {
    if (image.size() > ram_size) throw LoadError("flat image larger than RAM");
    Program p;
    p.mem = core::MemoryImage(base, static_cast<size_t>(ram_size));
    p.mem.place(base, image);
    p.entry = base;
    return p;
}

namespace elf {
constexpr u16 kMachineRiscv = 243;

inline u16 rd16(const std::vector<u8>& d, size_t off) {
    return u16(d[off]) | (u16(d[off + 1]) << 8);
}
inline u32 rd32(const std::vector<u8>& d, size_t off) {
    return u32(d[off]) | (u32(d[off + 1]) << 8) | (u32(d[off + 2]) << 16) | (u32(d[off + 3]) << 24);
}
inline u64 rd64(const std::vector<u8>& d, size_t off) {
    return u64(rd32(d, off)) | (u64(rd32(d, off + 4)) << 32);
}
}  // namespace elf

inline bool looks_like_elf(const std::vector<u8>& d) {
    return d.size() >= 4 && d[0] == 0x7F && d[1] == 'E' && d[2] == 'L' && d[3] == 'F';
}

inline Program load_elf(const std::vector<u8>& d, u64 base = core::kDefaultBase,
                        u64 ram_size = core::kDefaultRamSize) {
    using namespace elf;
    if (d.size() < 64) throw LoadError("elf header truncated");
    if (!looks_like_elf(d)) throw LoadError("not an elf file");
    if (d[4] != 2) throw LoadError("only 64-bit elf is supported");
    if (d[5] != 1) throw LoadError("only little-endian elf is supported");
    if (rd16(d, 18) != kMachineRiscv) throw LoadError("elf machine is not RISC-V");

    Program p;
    p.mem = core::MemoryImage(base, static_cast<size_t>(ram_size));
    p.entry = rd64(d, 24);

    const u64 phoff = rd64(d, 32);
    const u16 phentsize = rd16(d, 54);
    const u16 phnum = rd16(d, 56);
    if (phentsize < 56) throw LoadError("bad program header entry size");
    for (u16 i = 0; i < phnum; ++i) {
        const size_t off = static_cast<size_t>(phoff) + size_t(i) * phentsize;
        if (off + 56 > d.size()) throw LoadError("program header table truncated");
        const u32 type = rd32(d, off);
        if (type != 1) continue;  // PT_LOAD
        const u64 p_offset = rd64(d, off + 8);
        const u64 p_vaddr = rd64(d, off + 16);
        const u64 p_filesz = rd64(d, off + 32);
        const u64 p_memsz = rd64(d, off + 40);
        if (p_offset + p_filesz > d.size()) throw LoadError("load segment exceeds file");
        if (!p.mem.contains(p_vaddr, 1) || p_vaddr + p_memsz > p.mem.end())
            throw LoadError("load segment outside RAM window");
        std::vector<u8> seg(d.begin() + static_cast<long>(p_offset),
                            d.begin() + static_cast<long>(p_offset + p_filesz));
        p.mem.place(p_vaddr, seg);  // .bss tail is already zero
    }
    if (!p.mem.contains(p.entry, 4)) throw LoadError("entry point outside RAM window");
    return p;
}

inline Program load_program(const std::string& path, u64 base = core::kDefaultBase,
                            u64 ram_size = core::kDefaultRamSize) {
    const std::vector<u8> data = read_file(path);
    return looks_like_elf(data) ? load_elf(data, base, ram_size)
                                : load_flat(data, base, ram_size);
}

}  // namespace udec::loader
