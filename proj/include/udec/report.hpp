#pragma once

// Run reports and the bench-suite runner shared by the CLI and the acceptance
// suite. JSON output is stable-keyed; the bench report carries no host timing
// so repeated runs are byte-identical.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "udec/core.hpp"
#include "udec/loader.hpp"
#include "udec/pipeline.hpp"
#include "udec/suite.hpp"

namespace udec::report {

using ordered_json = nlohmann::ordered_json;

struct RunReport {
    std::string program;
    std::string rom;  // empty when none loaded
    pipeline::PipelineConfig config{};
    pipeline::CycleStats stats{};
    u8 exit_code = 0;
    double wall_ms = 0.0;
};

inline ordered_json config_json(const pipeline::PipelineConfig& c) {
    return ordered_json{{"udec_enabled", c.udec_enabled},
                        {"icache",
                         {{"enabled", c.icache.enabled},
                          {"line_size_instrs", c.icache.line_size_instrs},
                          {"miss_penalty_cycles", c.icache.miss_penalty_cycles}}},
                        {"lsu_latency_cycles", c.lsu_latency_cycles},
                        {"max_cycles", c.max_cycles}};
}

inline ordered_json stats_json(const pipeline::CycleStats& s) {
    return ordered_json{{"cycles", s.cycles},
                        {"instret", s.retired_ops},
                        {"macro_expansions", s.macro_expansions},
                        {"icache_hits", s.icache_hits},
                        {"icache_misses", s.icache_misses},
                        {"redirects_taken", s.redirects_taken},
                        {"flush_cycles", s.flush_cycles}};
}

inline ordered_json to_json(const RunReport& r) {
    ordered_json j{{"program", r.program}, {"rom", r.rom}, {"config", config_json(r.config)}};
    j.update(stats_json(r.stats));
    j["exit_code"] = r.exit_code;
    j["wall_ms"] = r.wall_ms;
    return j;
}

inline std::string to_text(const RunReport& r) {
    std::ostringstream out;
    out << "program:          " << r.program << "\n";
    if (!r.rom.empty()) out << "rom:              " << r.rom << "\n";
    out << "udec:             " << (r.config.udec_enabled ? "enabled" : "disabled") << "\n"
        << "icache:           "
        << (r.config.icache.enabled
                ? ("line=" + std::to_string(r.config.icache.line_size_instrs) +
                   " instrs, miss=" + std::to_string(r.config.icache.miss_penalty_cycles) +
                   " cycles")
                : "disabled")
        << "\n"
        << "cycles:           " << r.stats.cycles << "\n"
        << "instret:          " << r.stats.retired_ops << "\n"
        << "macro_expansions: " << r.stats.macro_expansions << "\n"
        << "icache:           " << r.stats.icache_hits << " hits, " << r.stats.icache_misses
        << " misses\n"
        << "redirects:        " << r.stats.redirects_taken << " (" << r.stats.flush_cycles
        << " flush cycles)\n"
        << "exit code:        " << unsigned(r.exit_code) << "\n"
        << "wall clock:       " << r.wall_ms << " ms\n";
    return out.str();
}

// --- bench suite ---------------------------------------------------------------------

struct BenchRow {
    std::string name;
    bool uses_macros = false;
    // Macro-free rows: baseline + udec-unused. Macro rows: udec-used only.
    std::optional<pipeline::CycleStats> baseline;
    std::optional<pipeline::CycleStats> udec_unused;
    std::optional<pipeline::CycleStats> udec_used;

    double overhead_pct() const {
        if (!baseline || !udec_unused) return 0.0;
        return 100.0 * (double(udec_unused->cycles) - double(baseline->cycles)) /
               double(baseline->cycles);
    }
};

struct PairSummary {
    u64 inline_baseline_cycles = 0;
    u64 macro_udec_cycles = 0;
    double reduction_pct = 0.0;  // positive = macro version faster
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::optional<PairSummary> sbox_pair;
    bool icache_enabled = true;
};

struct BenchOptions {
    bool icache_enabled = true;
    u64 max_cycles = 200'000'000;
};

inline pipeline::PipelineConfig bench_config(bool udec, const BenchOptions& opt) {
    pipeline::PipelineConfig cfg;
    cfg.udec_enabled = udec;
    cfg.icache.enabled = opt.icache_enabled;
    cfg.max_cycles = opt.max_cycles;
    return cfg;
}

inline BenchReport run_suite(const suite::Suite& s, const BenchOptions& opt = {}) {
    BenchReport rep;
    rep.icache_enabled = opt.icache_enabled;
    u64 inline_base = 0, macro_udec = 0;
    for (const suite::Benchmark& b : s.benches) {
        BenchRow row;
        row.name = b.name;
        row.uses_macros = b.uses_macros;
        const loader::Program prog = loader::load_flat(b.image);
        if (b.uses_macros) {
            pipeline::Machine m(prog.mem, prog.entry, &s.rom, bench_config(true, opt));
            row.udec_used = m.run().stats;
        } else {
            pipeline::Machine mb(prog.mem, prog.entry, nullptr, bench_config(false, opt));
            row.baseline = mb.run().stats;
            pipeline::Machine mu(prog.mem, prog.entry, nullptr, bench_config(true, opt));
            row.udec_unused = mu.run().stats;
        }
        if (row.name == "sbox-macro" && row.udec_used) macro_udec = row.udec_used->cycles;
        if (row.name == "sbox-inline" && row.baseline) inline_base = row.baseline->cycles;
        rep.rows.push_back(std::move(row));
    }
    if (inline_base && macro_udec) {
        PairSummary p;
        p.inline_baseline_cycles = inline_base;
        p.macro_udec_cycles = macro_udec;
        p.reduction_pct = 100.0 * (double(inline_base) - double(macro_udec)) / double(inline_base);
        rep.sbox_pair = p;
    }
    return rep;
}

inline ordered_json to_json(const BenchReport& rep) {
    ordered_json rows = ordered_json::array();
    for (const BenchRow& r : rep.rows) {
        ordered_json j{{"name", r.name}, {"uses_macros", r.uses_macros}};
        if (r.baseline) j["baseline"] = stats_json(*r.baseline);
        if (r.udec_unused) {
            j["udec_unused"] = stats_json(*r.udec_unused);
            j["overhead_pct"] = r.overhead_pct();
            j["delta_cycles"] =
                static_cast<i64>(r.udec_unused->cycles) - static_cast<i64>(r.baseline->cycles);
        }
        if (r.udec_used) j["udec_used"] = stats_json(*r.udec_used);
        rows.push_back(std::move(j));
    }
    ordered_json j{{"icache_enabled", rep.icache_enabled}, {"suite", std::move(rows)}};
    if (rep.sbox_pair) {
        j["sbox_pair"] = ordered_json{{"inline_baseline_cycles", rep.sbox_pair->inline_baseline_cycles},
                                      {"macro_udec_cycles", rep.sbox_pair->macro_udec_cycles},
                                      {"reduction_pct", rep.sbox_pair->reduction_pct}};
    }
    return j;
}

inline std::string to_text(const BenchReport& rep) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %12s %12s %12s %10s %10s\n", "benchmark",
                  "baseline", "udec-unused", "udec-used", "overhead%", "redirects");
    out << line;
    for (const BenchRow& r : rep.rows) {
        std::string base = r.baseline ? std::to_string(r.baseline->cycles) : "-";
        std::string unused = r.udec_unused ? std::to_string(r.udec_unused->cycles) : "-";
        std::string used = r.udec_used ? std::to_string(r.udec_used->cycles) : "-";
        std::string ovh = "-";
        if (r.baseline && r.udec_unused) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", r.overhead_pct());
            ovh = buf;
        }
        const u64 redirects = r.baseline     ? r.baseline->redirects_taken
                              : r.udec_used  ? r.udec_used->redirects_taken
                                             : 0;
        std::snprintf(line, sizeof line, "%-14s %12s %12s %12s %10s %10llu\n", r.name.c_str(),
                      base.c_str(), unused.c_str(), used.c_str(), ovh.c_str(),
                      static_cast<unsigned long long>(redirects));
        out << line;
    }
    if (rep.sbox_pair) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "\nsbox pair: inline/baseline %llu cycles, macro/udec %llu cycles "
                      "(%.4f%% reduction)\n",
                      static_cast<unsigned long long>(rep.sbox_pair->inline_baseline_cycles),
                      static_cast<unsigned long long>(rep.sbox_pair->macro_udec_cycles),
                      rep.sbox_pair->reduction_pct);
        out << buf;
    }
    return out.str();
}

}  // namespace udec::report
