#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lars/error.hpp"
#include "lars/time.hpp"

namespace lars {

// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

struct CacheGeometry {
    std::uint64_t capacity_bytes = 32768;
    std::uint64_t line_size_bytes = 64;
    std::uint32_t associativity = 4;

    std::uint64_t num_sets() const { return capacity_bytes / (line_size_bytes * associativity); }
    std::uint64_t num_blocks() const { return capacity_bytes / line_size_bytes; }

    bool operator==(const CacheGeometry&) const = default;
};

// One row of the device parameter table: per-access energies, leakage, latencies.
struct EnergyParams {
    double write_energy_nj = 0.0;
    double read_energy_nj = 0.0;
    double leakage_mw = 0.0;
    std::uint32_t hit_latency_cycles = 0;
    std::uint32_t write_latency_cycles = 0;

    bool operator==(const EnergyParams&) const = default;
};

// Retention times in seconds, strictly descending. Index 0 is the largest
// (slowest, highest write energy) unit; the last index is the smallest.
struct RetentionSet {
    std::vector<double> retentions_s;

    int size() const { return static_cast<int>(retentions_s.size()); }
    double at(int i) const { return retentions_s.at(static_cast<std::size_t>(i)); }
    int index_of(double retention_s, double rel_tol = 1e-9) const {
        for (int i = 0; i < size(); ++i)
            if (std::abs(retentions_s[static_cast<std::size_t>(i)] - retention_s) <=
                rel_tol * retentions_s[static_cast<std::size_t>(i)])
                return i;
        return -1;
    }

    bool operator==(const RetentionSet&) const = default;
};

struct SimClock {
    double frequency_hz = 2e9;
    std::uint32_t monitor_divisor_n = 10;  // monitor clock ticks per retention time

    double cycle_s() const { return 1.0 / frequency_hz; }
    double monitor_period_s(double retention_s) const {
        return retention_s / static_cast<double>(monitor_divisor_n);
    }
    // Width of the per-block monitor counter.
    std::uint32_t counter_bits() const {
        return static_cast<std::uint32_t>(std::ceil(std::log2(static_cast<double>(monitor_divisor_n))));
    }
    TimePs cycles_to_ps(std::uint64_t cycles) const {
        return seconds_to_ps(static_cast<double>(cycles) / frequency_hz);
    }

    bool operator==(const SimClock&) const = default;
};

enum class SchemeKind { SRAM, STT_FIXED, DRS_PERFECT, LARS, LARS_DRS_SYNERGY };

enum class LeakageScope { ActiveUnitOnly, AllUnits };

struct SchemeConfig {
    SchemeKind kind = SchemeKind::LARS;
    std::optional<int> fixed_retention_index;  // required by STT_FIXED and DRS_PERFECT
    std::uint32_t miss_penalty_cycles = 100;   // free modeling parameter, not from the device table
    EnergyParams buffer_energy;                // DRS refresh buffer; defaults to the SRAM row
    double buffer_leakage_mw = 1.0;
    LeakageScope leakage_scope = LeakageScope::ActiveUnitOnly;
    double line_transfer_weight = 1.0;  // scales linefill/writeback array transfers
    std::uint32_t migration_extra_cycles_per_block = 0;
    double migration_extra_nj_per_block = 0.0;
    bool cold_switch = false;   // invalidate (flushing dirty lines) instead of migrating
    bool exact_expiry = false;  // expire at exactly last_write + retention instead of monitor-tick quantization
    double all_units_leakage_mw = 0.0;  // sum over the retention set; filled in by validation

    bool operator==(const SchemeConfig&) const = default;
};

enum class TunerAlgo { Sampling, Optimal, Miss, MissLB };

enum class Objective { Energy, Latency, EDP };

struct TunerConfig {
    TunerAlgo algo = TunerAlgo::Optimal;
    Objective objective = Objective::EDP;
    std::uint64_t tuning_interval_instructions = 100000;  // desk-scale stand-in for 100M
    double edp_degrade_threshold = 0.05;
    double miss_degrade_threshold = 0.05;
    double lb_missrate_floor = 0.0005;  // 0.05%
    bool lb_enabled = false;
    bool checking_enabled = true;

    bool operator==(const TunerConfig&) const = default;
};

struct Config {
    CacheGeometry geometry;
    SimClock clock;
    RetentionSet retentions;
    std::vector<EnergyParams> unit_params;  // parallel to retentions
    EnergyParams sram;
    SchemeConfig scheme;
    TunerConfig tuner;

    const EnergyParams& unit(int retention_index) const {
        return unit_params.at(static_cast<std::size_t>(retention_index));
    }

    bool operator==(const Config&) const = default;
};

inline const char* scheme_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::SRAM: return "sram";
        case SchemeKind::STT_FIXED: return "stt";
        case SchemeKind::DRS_PERFECT: return "drs";
        case SchemeKind::LARS: return "lars";
        case SchemeKind::LARS_DRS_SYNERGY: return "synergy";
    }
    return "?";
}

inline SchemeKind parse_scheme(const std::string& s) {
    if (s == "sram") return SchemeKind::SRAM;
    if (s == "stt" || s == "stt_fixed") return SchemeKind::STT_FIXED;
    if (s == "drs" || s == "drs_perfect") return SchemeKind::DRS_PERFECT;
    if (s == "lars") return SchemeKind::LARS;
    if (s == "synergy" || s == "lars_drs") return SchemeKind::LARS_DRS_SYNERGY;
    throw ValidationError("scheme: unknown value '" + s + "'");
}

inline const char* tuner_name(TunerAlgo a) {
    switch (a) {
        case TunerAlgo::Sampling: return "sampling";
        case TunerAlgo::Optimal: return "optimal";
        case TunerAlgo::Miss: return "miss";
        case TunerAlgo::MissLB: return "miss-lb";
    }
    return "?";
}

inline TunerAlgo parse_tuner(const std::string& s) {
    if (s == "sampling") return TunerAlgo::Sampling;
    if (s == "optimal") return TunerAlgo::Optimal;
    if (s == "miss") return TunerAlgo::Miss;
    if (s == "miss-lb" || s == "miss_lb") return TunerAlgo::MissLB;
    throw ValidationError("tuner: unknown value '" + s + "'");
}

inline const char* objective_name(Objective o) {
    switch (o) {
        case Objective::Energy: return "energy";
        case Objective::Latency: return "latency";
        case Objective::EDP: return "edp";
    }
    return "?";
}

inline Objective parse_objective(const std::string& s) {
    if (s == "energy") return Objective::Energy;
    if (s == "latency") return Objective::Latency;
    if (s == "edp") return Objective::EDP;
    throw ValidationError("objective: unknown value '" + s + "'");
}

namespace detail {

inline bool is_pow2(std::uint64_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

inline void validate_energy_params(const EnergyParams& p, const std::string& who) {
    if (!(p.write_energy_nj > 0)) throw ValidationError(who + ".write_energy_nj: must be > 0");
    if (!(p.read_energy_nj > 0)) throw ValidationError(who + ".read_energy_nj: must be > 0");
    if (!(p.leakage_mw > 0)) throw ValidationError(who + ".leakage_mw: must be > 0");
    if (p.hit_latency_cycles == 0) throw ValidationError(who + ".hit_latency_cycles: must be > 0");
    if (p.write_latency_cycles == 0) throw ValidationError(who + ".write_latency_cycles: must be > 0");
}

}  // namespace detail

// Checks every invariant and fills derived fields (all_units_leakage_mw).
inline void validate_config(Config& cfg) {
    const CacheGeometry& g = cfg.geometry;
    if (!detail::is_pow2(g.capacity_bytes)) throw ValidationError("cache.capacity_bytes: must be a power of two");
    if (!detail::is_pow2(g.line_size_bytes)) throw ValidationError("cache.line_size_bytes: must be a power of two");
    if (g.associativity < 1) throw ValidationError("cache.associativity: must be >= 1");
    if (g.capacity_bytes % (g.line_size_bytes * g.associativity) != 0 || g.num_sets() < 1)
        throw ValidationError("cache: capacity must be divisible by line_size * associativity");

    if (!(cfg.clock.frequency_hz > 0)) throw ValidationError("clock.frequency_hz: must be > 0");
    if (cfg.clock.monitor_divisor_n < 2) throw ValidationError("clock.monitor_divisor: must be >= 2");

    if (cfg.retentions.retentions_s.empty()) throw ValidationError("units: at least one retention unit required");
    if (cfg.retentions.size() != static_cast<int>(cfg.unit_params.size()))
        throw ValidationError("units: each retention must pair with exactly one parameter row");
    for (int i = 0; i < cfg.retentions.size(); ++i) {
        double r = cfg.retentions.at(i);
        if (!(r > 0) || std::isinf(r)) throw ValidationError("units.retention: must be positive and finite");
        if (i > 0 && !(cfg.retentions.at(i - 1) > r))
            throw ValidationError("units.retention: must be strictly decreasing");
        detail::validate_energy_params(cfg.unit_params[static_cast<std::size_t>(i)],
                                       "unit[" + format_duration_s(r) + "]");
    }
    detail::validate_energy_params(cfg.sram, "sram");
    detail::validate_energy_params(cfg.scheme.buffer_energy, "buffer");

    if (cfg.scheme.kind == SchemeKind::STT_FIXED || cfg.scheme.kind == SchemeKind::DRS_PERFECT) {
        if (!cfg.scheme.fixed_retention_index)
            throw ValidationError("scheme.fixed_retention: required for stt/drs schemes");
    }
    if (cfg.scheme.fixed_retention_index &&
        (*cfg.scheme.fixed_retention_index < 0 || *cfg.scheme.fixed_retention_index >= cfg.retentions.size()))
        throw ValidationError("scheme.fixed_retention: index out of range of the retention set");
    if (!(cfg.scheme.buffer_leakage_mw >= 0)) throw ValidationError("scheme.buffer_leakage_mw: must be >= 0");
    if (!(cfg.scheme.line_transfer_weight > 0)) throw ValidationError("scheme.line_transfer_weight: must be > 0");
    if (!(cfg.scheme.migration_extra_nj_per_block >= 0))
        throw ValidationError("scheme.migration_extra_nj_per_block: must be >= 0");

    const TunerConfig& t = cfg.tuner;
    if (t.tuning_interval_instructions < 1) throw ValidationError("tuner.interval: must be >= 1");
    auto in_01 = [](double v) { return v > 0 && v < 1; };
    if (!in_01(t.edp_degrade_threshold)) throw ValidationError("tuner.edp_degrade_threshold: must be in (0,1)");
    if (!in_01(t.miss_degrade_threshold)) throw ValidationError("tuner.miss_degrade_threshold: must be in (0,1)");
    if (!in_01(t.lb_missrate_floor)) throw ValidationError("tuner.lb_missrate_floor: must be in (0,1)");

    cfg.scheme.all_units_leakage_mw = 0.0;
    for (const EnergyParams& p : cfg.unit_params) cfg.scheme.all_units_leakage_mw += p.leakage_mw;
}

// Bundled default parameter set: ARM Cortex-A15-like 2 GHz system with a
// 32KB/64B/4-way cache, SRAM row and four STT-RAM retention units.
inline Config default_config() {
    Config cfg;
    cfg.geometry = {32768, 64, 4};
    cfg.clock = {2e9, 10};
    cfg.retentions.retentions_s = {100e-3, 10e-3, 1e-3, 100e-6};
    cfg.unit_params = {
        {0.101, 0.011, 1.753, 2, 7},  // 100 ms
        {0.076, 0.011, 1.753, 2, 5},  // 10 ms
        {0.056, 0.012, 1.753, 2, 4},  // 1 ms
        {0.040, 0.012, 1.753, 2, 3},  // 100 us
    };
    cfg.sram = {0.033, 0.033, 38.021, 3, 3};
    cfg.scheme.buffer_energy = cfg.sram;
    cfg.scheme.fixed_retention_index = 1;  // 10 ms, the conventional DRS base retention
    validate_config(cfg);
    return cfg;
}

// ---------------------------------------------------------------------------
// Config file format: flat INI-style sections of `key = value` lines.
// `#` starts a comment. Sections: [cache] [clock] [scheme] [tuner] [sram]
// [buffer] and one [unit] section per retention unit, listed in descending
// retention order. Any omitted section/key keeps its default value.
// ---------------------------------------------------------------------------

namespace detail {

struct IniSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
    int line = 0;
};

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<IniSection> parse_ini(std::istream& in, const std::string& origin) {
    std::vector<IniSection> sections;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            sections.push_back({trim(t.substr(1, t.size() - 2)), {}, lineno});
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        if (sections.empty())
            throw ParseError(origin + ":" + std::to_string(lineno) + ": entry before any [section]");
        sections.back().entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return sections;
}

inline double to_double(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double d = 0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ParseError(key + ": not a number: '" + v + "'");
    }
    if (pos != v.size()) throw ParseError(key + ": not a number: '" + v + "'");
    return d;
}

inline std::uint64_t to_u64(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    unsigned long long u = 0;
    try {
        u = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw ParseError(key + ": not an unsigned integer: '" + v + "'");
    }
    if (pos != v.size()) throw ParseError(key + ": not an unsigned integer: '" + v + "'");
    return u;
}

inline bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ParseError(key + ": not a boolean: '" + v + "'");
}

inline void apply_energy_params(EnergyParams& p, const std::string& key, const std::string& value,
                                const std::string& who, bool* handled) {
    *handled = true;
    if (key == "write_energy_nj")
        p.write_energy_nj = to_double(value, who + ".write_energy_nj");
    else if (key == "read_energy_nj")
        p.read_energy_nj = to_double(value, who + ".read_energy_nj");
    else if (key == "leakage_mw")
        p.leakage_mw = to_double(value, who + ".leakage_mw");
    else if (key == "hit_latency_cycles")
        p.hit_latency_cycles = static_cast<std::uint32_t>(to_u64(value, who + ".hit_latency_cycles"));
    else if (key == "write_latency_cycles")
        p.write_latency_cycles = static_cast<std::uint32_t>(to_u64(value, who + ".write_latency_cycles"));
    else
        *handled = false;
}

}  // namespace detail

inline Config parse_config(std::istream& in, const std::string& origin) {
    Config cfg = default_config();
    std::vector<detail::IniSection> sections = detail::parse_ini(in, origin);

    // The presence of any [unit] section replaces the whole default unit list.
    bool saw_unit = false;
    std::optional<double> fixed_retention_s;
    for (detail::IniSection& sec : sections) {
        if (sec.name == "unit" && !saw_unit) {
            cfg.retentions.retentions_s.clear();
            cfg.unit_params.clear();
            saw_unit = true;
        }
        if (sec.name == "cache") {
            for (auto& [k, v] : sec.entries) {
                if (k == "capacity_bytes")
                    cfg.geometry.capacity_bytes = detail::to_u64(v, "cache.capacity_bytes");
                else if (k == "line_size_bytes")
                    cfg.geometry.line_size_bytes = detail::to_u64(v, "cache.line_size_bytes");
                else if (k == "associativity")
                    cfg.geometry.associativity = static_cast<std::uint32_t>(detail::to_u64(v, "cache.associativity"));
                else
                    throw ParseError(origin + ": unknown key cache." + k);
            }
        } else if (sec.name == "clock") {
            for (auto& [k, v] : sec.entries) {
                if (k == "frequency_hz")
                    cfg.clock.frequency_hz = detail::to_double(v, "clock.frequency_hz");
                else if (k == "monitor_divisor")
                    cfg.clock.monitor_divisor_n = static_cast<std::uint32_t>(detail::to_u64(v, "clock.monitor_divisor"));
                else
                    throw ParseError(origin + ": unknown key clock." + k);
            }
        } else if (sec.name == "scheme") {
            for (auto& [k, v] : sec.entries) {
                if (k == "kind")
                    cfg.scheme.kind = parse_scheme(v);
                else if (k == "fixed_retention")
                    fixed_retention_s = parse_duration_s(v);
                else if (k == "miss_penalty_cycles")
                    cfg.scheme.miss_penalty_cycles =
                        static_cast<std::uint32_t>(detail::to_u64(v, "scheme.miss_penalty_cycles"));
                else if (k == "buffer_leakage_mw")
                    cfg.scheme.buffer_leakage_mw = detail::to_double(v, "scheme.buffer_leakage_mw");
                else if (k == "leakage_scope") {
                    if (v == "active_unit")
                        cfg.scheme.leakage_scope = LeakageScope::ActiveUnitOnly;
                    else if (v == "all_units")
                        cfg.scheme.leakage_scope = LeakageScope::AllUnits;
                    else
                        throw ParseError("scheme.leakage_scope: expected active_unit or all_units");
                } else if (k == "line_transfer_weight")
                    cfg.scheme.line_transfer_weight = detail::to_double(v, "scheme.line_transfer_weight");
                else if (k == "migration_extra_cycles_per_block")
                    cfg.scheme.migration_extra_cycles_per_block =
                        static_cast<std::uint32_t>(detail::to_u64(v, "scheme.migration_extra_cycles_per_block"));
                else if (k == "migration_extra_nj_per_block")
                    cfg.scheme.migration_extra_nj_per_block =
                        detail::to_double(v, "scheme.migration_extra_nj_per_block");
                else if (k == "cold_switch")
                    cfg.scheme.cold_switch = detail::to_bool(v, "scheme.cold_switch");
                else if (k == "exact_expiry")
                    cfg.scheme.exact_expiry = detail::to_bool(v, "scheme.exact_expiry");
                else
                    throw ParseError(origin + ": unknown key scheme." + k);
            }
        } else if (sec.name == "tuner") {
            for (auto& [k, v] : sec.entries) {
                if (k == "algo")
                    cfg.tuner.algo = parse_tuner(v);
                else if (k == "objective")
                    cfg.tuner.objective = parse_objective(v);
                else if (k == "interval_instructions")
                    cfg.tuner.tuning_interval_instructions = detail::to_u64(v, "tuner.interval_instructions");
                else if (k == "edp_degrade_threshold")
                    cfg.tuner.edp_degrade_threshold = detail::to_double(v, "tuner.edp_degrade_threshold");
                else if (k == "miss_degrade_threshold")
                    cfg.tuner.miss_degrade_threshold = detail::to_double(v, "tuner.miss_degrade_threshold");
                else if (k == "lb_missrate_floor")
                    cfg.tuner.lb_missrate_floor = detail::to_double(v, "tuner.lb_missrate_floor");
                else if (k == "checking_enabled")
                    cfg.tuner.checking_enabled = detail::to_bool(v, "tuner.checking_enabled");
                else
                    throw ParseError(origin + ": unknown key tuner." + k);
            }
        } else if (sec.name == "sram" || sec.name == "buffer") {
            EnergyParams& p = sec.name == "sram" ? cfg.sram : cfg.scheme.buffer_energy;
            for (auto& [k, v] : sec.entries) {
                bool handled = false;
                detail::apply_energy_params(p, k, v, sec.name, &handled);
                if (!handled) throw ParseError(origin + ": unknown key " + sec.name + "." + k);
            }
        } else if (sec.name == "unit") {
            EnergyParams p;
            std::optional<double> retention;
            for (auto& [k, v] : sec.entries) {
                if (k == "retention") {
                    retention = parse_duration_s(v);
                    continue;
                }
                bool handled = false;
                detail::apply_energy_params(p, k, v, "unit", &handled);
                if (!handled) throw ParseError(origin + ": unknown key unit." + k);
            }
            if (!retention)
                throw ParseError(origin + ":" + std::to_string(sec.line) + ": [unit] missing retention");
            cfg.retentions.retentions_s.push_back(*retention);
            cfg.unit_params.push_back(p);
        } else {
            throw ParseError(origin + ":" + std::to_string(sec.line) + ": unknown section [" + sec.name + "]");
        }
    }

    // [buffer] absent: keep tracking the (possibly overridden) SRAM row.
    bool saw_buffer = std::any_of(sections.begin(), sections.end(),
                                  [](const detail::IniSection& s) { return s.name == "buffer"; });
    if (!saw_buffer) cfg.scheme.buffer_energy = cfg.sram;

    if (fixed_retention_s) {
        int idx = cfg.retentions.index_of(*fixed_retention_s);
        if (idx < 0)
            throw ValidationError("scheme.fixed_retention: " + format_duration_s(*fixed_retention_s) +
                                  " is not in the retention set");
        cfg.scheme.fixed_retention_index = idx;
    } else if (saw_unit) {
        // Default index may be stale after a custom unit list; re-point at the
        // second-largest retention when it exists, else the largest.
        cfg.scheme.fixed_retention_index = cfg.retentions.size() > 1 ? 1 : 0;
    }

    validate_config(cfg);
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    return parse_config(in, path);
}

inline std::string serialize_config(const Config& cfg) {
    std::ostringstream out;
    auto num = [](double v) { return format_double(v); };
    out << "[cache]\n"
        << "capacity_bytes = " << cfg.geometry.capacity_bytes << "\n"
        << "line_size_bytes = " << cfg.geometry.line_size_bytes << "\n"
        << "associativity = " << cfg.geometry.associativity << "\n\n";
    out << "[clock]\n"
        << "frequency_hz = " << num(cfg.clock.frequency_hz) << "\n"
        << "monitor_divisor = " << cfg.clock.monitor_divisor_n << "\n\n";
    out << "[scheme]\n"
        << "kind = " << scheme_name(cfg.scheme.kind) << "\n";
    if (cfg.scheme.fixed_retention_index)
        out << "fixed_retention = " << num(cfg.retentions.at(*cfg.scheme.fixed_retention_index)) << "s\n";
    out << "miss_penalty_cycles = " << cfg.scheme.miss_penalty_cycles << "\n"
        << "buffer_leakage_mw = " << num(cfg.scheme.buffer_leakage_mw) << "\n"
        << "leakage_scope = "
        << (cfg.scheme.leakage_scope == LeakageScope::ActiveUnitOnly ? "active_unit" : "all_units") << "\n"
        << "line_transfer_weight = " << num(cfg.scheme.line_transfer_weight) << "\n"
        << "migration_extra_cycles_per_block = " << cfg.scheme.migration_extra_cycles_per_block << "\n"
        << "migration_extra_nj_per_block = " << num(cfg.scheme.migration_extra_nj_per_block) << "\n"
        << "cold_switch = " << (cfg.scheme.cold_switch ? "true" : "false") << "\n"
        << "exact_expiry = " << (cfg.scheme.exact_expiry ? "true" : "false") << "\n\n";
    out << "[tuner]\n"
        << "algo = " << tuner_name(cfg.tuner.algo) << "\n"
        << "objective = " << objective_name(cfg.tuner.objective) << "\n"
        << "interval_instructions = " << cfg.tuner.tuning_interval_instructions << "\n"
        << "edp_degrade_threshold = " << num(cfg.tuner.edp_degrade_threshold) << "\n"
        << "miss_degrade_threshold = " << num(cfg.tuner.miss_degrade_threshold) << "\n"
        << "lb_missrate_floor = " << num(cfg.tuner.lb_missrate_floor) << "\n"
        << "checking_enabled = " << (cfg.tuner.checking_enabled ? "true" : "false") << "\n\n";
    auto emit_params = [&](const char* name, const EnergyParams& p, const double* retention) {
        out << "[" << name << "]\n";
        if (retention) out << "retention = " << num(*retention) << "s\n";
        out << "write_energy_nj = " << num(p.write_energy_nj) << "\n"
            << "read_energy_nj = " << num(p.read_energy_nj) << "\n"
            << "leakage_mw = " << num(p.leakage_mw) << "\n"
            << "hit_latency_cycles = " << p.hit_latency_cycles << "\n"
            << "write_latency_cycles = " << p.write_latency_cycles << "\n\n";
    };
    emit_params("sram", cfg.sram, nullptr);
    emit_params("buffer", cfg.scheme.buffer_energy, nullptr);
    for (int i = 0; i < cfg.retentions.size(); ++i) {
        double r = cfg.retentions.at(i);
        emit_params("unit", cfg.unit_params[static_cast<std::size_t>(i)], &r);
    }
    return out.str();
}

}  // namespace lars
