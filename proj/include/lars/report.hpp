#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lars/config.hpp"
#include "lars/energy.hpp"
#include "lars/error.hpp"
#include "lars/scheme_runner.hpp"
#include "lars/stats.hpp"

namespace lars {

inline constexpr int kReportSchemaVersion = 1;

// One output row: a scheme run plus optional ratios against a baseline row
// in the same report.
struct ReportRow {
    std::string scheme;
    std::optional<double> retention_s;
    std::string tuner;      // empty when the scheme has no tuner
    std::string objective;  // empty when the scheme has no tuner
    int tuning_windows = 0;
    int retunes = 0;
    bool from_history = false;
    SimStats stats;
    EnergyBreakdown energy;
    std::uint64_t migration_cycles = 0;
    std::string normalized_to;  // baseline scheme name, empty if none
    std::optional<double> energy_ratio;
    std::optional<double> latency_ratio;
    std::optional<double> edp_ratio;
    std::optional<double> missrate_ratio;
};

inline ReportRow make_report_row(const RunResult& run, const Config& cfg, bool tuned) {
    ReportRow row;
    row.scheme = scheme_name(run.scheme);
    row.retention_s = run.retention_s;
    if (tuned) {
        row.tuner = tuner_name(cfg.tuner.algo);
        row.objective = objective_name(cfg.tuner.objective);
    }
    row.tuning_windows = run.tuner.windows_sampled;
    row.retunes = run.tuner.retunes;
    row.from_history = run.tuner.from_history;
    row.stats = run.stats;
    row.energy = run.energy;
    row.migration_cycles = run.tuner.migration_cycles;
    return row;
}

// Fills the ratio columns of every row against rows[baseline].
inline void normalize_rows(std::vector<ReportRow>& rows, std::size_t baseline) {
    const ReportRow& base = rows.at(baseline);
    std::string base_name = base.scheme;
    double base_energy = base.energy.total_nj;
    double base_latency = static_cast<double>(base.energy.latency_cycles);
    double base_edp = base.energy.edp_nj_s;
    double base_missrate = base.stats.miss_rate();
    for (ReportRow& row : rows) {
        row.normalized_to = base_name;
        auto ratio = [](double num, double den) -> std::optional<double> {
            if (den == 0.0) return std::nullopt;
            return num / den;
        };
        row.energy_ratio = ratio(row.energy.total_nj, base_energy);
        row.latency_ratio = ratio(static_cast<double>(row.energy.latency_cycles), base_latency);
        row.edp_ratio = ratio(row.energy.edp_nj_s, base_edp);
        row.missrate_ratio = ratio(row.stats.miss_rate(), base_missrate);
    }
}

namespace detail {

inline const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols = {
        "schema_version", "scheme", "retention_s", "tuner", "objective", "tuning_windows", "retunes",
        "from_history", "reads", "writes", "read_hits", "write_hits", "read_misses", "write_misses",
        "expiration_misses", "writebacks", "refreshes", "migrations_in_blocks", "migration_cycles",
        "total_cycles", "sim_time_s", "miss_rate", "dynamic_nj", "static_nj", "refresh_nj", "migration_nj",
        "total_nj", "latency_cycles", "latency_s", "edp_nj_s", "total_nj_excl_migration",
        "latency_cycles_excl_migration", "normalized_to", "energy_ratio", "latency_ratio", "edp_ratio",
        "missrate_ratio"};
    return cols;
}

inline std::string opt_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : "na";
}

}  // namespace detail

inline std::string report_to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    const auto& cols = detail::report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const ReportRow& r : rows) {
        std::vector<std::string> cells;
        cells.push_back(std::to_string(kReportSchemaVersion));
        cells.push_back(r.scheme);
        cells.push_back(detail::opt_cell(r.retention_s));
        cells.push_back(r.tuner.empty() ? "na" : r.tuner);
        cells.push_back(r.objective.empty() ? "na" : r.objective);
        cells.push_back(std::to_string(r.tuning_windows));
        cells.push_back(std::to_string(r.retunes));
        cells.push_back(r.from_history ? "1" : "0");
        cells.push_back(std::to_string(r.stats.reads));
        cells.push_back(std::to_string(r.stats.writes));
        cells.push_back(std::to_string(r.stats.read_hits));
        cells.push_back(std::to_string(r.stats.write_hits));
        cells.push_back(std::to_string(r.stats.read_misses));
        cells.push_back(std::to_string(r.stats.write_misses));
        cells.push_back(std::to_string(r.stats.expiration_misses));
        cells.push_back(std::to_string(r.stats.writebacks));
        cells.push_back(std::to_string(r.stats.refreshes));
        cells.push_back(std::to_string(r.stats.migrations_in_blocks));
        cells.push_back(std::to_string(r.migration_cycles));
        cells.push_back(std::to_string(r.stats.total_cycles));
        cells.push_back(format_double(r.stats.sim_time_s));
        cells.push_back(format_double(r.stats.miss_rate()));
        cells.push_back(format_double(r.energy.dynamic_nj));
        cells.push_back(format_double(r.energy.static_nj));
        cells.push_back(format_double(r.energy.refresh_nj));
        cells.push_back(format_double(r.energy.migration_nj));
        cells.push_back(format_double(r.energy.total_nj));
        cells.push_back(std::to_string(r.energy.latency_cycles));
        cells.push_back(format_double(r.energy.latency_s));
        cells.push_back(format_double(r.energy.edp_nj_s));
        cells.push_back(format_double(r.energy.total_nj - r.energy.migration_nj));
        cells.push_back(std::to_string(r.energy.latency_cycles - r.migration_cycles));
        cells.push_back(r.normalized_to.empty() ? "na" : r.normalized_to);
        cells.push_back(detail::opt_cell(r.energy_ratio));
        cells.push_back(detail::opt_cell(r.latency_ratio));
        cells.push_back(detail::opt_cell(r.edp_ratio));
        cells.push_back(detail::opt_cell(r.missrate_ratio));
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
    }
    return out.str();
}

inline nlohmann::json row_to_json(const ReportRow& r) {
    nlohmann::json j;
    j["scheme"] = r.scheme;
    j["retention_s"] = r.retention_s ? nlohmann::json(*r.retention_s) : nlohmann::json(nullptr);
    j["tuner"] = r.tuner.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.tuner);
    j["objective"] = r.objective.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.objective);
    j["tuning_windows"] = r.tuning_windows;
    j["retunes"] = r.retunes;
    j["from_history"] = r.from_history;
    j["stats"] = {{"reads", r.stats.reads},
                  {"writes", r.stats.writes},
                  {"read_hits", r.stats.read_hits},
                  {"write_hits", r.stats.write_hits},
                  {"read_misses", r.stats.read_misses},
                  {"write_misses", r.stats.write_misses},
                  {"expiration_misses", r.stats.expiration_misses},
                  {"writebacks", r.stats.writebacks},
                  {"refreshes", r.stats.refreshes},
                  {"migrations_in_blocks", r.stats.migrations_in_blocks},
                  {"total_cycles", r.stats.total_cycles},
                  {"sim_time_s", r.stats.sim_time_s},
                  {"miss_rate", r.stats.miss_rate()}};
    j["energy"] = {{"dynamic_nj", r.energy.dynamic_nj},
                   {"static_nj", r.energy.static_nj},
                   {"refresh_nj", r.energy.refresh_nj},
                   {"migration_nj", r.energy.migration_nj},
                   {"total_nj", r.energy.total_nj},
                   {"latency_cycles", r.energy.latency_cycles},
                   {"latency_s", r.energy.latency_s},
                   {"edp_nj_s", r.energy.edp_nj_s},
                   {"total_nj_excl_migration", r.energy.total_nj - r.energy.migration_nj},
                   {"latency_cycles_excl_migration", r.energy.latency_cycles - r.migration_cycles}};
    j["migration_cycles"] = r.migration_cycles;
    nlohmann::json norm;
    if (!r.normalized_to.empty()) {
        norm["baseline"] = r.normalized_to;
        auto put = [&](const char* k, const std::optional<double>& v) {
            norm[k] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
        };
        put("energy_ratio", r.energy_ratio);
        put("latency_ratio", r.latency_ratio);
        put("edp_ratio", r.edp_ratio);
        put("missrate_ratio", r.missrate_ratio);
    }
    j["normalized"] = norm;
    return j;
}

inline std::string report_to_json(const std::vector<ReportRow>& rows) {
    nlohmann::json doc;
    doc["version"] = kReportSchemaVersion;
    nlohmann::json arr = nlohmann::json::array();
    for (const ReportRow& r : rows) arr.push_back(row_to_json(r));
    doc["rows"] = arr;
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Parsers (round-trip support).
// ---------------------------------------------------------------------------

inline std::vector<ReportRow> report_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("csv report: empty input");
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else if (c != '\r')
                cur.push_back(c);
        }
        cells.push_back(cur);
        return cells;
    };
    const auto& cols = detail::report_columns();
    if (split(line) != cols) throw ParseError("csv report: unexpected header");

    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> c = split(line);
        if (c.size() != cols.size()) throw ParseError("csv report: wrong cell count");
        if (c[0] != std::to_string(kReportSchemaVersion)) throw ParseError("csv report: unsupported version");
        auto num = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
        auto u64 = [](const std::string& s) { return std::strtoull(s.c_str(), nullptr, 10); };
        auto opt = [&](const std::string& s) -> std::optional<double> {
            if (s == "na") return std::nullopt;
            return num(s);
        };
        ReportRow r;
        std::size_t i = 1;
        r.scheme = c[i++];
        r.retention_s = opt(c[i++]);
        r.tuner = c[i] == "na" ? "" : c[i];
        ++i;
        r.objective = c[i] == "na" ? "" : c[i];
        ++i;
        r.tuning_windows = static_cast<int>(u64(c[i++]));
        r.retunes = static_cast<int>(u64(c[i++]));
        r.from_history = c[i++] == "1";
        r.stats.reads = u64(c[i++]);
        r.stats.writes = u64(c[i++]);
        r.stats.read_hits = u64(c[i++]);
        r.stats.write_hits = u64(c[i++]);
        r.stats.read_misses = u64(c[i++]);
        r.stats.write_misses = u64(c[i++]);
        r.stats.expiration_misses = u64(c[i++]);
        r.stats.writebacks = u64(c[i++]);
        r.stats.refreshes = u64(c[i++]);
        r.stats.migrations_in_blocks = u64(c[i++]);
        r.migration_cycles = u64(c[i++]);
        r.stats.total_cycles = u64(c[i++]);
        r.stats.sim_time_s = num(c[i++]);
        ++i;  // miss_rate is derived
        r.energy.dynamic_nj = num(c[i++]);
        r.energy.static_nj = num(c[i++]);
        r.energy.refresh_nj = num(c[i++]);
        r.energy.migration_nj = num(c[i++]);
        r.energy.total_nj = num(c[i++]);
        r.energy.latency_cycles = u64(c[i++]);
        r.energy.latency_s = num(c[i++]);
        r.energy.edp_nj_s = num(c[i++]);
        i += 2;  // excl-migration columns are derived
        r.normalized_to = c[i] == "na" ? "" : c[i];
        ++i;
        r.energy_ratio = opt(c[i++]);
        r.latency_ratio = opt(c[i++]);
        r.edp_ratio = opt(c[i++]);
        r.missrate_ratio = opt(c[i++]);
        rows.push_back(r);
    }
    return rows;
}

inline std::vector<ReportRow> report_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("json report: ") + e.what());
    }
    if (doc.value("version", 0) != kReportSchemaVersion) throw ParseError("json report: unsupported version");
    std::vector<ReportRow> rows;
    for (const nlohmann::json& j : doc.at("rows")) {
        ReportRow r;
        r.scheme = j.at("scheme").get<std::string>();
        if (!j.at("retention_s").is_null()) r.retention_s = j.at("retention_s").get<double>();
        if (!j.at("tuner").is_null()) r.tuner = j.at("tuner").get<std::string>();
        if (!j.at("objective").is_null()) r.objective = j.at("objective").get<std::string>();
        r.tuning_windows = j.at("tuning_windows").get<int>();
        r.retunes = j.at("retunes").get<int>();
        r.from_history = j.at("from_history").get<bool>();
        const nlohmann::json& s = j.at("stats");
        r.stats.reads = s.at("reads").get<std::uint64_t>();
        r.stats.writes = s.at("writes").get<std::uint64_t>();
        r.stats.read_hits = s.at("read_hits").get<std::uint64_t>();
        r.stats.write_hits = s.at("write_hits").get<std::uint64_t>();
        r.stats.read_misses = s.at("read_misses").get<std::uint64_t>();
        r.stats.write_misses = s.at("write_misses").get<std::uint64_t>();
        r.stats.expiration_misses = s.at("expiration_misses").get<std::uint64_t>();
        r.stats.writebacks = s.at("writebacks").get<std::uint64_t>();
        r.stats.refreshes = s.at("refreshes").get<std::uint64_t>();
        r.stats.migrations_in_blocks = s.at("migrations_in_blocks").get<std::uint64_t>();
        r.stats.total_cycles = s.at("total_cycles").get<std::uint64_t>();
        r.stats.sim_time_s = s.at("sim_time_s").get<double>();
        const nlohmann::json& e = j.at("energy");
        r.energy.dynamic_nj = e.at("dynamic_nj").get<double>();
        r.energy.static_nj = e.at("static_nj").get<double>();
        r.energy.refresh_nj = e.at("refresh_nj").get<double>();
        r.energy.migration_nj = e.at("migration_nj").get<double>();
        r.energy.total_nj = e.at("total_nj").get<double>();
        r.energy.latency_cycles = e.at("latency_cycles").get<std::uint64_t>();
        r.energy.latency_s = e.at("latency_s").get<double>();
        r.energy.edp_nj_s = e.at("edp_nj_s").get<double>();
        r.migration_cycles = j.at("migration_cycles").get<std::uint64_t>();
        const nlohmann::json& n = j.at("normalized");
        if (n.contains("baseline")) {
            r.normalized_to = n.at("baseline").get<std::string>();
            auto opt = [&](const char* k) -> std::optional<double> {
                if (n.at(k).is_null()) return std::nullopt;
                return n.at(k).get<double>();
            };
            r.energy_ratio = opt("energy_ratio");
            r.latency_ratio = opt("latency_ratio");
            r.edp_ratio = opt("edp_ratio");
            r.missrate_ratio = opt("missrate_ratio");
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace lars
