// lars-sim: trace-driven L1 cache simulator for relaxed-retention STT-RAM
// with a runtime-adaptable retention unit (plus SRAM / fixed-retention /
// perfect-refresh baselines).
//
// Exit codes: 0 success, 2 usage error, 3 input error, 4 internal error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lars/config.hpp"
#include "lars/report.hpp"
#include "lars/scheme_runner.hpp"
#include "lars/trace.hpp"
#include "lars/tuner.hpp"

namespace {

using namespace lars;

struct CommonOpts {
    std::string config_path;
    std::string trace_path;
    std::string out_path;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_trace) {
    cmd->add_option("--config", opts.config_path, "Config file (default: $LARS_SIM_CONFIG or built-in)")
        ->envname("LARS_SIM_CONFIG");
    auto* trace = cmd->add_option("--trace", opts.trace_path, "Input trace file");
    if (needs_trace) trace->required();
    cmd->add_option("--out", opts.out_path, "Report output file (default: stdout)");
    cmd->add_option("--format", opts.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
}

Config load_or_default(const CommonOpts& opts) {
    if (!opts.config_path.empty()) return load_config(opts.config_path);
    return default_config();
}

std::string trace_app_id(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open trace file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::string base = path;
    std::size_t slash = base.find_last_of("/\\");
    if (slash != std::string::npos) base = base.substr(slash + 1);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)fnv1a64(bytes.data(), bytes.size()));
    return base + "-" + buf;
}

void emit_report(const CommonOpts& opts, const std::vector<ReportRow>& rows) {
    std::string text = opts.format == "json" ? report_to_json(rows) : report_to_csv(rows);
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path);
    if (!out) throw ParseError("cannot open output file: " + opts.out_path);
    out << text;
}

int retention_index_for(const Config& cfg, const std::string& retention_flag, bool required) {
    if (retention_flag.empty()) {
        if (cfg.scheme.fixed_retention_index) return *cfg.scheme.fixed_retention_index;
        if (required) throw ValidationError("--retention: required for this scheme");
        return -1;
    }
    double r = parse_duration_s(retention_flag);
    int idx = cfg.retentions.index_of(r);
    if (idx < 0)
        throw ValidationError("--retention: " + retention_flag + " is not in the configured retention set");
    return idx;
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
    CommonOpts common;
    std::string scheme;
    std::string retention;
    std::string tuner = "optimal";
    std::string objective;
    std::string history_path;
    std::uint64_t interval = 0;
    bool cold_switch = false;
    bool exact_expiry = false;
    std::string leakage_scope;
};

int cmd_simulate(const SimulateOpts& opts) {
    Config cfg = load_or_default(opts.common);
    cfg.scheme.kind = parse_scheme(opts.scheme);
    cfg.tuner.algo = parse_tuner(opts.tuner);
    if (!opts.objective.empty()) cfg.tuner.objective = parse_objective(opts.objective);
    if (opts.interval > 0) cfg.tuner.tuning_interval_instructions = opts.interval;
    if (opts.cold_switch) cfg.scheme.cold_switch = true;
    if (opts.exact_expiry) cfg.scheme.exact_expiry = true;
    if (!opts.leakage_scope.empty())
        cfg.scheme.leakage_scope =
            opts.leakage_scope == "all_units" ? LeakageScope::AllUnits : LeakageScope::ActiveUnitOnly;

    RunHooks hooks;
    bool tuned = false;
    switch (cfg.scheme.kind) {
        case SchemeKind::STT_FIXED:
        case SchemeKind::DRS_PERFECT:
            cfg.scheme.fixed_retention_index = retention_index_for(cfg, opts.retention, true);
            break;
        case SchemeKind::LARS:
            if (!opts.retention.empty())
                hooks.lars_fixed_index = retention_index_for(cfg, opts.retention, true);
            else
                tuned = true;
            break;
        case SchemeKind::LARS_DRS_SYNERGY: tuned = true; break;
        case SchemeKind::SRAM: break;
    }
    validate_config(cfg);

    HistoryStore history;
    if (!opts.history_path.empty() && tuned) {
        history = HistoryStore::load(opts.history_path);
        hooks.history = &history;
        hooks.app_id = trace_app_id(opts.common.trace_path);
    }

    auto trace = read_trace_file(opts.common.trace_path);
    RunResult res = run_scheme(cfg, trace, hooks);
    if (hooks.history) history.save(opts.history_path);

    std::vector<ReportRow> rows{make_report_row(res, cfg, tuned)};
    emit_report(opts.common, rows);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_sweep(const CommonOpts& common, const std::string& retention_flag) {
    Config cfg = load_or_default(common);
    auto trace = read_trace_file(common.trace_path);
    int drs_idx = retention_index_for(cfg, retention_flag, true);

    std::vector<ReportRow> rows;
    rows.push_back(make_report_row(run_sram(cfg, trace), cfg, false));
    rows.push_back(make_report_row(run_drs(cfg, trace, drs_idx), cfg, false));
    for (int idx = 0; idx < cfg.retentions.size(); ++idx)
        rows.push_back(make_report_row(run_stt_fixed(cfg, trace, idx), cfg, false));
    normalize_rows(rows, 0);  // normalized to SRAM
    emit_report(common, rows);
    return 0;
}

// ---------------------------------------------------------------------------

struct CompareOpts {
    CommonOpts common;
    std::string retention;
    std::string objective;
    std::string history_path;
    std::uint64_t interval = 0;
};

int cmd_compare(const CompareOpts& opts) {
    Config cfg = load_or_default(opts.common);
    if (!opts.objective.empty()) cfg.tuner.objective = parse_objective(opts.objective);
    if (opts.interval > 0) cfg.tuner.tuning_interval_instructions = opts.interval;
    auto trace = read_trace_file(opts.common.trace_path);
    int drs_idx = retention_index_for(cfg, opts.retention, true);

    HistoryStore history;
    RunHooks hooks;
    if (!opts.history_path.empty()) {
        history = HistoryStore::load(opts.history_path);
        hooks.history = &history;
        hooks.app_id = trace_app_id(opts.common.trace_path);
    }

    std::vector<ReportRow> rows;
    rows.push_back(make_report_row(run_sram(cfg, trace), cfg, false));
    rows.push_back(make_report_row(run_drs(cfg, trace, drs_idx), cfg, false));
    for (TunerAlgo algo : {TunerAlgo::Optimal, TunerAlgo::Miss, TunerAlgo::MissLB}) {
        Config c = cfg;
        c.tuner.algo = algo;
        rows.push_back(
            make_report_row(run_lars(c, trace, std::nullopt, hooks.history, hooks.app_id), c, true));
    }
    {
        Config c = cfg;
        c.tuner.algo = TunerAlgo::Optimal;
        rows.push_back(make_report_row(run_synergy(c, trace, hooks.history, hooks.app_id), c, true));
    }
    normalize_rows(rows, 1);  // normalized to DRS
    if (hooks.history) history.save(opts.history_path);
    emit_report(opts.common, rows);
    return 0;
}

// ---------------------------------------------------------------------------

struct TuneOpts {
    CommonOpts common;
    std::string tuner = "optimal";
    std::string objective;
    std::string history_path;
    std::uint64_t interval = 0;
};

int cmd_tune(const TuneOpts& opts) {
    Config cfg = load_or_default(opts.common);
    cfg.scheme.kind = SchemeKind::LARS;
    cfg.tuner.algo = parse_tuner(opts.tuner);
    if (!opts.objective.empty()) cfg.tuner.objective = parse_objective(opts.objective);
    if (opts.interval > 0) cfg.tuner.tuning_interval_instructions = opts.interval;

    HistoryStore history;
    RunHooks hooks;
    if (!opts.history_path.empty()) {
        history = HistoryStore::load(opts.history_path);
        hooks.history = &history;
        hooks.app_id = trace_app_id(opts.common.trace_path);
    }

    auto trace = read_trace_file(opts.common.trace_path);
    RunResult res = run_lars(cfg, trace, std::nullopt, hooks.history, hooks.app_id);
    if (hooks.history) history.save(opts.history_path);

    if (res.tuner.chosen_retention_index >= 0) {
        std::fprintf(stderr, "chosen retention: %s (unit %d), base %s = %.6g, windows sampled = %d%s\n",
                     format_duration_s(cfg.retentions.at(res.tuner.chosen_retention_index)).c_str(),
                     res.tuner.chosen_retention_index,
                     cfg.tuner.algo == TunerAlgo::Miss || cfg.tuner.algo == TunerAlgo::MissLB ? "misses"
                                                                                              : "metric",
                     res.tuner.base_metric, res.tuner.windows_sampled,
                     res.tuner.from_history ? " (from history)" : "");
    } else {
        std::fprintf(stderr, "empty trace: nothing to tune\n");
    }
    std::vector<ReportRow> rows{make_report_row(res, cfg, true)};
    emit_report(opts.common, rows);
    return 0;
}

// ---------------------------------------------------------------------------

struct GenTraceOpts {
    std::string out_path;
    WorkloadSpec spec;
    std::string gap = "fixed:1000";
    std::string lifetime = "fixed:0.005";
};

int cmd_gen_trace(const GenTraceOpts& opts) {
    WorkloadSpec spec = opts.spec;
    spec.inter_access_gap = parse_dist(opts.gap);
    spec.reuse_lifetime = parse_dist(opts.lifetime);
    validate_workload_spec(spec);
    auto records = generate_trace(spec);
    write_trace_file(opts.out_path, records);
    std::fprintf(stderr, "wrote %zu records to %s\n", records.size(), opts.out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-driven L1 data cache simulator for adaptable-retention STT-RAM"};
    app.require_subcommand(1);

    SimulateOpts sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Run one scheme over a trace");
    add_common(simulate, sim.common, true);
    simulate->add_option("--scheme", sim.scheme, "sram | stt | drs | lars | synergy")->required();
    simulate->add_option("--retention", sim.retention, "Retention time (e.g. 10ms); fixes the unit");
    simulate->add_option("--tuner", sim.tuner, "sampling | optimal | miss | miss-lb");
    simulate->add_option("--objective", sim.objective, "energy | latency | edp (sampling tuner)");
    simulate->add_option("--history", sim.history_path, "Retention-history store (JSON)");
    simulate->add_option("--interval", sim.interval, "Tuning interval in instructions");
    simulate->add_flag("--cold-switch", sim.cold_switch, "Invalidate instead of migrating on unit switch");
    simulate->add_flag("--exact-expiry", sim.exact_expiry, "Expire at exactly last_write + retention");
    simulate->add_option("--leakage-scope", sim.leakage_scope, "active_unit | all_units")
        ->check(CLI::IsMember({"active_unit", "all_units"}));

    CommonOpts sweep_common;
    std::string sweep_retention;
    CLI::App* sweep = app.add_subcommand("sweep", "Fixed-retention sweep plus SRAM/DRS baselines");
    add_common(sweep, sweep_common, true);
    sweep->add_option("--retention", sweep_retention, "DRS base retention (default from config)");

    CompareOpts cmp;
    CLI::App* compare = app.add_subcommand("compare", "SRAM, DRS, LARS variants and synergy side by side");
    add_common(compare, cmp.common, true);
    compare->add_option("--retention", cmp.retention, "DRS base retention (default from config)");
    compare->add_option("--objective", cmp.objective, "energy | latency | edp");
    compare->add_option("--history", cmp.history_path, "Retention-history store (JSON)");
    compare->add_option("--interval", cmp.interval, "Tuning interval in instructions");

    TuneOpts tune;
    CLI::App* tune_cmd = app.add_subcommand("tune", "Run the retention tuner and persist its choice");
    add_common(tune_cmd, tune.common, true);
    tune_cmd->add_option("--tuner", tune.tuner, "sampling | optimal | miss | miss-lb");
    tune_cmd->add_option("--objective", tune.objective, "energy | latency | edp");
    tune_cmd->add_option("--history", tune.history_path, "Retention-history store (JSON)");
    tune_cmd->add_option("--interval", tune.interval, "Tuning interval in instructions");

    GenTraceOpts gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-trace", "Generate a synthetic workload trace");
    gen_cmd->add_option("--out", gen.out_path, "Output trace file")->required();
    gen_cmd->add_option("--length", gen.spec.length, "Number of references");
    gen_cmd->add_option("--blocks", gen.spec.num_blocks, "Concurrently live blocks");
    gen_cmd->add_option("--working-set", gen.spec.working_set_bytes, "Working set size in bytes");
    gen_cmd->add_option("--write-fraction", gen.spec.write_fraction, "Fraction of writes in [0,1]");
    gen_cmd->add_option("--gap", gen.gap,
                        "Inter-access gap dist (fixed:X | uniform:LO:HI | exp:MEAN), instructions");
    gen_cmd->add_option("--lifetime", gen.lifetime, "Block lifetime dist, seconds");
    gen_cmd->add_option("--seed", gen.spec.seed, "RNG seed");
    gen_cmd->add_option("--freq", gen.spec.frequency_hz, "Clock frequency for the time mapping");
    gen_cmd->add_option("--align", gen.spec.addr_align_bytes, "Address alignment in bytes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (sweep->parsed()) return cmd_sweep(sweep_common, sweep_retention);
        if (compare->parsed()) return cmd_compare(cmp);
        if (tune_cmd->parsed()) return cmd_tune(tune);
        if (gen_cmd->parsed()) return cmd_gen_trace(gen);
    } catch (const lars::InternalError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    } catch (const lars::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }
    return 0;
}
