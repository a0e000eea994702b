#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lars/cache_engine.hpp"
#include "lars/config.hpp"
#include "lars/energy.hpp"
#include "lars/residency.hpp"
#include "lars/stats.hpp"
#include "lars/trace.hpp"
#include "lars/tuner.hpp"

namespace lars {

struct TunerReport {
    bool tuning_ran = false;
    bool from_history = false;
    int chosen_retention_index = -1;
    double base_metric = 0.0;
    int windows_sampled = 0;
    int retunes = 0;
    std::uint64_t migration_cycles = 0;
    double migration_nj = 0.0;
    std::vector<double> per_retention_metrics;
};

struct RunResult {
    SchemeKind scheme = SchemeKind::SRAM;
    std::optional<double> retention_s;  // fixed or tuner-chosen retention
    SimStats stats;
    EnergyBreakdown energy;
    TunerReport tuner;
};

namespace detail {

inline std::uint64_t access_cycles(AccessKind kind, const EnergyParams& unit, const SchemeConfig& scheme) {
    switch (kind) {
        case AccessKind::ReadHit: return unit.hit_latency_cycles;
        case AccessKind::WriteHit: return unit.write_latency_cycles;
        case AccessKind::ReadMiss:
        case AccessKind::WriteMiss:
            // miss penalty plus the linefill install write
            return static_cast<std::uint64_t>(scheme.miss_penalty_cycles) + unit.write_latency_cycles;
    }
    return 0;
}

inline void count_access(SimStats& stats, const TraceRecord& rec, const AccessOutcome& out,
                         const EnergyParams& unit, const SchemeConfig& scheme) {
    if (rec.op == Op::Read) {
        ++stats.reads;
        if (out.kind == AccessKind::ReadHit) ++stats.read_hits;
        else ++stats.read_misses;
    } else {
        ++stats.writes;
        if (out.kind == AccessKind::WriteHit) ++stats.write_hits;
        else ++stats.write_misses;
    }
    if (out.expired_before_access) ++stats.expiration_misses;
    if (out.caused_writeback) ++stats.writebacks;
    stats.total_cycles += access_cycles(out.kind, unit, scheme);
}

inline void count_expirations(SimStats& stats, const std::vector<ExpirationEvent>& events) {
    for (const ExpirationEvent& e : events)
        if (e.dirty) ++stats.writebacks;
}

}  // namespace detail

// One unit, one pass over the whole trace. Pass retention_s = infinity for
// expiry-free (SRAM-policy) behavior. When log_out is non-null the pass also
// records block residencies (used by the perfect-DRS refresh count).
inline SimStats run_single_unit(const Config& cfg, const EnergyParams& unit, double retention_s,
                                const std::vector<TraceRecord>& trace, ResidencyLog* log_out = nullptr,
                                ExpiryMode mode_override = ExpiryMode::Quantized) {
    ExpiryMode mode = cfg.scheme.exact_expiry ? ExpiryMode::Exact : mode_override;
    CacheState cache(cfg.geometry, cfg.clock, retention_s, mode);
    ResidencyTracker tracker;
    if (log_out) cache.set_observer(&tracker);

    SimStats stats;
    std::vector<ExpirationEvent> events;
    TimePs t_last = 0;
    for (const TraceRecord& rec : trace) {
        TimePs now = record_time_ps(rec, cfg.clock.frequency_hz);
        events.clear();
        AccessOutcome out = cache.access(rec, now, &events);
        detail::count_expirations(stats, events);
        detail::count_access(stats, rec, out, unit, cfg.scheme);
        t_last = now;
    }
    // Sweep sets never touched again so late expirations are accounted for.
    detail::count_expirations(stats, cache.advance_time(t_last));
    stats.sim_time_s = ps_to_seconds(t_last);
    if (log_out) *log_out = tracker.finish(t_last);
    return stats;
}

inline RunResult run_sram(const Config& cfg, const std::vector<TraceRecord>& trace) {
    RunResult res;
    res.scheme = SchemeKind::SRAM;
    SchemeConfig local = cfg.scheme;
    local.kind = SchemeKind::SRAM;
    Config c = cfg;
    c.scheme = local;
    res.stats = run_single_unit(c, cfg.sram, std::numeric_limits<double>::infinity(), trace);
    res.energy = compute_energy(res.stats, cfg.sram, local, cfg.clock);
    return res;
}

inline RunResult run_stt_fixed(const Config& cfg, const std::vector<TraceRecord>& trace, int retention_index) {
    RunResult res;
    res.scheme = SchemeKind::STT_FIXED;
    res.retention_s = cfg.retentions.at(retention_index);
    SchemeConfig local = cfg.scheme;
    local.kind = SchemeKind::STT_FIXED;
    Config c = cfg;
    c.scheme = local;
    res.stats = run_single_unit(c, cfg.unit(retention_index), *res.retention_s, trace);
    res.energy = compute_energy(res.stats, cfg.unit(retention_index), local, cfg.clock);
    return res;
}

// Perfect DRS: hit/miss behavior identical to an expiry-free run (pass 1),
// refresh count derived from the residency log (pass 2). Refresh energy is
// charged; refresh latency is not.
inline RunResult run_drs(const Config& cfg, const std::vector<TraceRecord>& trace, int retention_index,
                         SchemeKind kind = SchemeKind::DRS_PERFECT) {
    RunResult res;
    res.scheme = kind;
    res.retention_s = cfg.retentions.at(retention_index);
    SchemeConfig local = cfg.scheme;
    local.kind = kind;
    Config c = cfg;
    c.scheme = local;
    ResidencyLog log;
    res.stats = run_single_unit(c, cfg.unit(retention_index), std::numeric_limits<double>::infinity(), trace,
                                &log);
    res.stats.refreshes = count_perfect_refreshes_s(log, *res.retention_s);
    res.energy = compute_energy(res.stats, cfg.unit(retention_index), local, cfg.clock);
    return res;
}

// LARS: a multi-unit cache with one active unit. Without a fixed index the
// tuner samples units in descending-retention order over tuning windows of
// cfg.tuner.tuning_interval_instructions, then the chosen unit runs the rest
// of the trace (with the checking process watching for deviations). Unit
// switches migrate the valid cache state and charge migration costs to the
// run totals; per-window metrics exclude them so windows stay comparable.
inline RunResult run_lars(const Config& cfg, const std::vector<TraceRecord>& trace,
                          std::optional<int> fixed_index = std::nullopt, HistoryStore* history = nullptr,
                          const std::string& app_id = "") {
    RunResult res;
    res.scheme = SchemeKind::LARS;
    SchemeConfig local = cfg.scheme;
    local.kind = SchemeKind::LARS;
    Config c = cfg;
    c.scheme = local;

    if (fixed_index) {
        res.retention_s = cfg.retentions.at(*fixed_index);
        res.stats = run_single_unit(c, cfg.unit(*fixed_index), *res.retention_s, trace);
        res.energy = compute_energy(res.stats, cfg.unit(*fixed_index), local, cfg.clock);
        res.tuner.chosen_retention_index = *fixed_index;
        return res;
    }

    if (trace.empty()) return res;

    const TunerConfig& tcfg = cfg.tuner;
    const std::uint64_t interval = tcfg.tuning_interval_instructions;
    ExpiryMode mode = local.exact_expiry ? ExpiryMode::Exact : ExpiryMode::Quantized;

    TunerState tuner_state;
    std::optional<TunerEngine> engine;
    bool settled = false;
    bool ever_settled = false;  // a retention has been chosen at least once
    double settled_base = 0.0;

    // History short-circuit: a known application starts on its stored unit
    // with zero sampling windows.
    if (history && !app_id.empty()) {
        if (auto entry = history->lookup(app_id, tcfg.algo, tcfg.objective)) {
            settled = true;
            ever_settled = true;
            settled_base = entry->base_metric;
            tuner_state.location_index = entry->retention_index;
            tuner_state.stored_retention_index = entry->retention_index;
            tuner_state.stored_base_metric = entry->base_metric;
            res.tuner.from_history = true;
            res.tuner.chosen_retention_index = entry->retention_index;
            res.tuner.base_metric = entry->base_metric;
        }
    }
    if (!settled) {
        engine.emplace(tcfg.algo, tcfg, cfg.retentions.size());
        tuner_state.location_index = engine->next_sample_index();
        res.tuner.tuning_ran = true;
    }

    CacheState cache(cfg.geometry, cfg.clock, cfg.retentions.at(tuner_state.location_index), mode);

    SimStats total_stats;     // run totals (windows + switch artifacts)
    EnergyBreakdown total_energy;
    SimStats window_stats;    // current window only
    std::uint64_t cur_window = trace.front().icount / interval;
    TimePs t_last = 0;
    std::vector<ExpirationEvent> events;

    auto switch_unit = [&](int to, TimePs now) {
        int from = tuner_state.location_index;
        if (from == to) return;
        if (local.cold_switch) {
            std::uint64_t dirty = 0;
            for (const ExpirationEvent& e : cache.flush())
                if (e.dirty) ++dirty;
            // Flushed dirty lines are written back from the source unit.
            total_stats.writebacks += dirty;
            total_energy.dynamic_nj += static_cast<double>(dirty) * cfg.unit(from).read_energy_nj *
                                       local.line_transfer_weight;
            tuner_state.location_index = to;
        } else {
            std::uint64_t blocks = cache.valid_block_count();
            MigrationCost cost = apply_switch(tuner_state, from, to, blocks, cfg.unit_params, local);
            total_stats.migrations_in_blocks += blocks;
            res.tuner.migration_cycles += cost.cycles;
            res.tuner.migration_nj += cost.energy_nj;
        }
        cache.rebase_retention(cfg.retentions.at(to), now);
    };

    auto close_window = [&](TimePs boundary_now) {
        EnergyBreakdown wenergy =
            compute_energy(window_stats, cfg.unit(tuner_state.location_index), local, cfg.clock);
        WindowMetrics m = window_metrics_from(window_stats, wenergy);
        total_stats += window_stats;
        total_energy += wenergy;
        window_stats = SimStats{};

        if (!settled) {
            if (auto decision = engine->feed(m)) {
                settled = true;
                ever_settled = true;
                settled_base = decision->base_metric;
                res.tuner.chosen_retention_index = decision->retention_index;
                res.tuner.base_metric = decision->base_metric;
                res.tuner.windows_sampled += engine->windows_consumed();
                res.tuner.per_retention_metrics = engine->sampled_metrics();
                tuner_state.stored_retention_index = decision->retention_index;
                tuner_state.stored_base_metric = decision->base_metric;
                switch_unit(decision->retention_index, boundary_now);
            } else {
                switch_unit(engine->next_sample_index(), boundary_now);
            }
        } else if (tcfg.checking_enabled && checking_process(tcfg.algo, settled_base, m, tcfg)) {
            // Deviation beyond the threshold: re-tune from the largest retention.
            ++res.tuner.retunes;
            res.tuner.tuning_ran = true;
            settled = false;
            engine.emplace(tcfg.algo, tcfg, cfg.retentions.size());
            switch_unit(engine->next_sample_index(), boundary_now);
        }
    };

    for (const TraceRecord& rec : trace) {
        TimePs now = record_time_ps(rec, cfg.clock.frequency_hz);
        std::uint64_t w = rec.icount / interval;
        if (w != cur_window) {
            close_window(now);
            cur_window = w;
        }
        events.clear();
        AccessOutcome out = cache.access(rec, now, &events);
        detail::count_expirations(window_stats, events);
        detail::count_access(window_stats, rec, out, cfg.unit(tuner_state.location_index), local);
        t_last = now;
    }
    detail::count_expirations(window_stats, cache.advance_time(t_last));

    // The trailing (possibly partial) window contributes to the totals but is
    // never fed to the tuner: a window only completes when a later one starts.
    EnergyBreakdown wenergy =
        compute_energy(window_stats, cfg.unit(tuner_state.location_index), local, cfg.clock);
    total_stats += window_stats;
    total_energy += wenergy;

    if (!settled) {
        // A retune cut short by the end of the trace keeps the previous
        // decision; an initial tuning that never finished is an input error.
        if (!ever_settled)
            throw PartialSamplingError("trace exhausted during tuning: completed " +
                                       std::to_string(engine->windows_consumed()) + " of up to " +
                                       std::to_string(cfg.retentions.size()) + " sampling windows");
        res.tuner.windows_sampled += engine->windows_consumed();
    }

    total_stats.total_cycles += res.tuner.migration_cycles;
    total_stats.sim_time_s = ps_to_seconds(t_last);
    total_energy.latency_cycles += res.tuner.migration_cycles;
    total_energy.migration_nj += res.tuner.migration_nj;
    total_energy.recompute_totals(cfg.clock.frequency_hz);

    res.stats = total_stats;
    res.energy = total_energy;
    res.retention_s = cfg.retentions.at(res.tuner.chosen_retention_index);

    if (history && !app_id.empty() && res.tuner.tuning_ran) {
        history->put(app_id, HistoryEntry{tcfg.algo, tcfg.objective, res.tuner.chosen_retention_index,
                                          res.tuner.base_metric});
    }
    return res;
}

// LARS+DRS synergy: a LARS-Optimal pre-pass picks the retention unit, then
// the whole trace runs DRS-style on that unit (no expirations, necessary
// refreshes charged, buffer leakage included).
inline RunResult run_synergy(const Config& cfg, const std::vector<TraceRecord>& trace,
                             HistoryStore* history = nullptr, const std::string& app_id = "") {
    Config pre = cfg;
    pre.tuner.algo = TunerAlgo::Optimal;
    RunResult lars = run_lars(pre, trace, std::nullopt, history, app_id);
    RunResult res;
    res.scheme = SchemeKind::LARS_DRS_SYNERGY;
    res.tuner = lars.tuner;
    // Pre-pass switch costs are not part of the reported run.
    res.tuner.migration_cycles = 0;
    res.tuner.migration_nj = 0.0;
    if (trace.empty()) return res;

    RunResult drs = run_drs(cfg, trace, lars.tuner.chosen_retention_index, SchemeKind::LARS_DRS_SYNERGY);
    res.retention_s = drs.retention_s;
    res.stats = drs.stats;
    res.energy = drs.energy;
    return res;
}

struct RunHooks {
    std::optional<int> lars_fixed_index;  // run LARS pinned to one unit, no tuning
    HistoryStore* history = nullptr;
    std::string app_id;
};

inline RunResult run_scheme(const Config& cfg, const std::vector<TraceRecord>& trace,
                            const RunHooks& hooks = {}) {
    switch (cfg.scheme.kind) {
        case SchemeKind::SRAM: return run_sram(cfg, trace);
        case SchemeKind::STT_FIXED:
            if (!cfg.scheme.fixed_retention_index)
                throw ValidationError("scheme.fixed_retention: required for the stt scheme");
            return run_stt_fixed(cfg, trace, *cfg.scheme.fixed_retention_index);
        case SchemeKind::DRS_PERFECT:
            if (!cfg.scheme.fixed_retention_index)
                throw ValidationError("scheme.fixed_retention: required for the drs scheme");
            return run_drs(cfg, trace, *cfg.scheme.fixed_retention_index);
        case SchemeKind::LARS: return run_lars(cfg, trace, hooks.lars_fixed_index, hooks.history, hooks.app_id);
        case SchemeKind::LARS_DRS_SYNERGY: return run_synergy(cfg, trace, hooks.history, hooks.app_id);
    }
    throw InternalError("unknown scheme kind");
}

}  // namespace lars
