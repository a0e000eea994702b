#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lars/config.hpp"
#include "lars/energy.hpp"
#include "lars/error.hpp"

namespace lars {

// Metrics of one tuning window, measured on a single retention unit.
struct WindowMetrics {
    double energy_nj = 0.0;
    std::uint64_t latency_cycles = 0;
    double edp_nj_s = 0.0;
    std::uint64_t misses = 0;
    std::uint64_t accesses = 0;

    double miss_rate() const {
        return accesses == 0 ? 0.0 : static_cast<double>(misses) / static_cast<double>(accesses);
    }
    double objective_value(Objective o) const {
        switch (o) {
            case Objective::Energy: return energy_nj;
            case Objective::Latency: return static_cast<double>(latency_cycles);
            case Objective::EDP: return edp_nj_s;
        }
        return edp_nj_s;
    }
};

inline WindowMetrics window_metrics_from(const SimStats& stats, const EnergyBreakdown& energy) {
    return {energy.total_nj, energy.latency_cycles, energy.edp_nj_s, stats.misses(), stats.accesses()};
}

struct TunerDecision {
    int retention_index = 0;
    double base_metric = 0.0;  // EDP for optimal/sampling objective value, misses for miss variants
};

// Resumable retention-search state machine. The driver asks which retention
// unit the next window must execute on (next_sample_index), runs the window,
// and feeds the measured metrics back; once enough windows have been seen the
// engine returns the settle decision.
//
// Search order is always descending retention (index 0 = largest).
//   Sampling:  measures every unit, settles on the objective argmin; ties
//              break toward the smaller retention.
//   Optimal:   accepts while the window EDP stays <= the base (updating the
//              base), settles on the previously accepted unit at the first
//              strict increase.
//   Miss(-LB): the base miss count is fixed at the largest-retention window;
//              accepts while window misses < base*1.05 (LB: also whenever
//              the window miss rate is under the floor), settles at the
//              first rejection.
class TunerEngine {
public:
    TunerEngine(TunerAlgo algo, const TunerConfig& cfg, int num_retentions)
        : algo_(algo), cfg_(cfg), num_retentions_(num_retentions) {
        if (num_retentions_ < 1) throw ValidationError("tuner: empty retention set");
        if (algo_ == TunerAlgo::MissLB) lb_ = true;
        else if (algo_ == TunerAlgo::Miss) lb_ = false;
        else lb_ = cfg.lb_enabled;
    }

    bool sampling() const { return !decision_.has_value(); }
    int next_sample_index() const {
        check_internal(sampling(), "tuner asked for a window after settling");
        return next_index_;
    }
    int windows_consumed() const { return windows_; }
    const std::vector<double>& sampled_metrics() const { return per_retention_; }
    std::optional<TunerDecision> decision() const { return decision_; }

    std::optional<TunerDecision> feed(const WindowMetrics& m) {
        check_internal(sampling(), "tuner fed a window after settling");
        ++windows_;
        switch (algo_) {
            case TunerAlgo::Sampling: feed_sampling(m); break;
            case TunerAlgo::Optimal: feed_optimal(m); break;
            case TunerAlgo::Miss:
            case TunerAlgo::MissLB: feed_miss(m); break;
        }
        return decision_;
    }

private:
    void settle(int index, double base) { decision_ = TunerDecision{index, base}; }

    void feed_sampling(const WindowMetrics& m) {
        per_retention_.push_back(m.objective_value(cfg_.objective));
        if (next_index_ + 1 < num_retentions_) {
            ++next_index_;
            return;
        }
        int best = 0;
        for (int i = 1; i < num_retentions_; ++i)
            if (per_retention_[(std::size_t)i] <= per_retention_[(std::size_t)best]) best = i;
        settle(best, per_retention_[(std::size_t)best]);
    }

    void feed_optimal(const WindowMetrics& m) {
        per_retention_.push_back(m.edp_nj_s);
        if (windows_ == 1) {
            base_ = m.edp_nj_s;
            accepted_ = 0;
        } else if (m.edp_nj_s <= base_) {
            base_ = m.edp_nj_s;
            accepted_ = next_index_;
        } else {
            settle(accepted_, base_);
            return;
        }
        if (next_index_ + 1 < num_retentions_) ++next_index_;
        else settle(accepted_, base_);
    }

    void feed_miss(const WindowMetrics& m) {
        per_retention_.push_back(static_cast<double>(m.misses));
        if (windows_ == 1) {
            base_ = static_cast<double>(m.misses);  // fixed for the whole search
            accepted_ = 0;
        } else if (lb_ && m.miss_rate() < cfg_.lb_missrate_floor) {
            accepted_ = next_index_;
        } else if (static_cast<double>(m.misses) < base_ * (1.0 + cfg_.miss_degrade_threshold)) {
            accepted_ = next_index_;
        } else {
            settle(accepted_, base_);
            return;
        }
        if (next_index_ + 1 < num_retentions_) ++next_index_;
        else settle(accepted_, base_);
    }

    TunerAlgo algo_;
    TunerConfig cfg_;
    int num_retentions_;
    bool lb_ = false;
    int next_index_ = 0;
    int accepted_ = 0;
    int windows_ = 0;
    double base_ = 0.0;
    std::vector<double> per_retention_;
    std::optional<TunerDecision> decision_;
};

struct TuningOutcome {
    int retention_index = 0;
    double base_metric = 0.0;
    std::vector<double> per_retention_metrics;  // in sampled (descending-retention) order
    int windows_used = 0;
};

// Runs a tuner to completion against a window provider. The provider is
// called as provider(retention_index) and returns the metrics of the next
// window executed on that unit, or nullopt when the trace is exhausted.
template <class Provider>
TuningOutcome run_tuning(TunerAlgo algo, const TunerConfig& cfg, int num_retentions, Provider&& provider) {
    TunerEngine engine(algo, cfg, num_retentions);
    while (engine.sampling()) {
        int idx = engine.next_sample_index();
        std::optional<WindowMetrics> m = provider(idx);
        if (!m)
            throw PartialSamplingError("trace exhausted during tuning: completed " +
                                       std::to_string(engine.windows_consumed()) + " of up to " +
                                       std::to_string(num_retentions) + " sampling windows");
        engine.feed(*m);
    }
    TuningOutcome out;
    out.retention_index = engine.decision()->retention_index;
    out.base_metric = engine.decision()->base_metric;
    out.per_retention_metrics = engine.sampled_metrics();
    out.windows_used = engine.windows_consumed();
    return out;
}

// Exhaustive sampling across every retention unit; argmin of the objective.
template <class Provider>
TuningOutcome sample_all(Provider&& provider, Objective objective, const TunerConfig& cfg_in,
                         int num_retentions) {
    TunerConfig cfg = cfg_in;
    cfg.objective = objective;
    return run_tuning(TunerAlgo::Sampling, cfg, num_retentions, provider);
}

template <class Provider>
TuningOutcome lars_optimal(Provider&& provider, const TunerConfig& cfg, int num_retentions) {
    return run_tuning(TunerAlgo::Optimal, cfg, num_retentions, provider);
}

template <class Provider>
TuningOutcome lars_miss(Provider&& provider, const TunerConfig& cfg, int num_retentions, bool lb_enabled) {
    return run_tuning(lb_enabled ? TunerAlgo::MissLB : TunerAlgo::Miss, cfg, num_retentions, provider);
}

// Post-tuning feedback: true when the current window deviates from the stored
// base by more than the configured threshold and the unit must be re-tuned.
inline bool checking_process(TunerAlgo algo, double stored_base_metric, const WindowMetrics& current,
                             const TunerConfig& cfg) {
    switch (algo) {
        case TunerAlgo::Miss:
        case TunerAlgo::MissLB:
            return static_cast<double>(current.misses) >
                   stored_base_metric * (1.0 + cfg.miss_degrade_threshold);
        case TunerAlgo::Optimal:
            return current.edp_nj_s > stored_base_metric * (1.0 + cfg.edp_degrade_threshold);
        case TunerAlgo::Sampling:
            return current.objective_value(cfg.objective) >
                   stored_base_metric * (1.0 + cfg.edp_degrade_threshold);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Retention history: application id -> (algorithm, retention, base metric),
// persisted as a small versioned JSON document.
// ---------------------------------------------------------------------------

struct HistoryEntry {
    TunerAlgo algo = TunerAlgo::Optimal;
    Objective objective = Objective::EDP;
    int retention_index = 0;
    double base_metric = 0.0;
};

class HistoryStore {
public:
    static constexpr int kFormatVersion = 1;

    static HistoryStore load(const std::string& path) {
        HistoryStore store;
        std::ifstream in(path);
        if (!in) return store;  // absent file = empty history
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const std::exception& e) {
            throw ParseError("history file " + path + ": " + e.what());
        }
        if (doc.value("version", 0) != kFormatVersion)
            throw ParseError("history file " + path + ": unsupported version");
        for (auto& [id, e] : doc.at("entries").items()) {
            HistoryEntry entry;
            entry.algo = parse_tuner(e.at("algo").get<std::string>());
            entry.objective = parse_objective(e.at("objective").get<std::string>());
            entry.retention_index = e.at("retention_index").get<int>();
            entry.base_metric = e.at("base_metric").get<double>();
            store.entries_[id] = entry;
        }
        return store;
    }

    void save(const std::string& path) const {
        nlohmann::json entries = nlohmann::json::object();
        for (const auto& [id, e] : entries_) {
            entries[id] = {{"algo", tuner_name(e.algo)},
                           {"objective", objective_name(e.objective)},
                           {"retention_index", e.retention_index},
                           {"base_metric", e.base_metric}};
        }
        nlohmann::json doc = {{"version", kFormatVersion}, {"entries", entries}};
        std::ofstream out(path);
        if (!out) throw ParseError("cannot write history file: " + path);
        out << doc.dump(2) << "\n";
    }

    std::optional<HistoryEntry> lookup(const std::string& app_id, TunerAlgo algo, Objective objective) const {
        auto it = entries_.find(app_id);
        if (it == entries_.end()) return std::nullopt;
        if (it->second.algo != algo) return std::nullopt;
        if (algo == TunerAlgo::Sampling && it->second.objective != objective) return std::nullopt;
        return it->second;
    }

    void put(const std::string& app_id, const HistoryEntry& entry) { entries_[app_id] = entry; }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, HistoryEntry> entries_;
};

// Runtime tuner state: which unit is live plus the stored retention decision.
struct TunerState {
    int location_index = 0;  // the location-array value: the active unit
    int stored_retention_index = -1;
    double stored_base_metric = 0.0;
    HistoryStore history;
};

// Unit switch with migration accounting. Cold switches are handled by the
// scheme runner (they flush instead of migrating and never reach here).
inline MigrationCost apply_switch(TunerState& state, int from_index, int to_index,
                                  std::uint64_t valid_blocks, const std::vector<EnergyParams>& unit_params,
                                  const SchemeConfig& scheme) {
    if (from_index == to_index) throw ValidationError("apply_switch: source and destination units are identical");
    MigrationCost cost = migration_cost(valid_blocks, unit_params.at((std::size_t)from_index),
                                        unit_params.at((std::size_t)to_index),
                                        scheme.migration_extra_cycles_per_block,
                                        scheme.migration_extra_nj_per_block);
    state.location_index = to_index;
    return cost;
}

// Stable trace identity for the history store: file name plus content hash.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace lars
