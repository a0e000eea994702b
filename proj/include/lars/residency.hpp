#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lars/cache_engine.hpp"
#include "lars/error.hpp"
#include "lars/time.hpp"

namespace lars {

// One write epoch: the span from an array write (install, write hit, or
// migration rewrite) to the next write or the eviction. last_access covers
// every touch inside the epoch, including the write that closes it.
struct ResidencyEpoch {
    TimePs start = 0;
    TimePs last_access = 0;
};

// Lifetime record of one block residency (install to eviction).
struct Residency {
    std::uint32_t set = 0;
    std::uint64_t tag = 0;
    TimePs insert_time = 0;
    TimePs evict_time = 0;
    std::vector<ResidencyEpoch> epochs;
};

using ResidencyLog = std::vector<Residency>;

// Builds the residency log from cache-engine callbacks during a run.
class ResidencyTracker : public CacheObserver {
public:
    void on_install(std::uint32_t set, std::uint32_t way, std::uint64_t tag, bool /*write*/, TimePs t) override {
        Open& o = open_[key(set, way)];
        o.active = true;
        o.res = Residency{set, tag, t, t, {ResidencyEpoch{t, t}}};
    }

    void on_hit(std::uint32_t set, std::uint32_t way, bool write, TimePs t) override {
        Open& o = open_[key(set, way)];
        if (!o.active) throw InternalError("residency hit without open residency");
        o.res.epochs.back().last_access = t;
        if (write) o.res.epochs.push_back(ResidencyEpoch{t, t});
    }

    void on_evict(std::uint32_t set, std::uint32_t way, TimePs t, EvictReason /*reason*/) override {
        auto it = open_.find(key(set, way));
        if (it == open_.end() || !it->second.active) throw InternalError("eviction without open residency");
        it->second.res.evict_time = t;
        log_.push_back(std::move(it->second.res));
        it->second.active = false;
    }

    // Closes residencies still resident when the run ends.
    ResidencyLog finish(TimePs end_time) {
        for (auto& [k, o] : open_) {
            if (!o.active) continue;
            o.res.evict_time = end_time > o.res.epochs.back().last_access ? end_time
                                                                          : o.res.epochs.back().last_access;
            log_.push_back(std::move(o.res));
            o.active = false;
        }
        return std::move(log_);
    }

private:
    struct Open {
        bool active = false;
        Residency res;
    };
    static std::uint64_t key(std::uint32_t set, std::uint32_t way) {
        return (static_cast<std::uint64_t>(set) << 8) | way;
    }
    std::unordered_map<std::uint64_t, Open> open_;
    ResidencyLog log_;
};

// Perfect-DRS refresh count: within each write epoch, a refresh fires at every
// multiple of the retention time after the epoch start, and is necessary (and
// therefore counted) only when some access to the block occurs strictly after
// that instant. Refresh instants are aligned per block to the epoch's write
// time, not to a global clock.
inline std::uint64_t count_perfect_refreshes(const ResidencyLog& log, TimePs retention_ps) {
    if (retention_ps <= 0) throw ValidationError("retention_time: must be positive");
    std::uint64_t refreshes = 0;
    for (const Residency& res : log) {
        if (!(res.insert_time <= res.evict_time)) throw ValidationError("residency log: insert after evict");
        for (const ResidencyEpoch& ep : res.epochs) {
            if (ep.last_access < ep.start) throw ValidationError("residency log: access before epoch start");
            TimePs span = ep.last_access - ep.start;
            if (span > 0) refreshes += static_cast<std::uint64_t>((span - 1) / retention_ps);
        }
    }
    return refreshes;
}

inline std::uint64_t count_perfect_refreshes_s(const ResidencyLog& log, double retention_s) {
    return count_perfect_refreshes(log, seconds_to_ps(retention_s));
}

}  // namespace lars
