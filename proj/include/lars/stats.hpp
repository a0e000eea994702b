#pragma once

#include <cstdint>

namespace lars {

// Raw event counters for one simulation (or one tuning window).
struct SimStats {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t read_hits = 0;
    std::uint64_t write_hits = 0;
    std::uint64_t read_misses = 0;
    std::uint64_t write_misses = 0;
    std::uint64_t expiration_misses = 0;  // misses attributable to retention expiry
    std::uint64_t writebacks = 0;         // dirty evictions + dirty expirations + flushes
    std::uint64_t refreshes = 0;          // perfect-DRS refresh operations
    std::uint64_t migrations_in_blocks = 0;
    std::uint64_t total_cycles = 0;
    double sim_time_s = 0.0;

    std::uint64_t accesses() const { return reads + writes; }
    std::uint64_t misses() const { return read_misses + write_misses; }
    std::uint64_t hits() const { return read_hits + write_hits; }
    double miss_rate() const {
        return accesses() == 0 ? 0.0 : static_cast<double>(misses()) / static_cast<double>(accesses());
    }

    SimStats& operator+=(const SimStats& o) {
        reads += o.reads;
        writes += o.writes;
        read_hits += o.read_hits;
        write_hits += o.write_hits;
        read_misses += o.read_misses;
        write_misses += o.write_misses;
        expiration_misses += o.expiration_misses;
        writebacks += o.writebacks;
        refreshes += o.refreshes;
        migrations_in_blocks += o.migrations_in_blocks;
        total_cycles += o.total_cycles;
        sim_time_s = sim_time_s > o.sim_time_s ? sim_time_s : o.sim_time_s;
        return *this;
    }

    bool operator==(const SimStats&) const = default;
};

}  // namespace lars
