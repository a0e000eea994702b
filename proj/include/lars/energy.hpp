#pragma once

#include <cstdint>

#include "lars/config.hpp"
#include "lars/stats.hpp"

namespace lars {

// Energy/latency/EDP accounting for one simulation (or one tuning window).
// total_nj = dynamic + static + refresh + migration; edp = total * latency_s.
struct EnergyBreakdown {
    double dynamic_nj = 0.0;
    double static_nj = 0.0;
    double refresh_nj = 0.0;
    double migration_nj = 0.0;
    double total_nj = 0.0;
    std::uint64_t latency_cycles = 0;
    double latency_s = 0.0;
    double edp_nj_s = 0.0;

    void recompute_totals(double frequency_hz) {
        latency_s = static_cast<double>(latency_cycles) / frequency_hz;
        total_nj = dynamic_nj + static_nj + refresh_nj + migration_nj;
        edp_nj_s = total_nj * latency_s;
    }

    // Component-wise accumulation; totals and EDP are re-derived by the caller.
    EnergyBreakdown& operator+=(const EnergyBreakdown& o) {
        dynamic_nj += o.dynamic_nj;
        static_nj += o.static_nj;
        refresh_nj += o.refresh_nj;
        migration_nj += o.migration_nj;
        latency_cycles += o.latency_cycles;
        return *this;
    }
};

// Converts raw counters into the energy/latency/EDP breakdown for a run (or
// window) that executed on `unit`:
//   dynamic = reads*E_rd + writes*E_wr + misses*E_wr (linefill)
//           + writebacks*E_rd (line readout), transfers scaled by
//           scheme.line_transfer_weight;
//   static  = leakage power over the accumulated access latency, plus the
//             refresh-buffer leakage for DRS/synergy;
//   refresh = refreshes * (unit read + buffer write + buffer read + unit write).
inline EnergyBreakdown compute_energy(const SimStats& stats, const EnergyParams& unit,
                                      const SchemeConfig& scheme, const SimClock& clock) {
    EnergyBreakdown out;
    double w = scheme.line_transfer_weight;
    out.dynamic_nj = static_cast<double>(stats.reads) * unit.read_energy_nj +
                     static_cast<double>(stats.writes) * unit.write_energy_nj +
                     static_cast<double>(stats.misses()) * unit.write_energy_nj * w +
                     static_cast<double>(stats.writebacks) * unit.read_energy_nj * w;

    out.latency_cycles = stats.total_cycles;
    double latency_s = static_cast<double>(stats.total_cycles) / clock.frequency_hz;

    double leakage_mw = unit.leakage_mw;
    bool multi_unit = scheme.kind == SchemeKind::LARS || scheme.kind == SchemeKind::LARS_DRS_SYNERGY;
    if (multi_unit && scheme.leakage_scope == LeakageScope::AllUnits)
        leakage_mw = scheme.all_units_leakage_mw;
    bool has_buffer = scheme.kind == SchemeKind::DRS_PERFECT || scheme.kind == SchemeKind::LARS_DRS_SYNERGY;
    if (has_buffer) leakage_mw += scheme.buffer_leakage_mw;
    out.static_nj = leakage_mw * 1e-3 * latency_s * 1e9;  // mW * s -> nJ

    out.refresh_nj = static_cast<double>(stats.refreshes) *
                     (unit.read_energy_nj + scheme.buffer_energy.write_energy_nj +
                      scheme.buffer_energy.read_energy_nj + unit.write_energy_nj);

    out.recompute_totals(clock.frequency_hz);
    return out;
}

struct MigrationCost {
    std::uint64_t cycles = 0;
    double energy_nj = 0.0;
};

// Cost of copying `valid_blocks` cache lines from the unit `src` into `dst`:
// one source read plus one destination write per block. The per-block extras
// default to zero and exist for sensitivity studies on migration overhead.
inline MigrationCost migration_cost(std::uint64_t valid_blocks, const EnergyParams& src,
                                    const EnergyParams& dst, std::uint32_t extra_cycles_per_block = 0,
                                    double extra_nj_per_block = 0.0) {
    MigrationCost cost;
    cost.cycles = valid_blocks *
                  (static_cast<std::uint64_t>(src.hit_latency_cycles) + dst.write_latency_cycles +
                   extra_cycles_per_block);
    cost.energy_nj = static_cast<double>(valid_blocks) *
                     (src.read_energy_nj + dst.write_energy_nj + extra_nj_per_block);
    return cost;
}

}  // namespace lars
