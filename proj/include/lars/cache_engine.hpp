#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "lars/config.hpp"
#include "lars/error.hpp"
#include "lars/time.hpp"
#include "lars/trace.hpp"

namespace lars {

enum class AccessKind : std::uint8_t { ReadHit, WriteHit, ReadMiss, WriteMiss };

inline bool is_miss(AccessKind k) {
    return k == AccessKind::ReadMiss || k == AccessKind::WriteMiss;
}

struct AccessOutcome {
    AccessKind kind = AccessKind::ReadMiss;
    bool caused_writeback = false;       // dirty victim evicted by the linefill
    bool expired_before_access = false;  // the missed block's previous residency ended by expiry
};

enum class EvictReason : std::uint8_t { Replace, Expire, Flush };

struct ExpirationEvent {
    std::uint32_t set = 0;
    std::uint32_t way = 0;
    bool dirty = false;     // written back to lower memory at expiry
    TimePs expiry_time = 0;
};

// Callbacks for residency bookkeeping (used by the perfect-DRS refresh pass).
class CacheObserver {
public:
    virtual ~CacheObserver() = default;
    virtual void on_install(std::uint32_t set, std::uint32_t way, std::uint64_t tag, bool write, TimePs t) = 0;
    virtual void on_hit(std::uint32_t set, std::uint32_t way, bool write, TimePs t) = 0;
    virtual void on_evict(std::uint32_t set, std::uint32_t way, TimePs t, EvictReason reason) = 0;
};

struct BlockFrame {
    bool valid = false;
    bool dirty = false;
    std::uint64_t tag = 0;
    std::uint32_t lru_rank = 0;        // 0 = most recently used among valid frames
    std::uint32_t counter_state = 0;   // monitor counter, always < N
    TimePs last_write = 0;             // last array write (install, write hit, or migration)
    // Expired-tag ghost: remembers the tag whose residency this frame ended by
    // expiry, until the frame is reused. Used to attribute expiration misses.
    bool ghost = false;
    std::uint64_t ghost_tag = 0;
};

enum class ExpiryMode : std::uint8_t {
    // Counters tick on a global monitor clock aligned at t=0 (period
    // retention/N); a block expires when its counter reaches N-1.
    Quantized,
    // Oracle mode: a block expires at exactly last_write + retention.
    Exact,
};

// Set-associative write-back write-allocate cache with LRU replacement and a
// per-block monitor counter that enforces retention expiry. Retention may be
// infinite (SRAM / policy-equivalent runs), in which case nothing expires.
class CacheState {
public:
    CacheState(const CacheGeometry& geometry, const SimClock& clock, double retention_s,
               ExpiryMode mode = ExpiryMode::Quantized)
        : geometry_(geometry),
          divisor_n_(clock.monitor_divisor_n),
          mode_(mode),
          num_sets_(geometry.num_sets()),
          frames_(num_sets_ * geometry.associativity) {
        set_retention(retention_s);
    }

    std::uint64_t num_sets() const { return num_sets_; }
    std::uint32_t associativity() const { return geometry_.associativity; }
    bool infinite_retention() const { return infinite_; }
    double retention_s() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : ps_to_seconds(retention_ps_);
    }
    TimePs retention_ps() const { return retention_ps_; }
    TimePs monitor_period_ps() const { return period_ps_; }
    TimePs now() const { return now_; }
    void set_observer(CacheObserver* obs) { observer_ = obs; }

    const BlockFrame& frame(std::uint64_t set, std::uint32_t way) const {
        return frames_[set * geometry_.associativity + way];
    }

    std::uint64_t set_index(std::uint64_t address) const {
        return (address / geometry_.line_size_bytes) % num_sets_;
    }
    std::uint64_t tag_of(std::uint64_t address) const {
        return (address / geometry_.line_size_bytes) / num_sets_;
    }

    std::uint64_t valid_block_count() const {
        std::uint64_t n = 0;
        for (const BlockFrame& f : frames_)
            if (f.valid) ++n;
        return n;
    }

    // Advances the monitor clock for the whole cache, expiring every block
    // whose counter has reached N-1 since its last write. Time must not run
    // backwards.
    std::vector<ExpirationEvent> advance_time(TimePs now) {
        bump_now(now);
        std::vector<ExpirationEvent> events;
        for (std::uint64_t set = 0; set < num_sets_; ++set) advance_set(set, now, events);
        return events;
    }

    // One memory reference. Expiry in the touched set is applied first (so a
    // prior global advance_time at the same timestamp is not required);
    // expiration events discovered here are appended to *expired.
    AccessOutcome access(const TraceRecord& rec, TimePs now, std::vector<ExpirationEvent>* expired = nullptr) {
        bump_now(now);
        std::uint64_t set = set_index(rec.address);
        std::uint64_t tag = tag_of(rec.address);
        bool is_write = rec.op == Op::Write;

        std::vector<ExpirationEvent> local;
        std::vector<ExpirationEvent>& events = expired ? *expired : local;
        advance_set(set, now, events);

        BlockFrame* frames = set_frames(set);
        AccessOutcome out;

        for (std::uint32_t way = 0; way < geometry_.associativity; ++way) {
            BlockFrame& f = frames[way];
            if (!f.valid || f.tag != tag) continue;
            // Retention safety: a hit must never expose data older than the
            // retention time (plus one period of quantization slack).
            if (!infinite_) {
                TimePs age = now - f.last_write;
                check_internal(mode_ == ExpiryMode::Exact ? age < retention_ps_ : age <= retention_ps_ + period_ps_,
                               "read hit on a block past its retention time");
            }
            promote_existing(frames, way);
            if (is_write) {
                f.dirty = true;
                f.last_write = now;
                f.counter_state = 0;  // write resets the monitor FSM to S0
                out.kind = AccessKind::WriteHit;
            } else {
                out.kind = AccessKind::ReadHit;  // reads do not reset the counter
            }
            if (observer_) observer_->on_hit((std::uint32_t)set, way, is_write, now);
            return out;
        }

        // Miss: pick victim (invalid frame at the lowest way first, else LRU).
        out.kind = is_write ? AccessKind::WriteMiss : AccessKind::ReadMiss;
        std::uint32_t victim = geometry_.associativity;
        for (std::uint32_t way = 0; way < geometry_.associativity; ++way) {
            if (!frames[way].valid) {
                victim = way;
                break;
            }
        }
        if (victim == geometry_.associativity) {
            for (std::uint32_t way = 0; way < geometry_.associativity; ++way)
                if (frames[way].lru_rank == geometry_.associativity - 1) victim = way;
            check_internal(victim != geometry_.associativity, "full set has no LRU victim");
            BlockFrame& v = frames[victim];
            out.caused_writeback = v.dirty;
            if (observer_) observer_->on_evict((std::uint32_t)set, victim, now, EvictReason::Replace);
            invalidate(frames, victim);
        }

        // A ghost matching this tag means its previous residency ended by expiry.
        for (std::uint32_t way = 0; way < geometry_.associativity; ++way) {
            if (frames[way].ghost && frames[way].ghost_tag == tag) {
                out.expired_before_access = true;
                frames[way].ghost = false;
                break;
            }
        }
        BlockFrame& f = frames[victim];
        f.valid = true;
        f.dirty = is_write;  // write-allocate
        f.tag = tag;
        f.last_write = now;  // the linefill writes the array
        f.counter_state = 0;
        f.ghost = false;
        promote_new(frames, victim);
        if (observer_) observer_->on_install((std::uint32_t)set, victim, tag, is_write, now);
        return out;
    }

    // Invalidates every frame, emitting writeback events for dirty ones.
    std::vector<ExpirationEvent> flush() {
        std::vector<ExpirationEvent> events;
        for (std::uint64_t set = 0; set < num_sets_; ++set) {
            BlockFrame* frames = set_frames(set);
            for (std::uint32_t way = 0; way < geometry_.associativity; ++way) {
                BlockFrame& f = frames[way];
                if (f.valid) {
                    if (f.dirty) events.push_back({(std::uint32_t)set, way, true, now_});
                    if (observer_) observer_->on_evict((std::uint32_t)set, way, now_, EvictReason::Flush);
                }
                f = BlockFrame{};
            }
        }
        return events;
    }

    // Unit switch: the same logical content now lives in a unit with a new
    // retention time. Every valid block was physically rewritten during the
    // migration, so counters reset and last_write becomes the switch time.
    void rebase_retention(double new_retention_s, TimePs now) {
        bump_now(now);
        set_retention(new_retention_s);
        for (BlockFrame& f : frames_) {
            if (!f.valid) continue;
            f.last_write = now;
            f.counter_state = 0;
        }
    }

private:
    void set_retention(double retention_s) {
        infinite_ = std::isinf(retention_s);
        if (infinite_) {
            retention_ps_ = std::numeric_limits<TimePs>::max();
            period_ps_ = std::numeric_limits<TimePs>::max();
        } else {
            if (!(retention_s > 0)) throw ValidationError("retention_time: must be positive");
            retention_ps_ = seconds_to_ps(retention_s);
            period_ps_ = retention_ps_ / divisor_n_;
            if (period_ps_ < 1) throw ValidationError("retention_time: shorter than one monitor tick resolution");
        }
    }

    void bump_now(TimePs now) {
        if (now < now_) throw TraceError("time regression: simulated clock moved backwards");
        now_ = now;
    }

    BlockFrame* set_frames(std::uint64_t set) { return frames_.data() + set * geometry_.associativity; }

    // Applies monitor-counter progress for one set up to `now`.
    void advance_set(std::uint64_t set, TimePs now, std::vector<ExpirationEvent>& events) {
        if (infinite_) return;
        BlockFrame* frames = set_frames(set);
        for (std::uint32_t way = 0; way < geometry_.associativity; ++way) {
            BlockFrame& f = frames[way];
            if (!f.valid) continue;
            if (mode_ == ExpiryMode::Quantized) {
                // Ticks land on the global grid k*period; the counter counts
                // ticks in (last_write, now].
                TimePs ticks = now / period_ps_ - f.last_write / period_ps_;
                if (ticks >= divisor_n_ - 1) {
                    TimePs expiry = (f.last_write / period_ps_ + divisor_n_ - 1) * period_ps_;
                    expire(set, frames, way, expiry, events);
                } else {
                    f.counter_state = (std::uint32_t)ticks;
                }
            } else {
                TimePs age = now - f.last_write;
                if (age >= retention_ps_) {
                    expire(set, frames, way, f.last_write + retention_ps_, events);
                } else {
                    std::uint32_t ticks = (std::uint32_t)(age / period_ps_);
                    f.counter_state = ticks < divisor_n_ - 1 ? ticks : divisor_n_ - 1;
                }
            }
        }
    }

    void expire(std::uint64_t set, BlockFrame* frames, std::uint32_t way, TimePs expiry_time,
                std::vector<ExpirationEvent>& events) {
        BlockFrame& f = frames[way];
        f.counter_state = divisor_n_ - 1;  // S_{N-1}: E signal raised
        events.push_back({(std::uint32_t)set, way, f.dirty, expiry_time});
        if (observer_) observer_->on_evict((std::uint32_t)set, way, expiry_time, EvictReason::Expire);
        std::uint64_t tag = f.tag;
        invalidate(frames, way);
        frames[way].ghost = true;
        frames[way].ghost_tag = tag;
    }

    // Removes a frame from the LRU order, keeping valid ranks a dense
    // permutation of {0..k-1}.
    void invalidate(BlockFrame* frames, std::uint32_t way) {
        std::uint32_t gone_rank = frames[way].lru_rank;
        for (std::uint32_t w = 0; w < geometry_.associativity; ++w)
            if (frames[w].valid && frames[w].lru_rank > gone_rank) --frames[w].lru_rank;
        frames[way] = BlockFrame{};
    }

    // Moves an already-valid frame to MRU (rank 0).
    void promote_existing(BlockFrame* frames, std::uint32_t way) {
        std::uint32_t prev = frames[way].lru_rank;
        for (std::uint32_t w = 0; w < geometry_.associativity; ++w)
            if (frames[w].valid && frames[w].lru_rank < prev) ++frames[w].lru_rank;
        frames[way].lru_rank = 0;
    }

    // Inserts a freshly installed frame at MRU, aging everything else.
    void promote_new(BlockFrame* frames, std::uint32_t way) {
        for (std::uint32_t w = 0; w < geometry_.associativity; ++w)
            if (frames[w].valid && w != way) ++frames[w].lru_rank;
        frames[way].lru_rank = 0;
    }

    CacheGeometry geometry_;
    std::uint32_t divisor_n_;
    ExpiryMode mode_;
    std::uint64_t num_sets_;
    std::vector<BlockFrame> frames_;
    bool infinite_ = true;
    TimePs retention_ps_ = 0;
    TimePs period_ps_ = 0;
    TimePs now_ = 0;
    CacheObserver* observer_ = nullptr;
};

}  // namespace lars
