#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lars/error.hpp"
#include "lars/time.hpp"

namespace lars {

enum class Op : std::uint8_t { Read, Write };

inline constexpr std::uint64_t kMaxAddress = 1ULL << 48;

// One memory reference. icount is the cumulative instruction count at the
// reference; cycle is an optional explicit timestamp that overrides the
// IPC=1 icount-to-time mapping when >= 0.
struct TraceRecord {
    std::uint64_t icount = 0;
    Op op = Op::Read;
    std::uint64_t address = 0;
    std::int64_t cycle = -1;

    bool operator==(const TraceRecord&) const = default;
};

// Simulated wall-clock time of a record at the given clock (IPC = 1 unless an
// explicit cycle stamp is present).
inline TimePs record_time_ps(const TraceRecord& rec, double frequency_hz) {
    double cycles = rec.cycle >= 0 ? static_cast<double>(rec.cycle) : static_cast<double>(rec.icount);
    return static_cast<TimePs>(std::llround(cycles * (kPsPerSecond / frequency_hz)));
}

// ---------------------------------------------------------------------------
// Text trace grammar, one record per line:
//   <icount> <R|W> <hex-address> [<cycle>]
// The address accepts an optional 0x prefix. '#' begins a comment; blank
// lines are skipped. icount must be non-decreasing across the file.
// ---------------------------------------------------------------------------

class TraceReader {
public:
    explicit TraceReader(std::istream& in, std::string origin = "<trace>")
        : in_(&in), origin_(std::move(origin)) {}

    std::optional<TraceRecord> next() {
        std::string line;
        while (std::getline(*in_, line)) {
            ++lineno_;
            std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::string icount_tok, op_tok, addr_tok, cycle_tok, extra;
            if (!(ls >> icount_tok)) continue;  // blank line
            if (!(ls >> op_tok >> addr_tok)) fail("expected '<icount> <R|W> <hex-address>'");
            bool has_cycle = static_cast<bool>(ls >> cycle_tok);
            if (ls >> extra) fail("trailing token '" + extra + "'");

            TraceRecord rec;
            rec.icount = parse_u64(icount_tok, 10, "icount");
            if (op_tok == "R")
                rec.op = Op::Read;
            else if (op_tok == "W")
                rec.op = Op::Write;
            else
                fail("bad op '" + op_tok + "' (expected R or W)");
            std::string a = addr_tok;
            if (a.size() > 2 && a[0] == '0' && (a[1] == 'x' || a[1] == 'X')) a = a.substr(2);
            rec.address = parse_u64(a, 16, "address");
            if (rec.address >= kMaxAddress) fail("address exceeds 2^48");
            if (has_cycle) rec.cycle = static_cast<std::int64_t>(parse_u64(cycle_tok, 10, "cycle"));

            if (last_icount_ && rec.icount < *last_icount_)
                throw TraceError(origin_ + ":" + std::to_string(lineno_) +
                                 ": icount ordering violation (went from " + std::to_string(*last_icount_) +
                                 " to " + std::to_string(rec.icount) + ")");
            last_icount_ = rec.icount;
            return rec;
        }
        return std::nullopt;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(origin_ + ":" + std::to_string(lineno_) + ": " + msg);
    }
    std::uint64_t parse_u64(const std::string& tok, int base, const char* what) const {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &pos, base);
        } catch (const std::exception&) {
            fail(std::string("bad ") + what + " '" + tok + "'");
        }
        if (pos != tok.size()) fail(std::string("bad ") + what + " '" + tok + "'");
        return v;
    }

    std::istream* in_;
    std::string origin_;
    int lineno_ = 0;
    std::optional<std::uint64_t> last_icount_;
};

inline std::vector<TraceRecord> read_trace(std::istream& in, const std::string& origin = "<trace>") {
    TraceReader reader(in, origin);
    std::vector<TraceRecord> out;
    while (auto rec = reader.next()) out.push_back(*rec);
    return out;
}

inline std::vector<TraceRecord> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trace file: " + path);
    return read_trace(in, path);
}

inline void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
    char buf[96];
    for (const TraceRecord& r : records) {
        if (r.cycle >= 0)
            std::snprintf(buf, sizeof(buf), "%llu %c 0x%llx %lld\n", (unsigned long long)r.icount,
                          r.op == Op::Read ? 'R' : 'W', (unsigned long long)r.address, (long long)r.cycle);
        else
            std::snprintf(buf, sizeof(buf), "%llu %c 0x%llx\n", (unsigned long long)r.icount,
                          r.op == Op::Read ? 'R' : 'W', (unsigned long long)r.address);
        out << buf;
    }
}

inline void write_trace_file(const std::string& path, const std::vector<TraceRecord>& records) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open trace file for writing: " + path);
    write_trace(out, records);
}

// ---------------------------------------------------------------------------
// Synthetic workload generation.
// ---------------------------------------------------------------------------

struct DistSpec {
    enum class Kind { Fixed, Uniform, Exponential } kind = Kind::Fixed;
    double a = 0.0;  // Fixed: value; Uniform: lower bound; Exponential: mean
    double b = 0.0;  // Uniform: upper bound

    static DistSpec fixed(double v) { return {Kind::Fixed, v, 0.0}; }
    static DistSpec uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
    static DistSpec exponential(double mean) { return {Kind::Exponential, mean, 0.0}; }

    double mean() const {
        switch (kind) {
            case Kind::Fixed: return a;
            case Kind::Uniform: return (a + b) / 2.0;
            case Kind::Exponential: return a;
        }
        return a;
    }
    double sample(std::mt19937_64& rng) const {
        switch (kind) {
            case Kind::Fixed: return a;
            case Kind::Uniform: return std::uniform_real_distribution<double>(a, b)(rng);
            case Kind::Exponential: {
                double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                return -a * std::log1p(-u);
            }
        }
        return a;
    }

    bool operator==(const DistSpec&) const = default;
};

// Parses "fixed:X", "uniform:LO:HI", "exp:MEAN".
inline DistSpec parse_dist(const std::string& text) {
    auto split = [&] {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : text) {
            if (c == ':') {
                parts.push_back(cur);
                cur.clear();
            } else
                cur.push_back(c);
        }
        parts.push_back(cur);
        return parts;
    }();
    auto num = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ParseError("bad distribution parameter '" + s + "' in '" + text + "'");
        }
    };
    if (split.size() == 2 && split[0] == "fixed") return DistSpec::fixed(num(split[1]));
    if (split.size() == 3 && split[0] == "uniform") return DistSpec::uniform(num(split[1]), num(split[2]));
    if (split.size() == 2 && (split[0] == "exp" || split[0] == "exponential"))
        return DistSpec::exponential(num(split[1]));
    throw ParseError("bad distribution spec '" + text + "' (want fixed:X | uniform:LO:HI | exp:MEAN)");
}

inline std::string format_dist(const DistSpec& d) {
    char buf[96];
    switch (d.kind) {
        case DistSpec::Kind::Fixed: std::snprintf(buf, sizeof(buf), "fixed:%.12g", d.a); break;
        case DistSpec::Kind::Uniform: std::snprintf(buf, sizeof(buf), "uniform:%.12g:%.12g", d.a, d.b); break;
        case DistSpec::Kind::Exponential: std::snprintf(buf, sizeof(buf), "exp:%.12g", d.a); break;
    }
    return buf;
}

// A workload is a population of `num_blocks` concurrently live block slots.
// Each slot residency draws a lifetime (seconds); the slot is re-touched at
// inter_access_gap spacing within that lifetime, receives its final touch
// exactly at the lifetime end, then retires and respawns at a fresh address.
// Lifetimes therefore land on retention-expiry boundaries by construction.
struct WorkloadSpec {
    std::uint64_t num_blocks = 16;
    std::uint64_t working_set_bytes = 1 << 20;
    double write_fraction = 0.3;
    DistSpec inter_access_gap = DistSpec::fixed(1000);  // instructions
    DistSpec reuse_lifetime = DistSpec::fixed(0.005);   // seconds
    std::uint64_t seed = 1;
    std::uint64_t length = 100000;  // total references
    double frequency_hz = 2e9;      // icount -> seconds mapping (IPC = 1)
    std::uint64_t addr_align_bytes = 64;

    bool operator==(const WorkloadSpec&) const = default;
};

inline void validate_workload_spec(const WorkloadSpec& spec) {
    if (spec.addr_align_bytes < 1) throw ValidationError("workload.addr_align_bytes: must be >= 1");
    if (spec.working_set_bytes < spec.addr_align_bytes)
        throw ValidationError("workload.working_set_bytes: smaller than one line");
    if (spec.working_set_bytes > kMaxAddress) throw ValidationError("workload.working_set_bytes: exceeds 2^48");
    if (spec.num_blocks < 1) throw ValidationError("workload.num_blocks: must be >= 1");
    if (spec.num_blocks > spec.working_set_bytes / spec.addr_align_bytes)
        throw ValidationError("workload.num_blocks: more concurrent blocks than aligned lines in the working set");
    if (!(spec.write_fraction >= 0.0 && spec.write_fraction <= 1.0))
        throw ValidationError("workload.write_fraction: must be in [0,1]");
    if (!(spec.frequency_hz > 0)) throw ValidationError("workload.frequency_hz: must be > 0");
    if (spec.inter_access_gap.mean() < 0 || spec.reuse_lifetime.mean() < 0)
        throw ValidationError("workload: distribution parameters must be non-negative");
}

class TraceGenerator {
public:
    explicit TraceGenerator(const WorkloadSpec& spec) : spec_(spec), rng_(spec.seed) {
        validate_workload_spec(spec_);
        num_lines_ = spec_.working_set_bytes / spec_.addr_align_bytes;
        stride_ = pick_stride(num_lines_);
        std::uint64_t mean_gap = std::max<std::uint64_t>(1, (std::uint64_t)spec_.inter_access_gap.mean());
        for (std::uint64_t i = 0; i < spec_.num_blocks; ++i) {
            Slot s;
            s.id = i;
            spawn(s, i * mean_gap / spec_.num_blocks);
            heap_.push(s);
        }
    }

    std::optional<TraceRecord> next() {
        if (emitted_ >= spec_.length || heap_.empty()) return std::nullopt;
        Slot s = heap_.top();
        heap_.pop();
        TraceRecord rec;
        rec.icount = s.next_icount;
        rec.address = s.address;
        rec.op = coin() < spec_.write_fraction ? Op::Write : Op::Read;
        ++emitted_;

        if (s.next_icount >= s.death_icount) {
            // Residency complete; respawn at a fresh address after a gap.
            spawn(s, s.death_icount + gap_draw());
        } else {
            std::uint64_t t = s.next_icount + gap_draw();
            s.next_icount = std::min(t, s.death_icount);
        }
        heap_.push(s);
        return rec;
    }

private:
    struct Slot {
        std::uint64_t id = 0;
        std::uint64_t address = 0;
        std::uint64_t next_icount = 0;
        std::uint64_t death_icount = 0;
        bool operator>(const Slot& o) const {
            return next_icount != o.next_icount ? next_icount > o.next_icount : id > o.id;
        }
    };

    static std::uint64_t pick_stride(std::uint64_t n) {
        if (n <= 1) return 1;
        std::uint64_t s = (std::uint64_t)(0.6180339887 * (double)n) | 1ULL;
        while (std::gcd(s, n) != 1) s += 2;
        return s % n == 0 ? 1 : s % n;
    }

    double coin() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    std::uint64_t gap_draw() {
        double g = spec_.inter_access_gap.sample(rng_);
        return g < 1.0 ? 1 : (std::uint64_t)std::llround(g);
    }

    void spawn(Slot& s, std::uint64_t start_icount) {
        std::uint64_t line = (next_residency_++ * stride_) % num_lines_;
        s.address = line * spec_.addr_align_bytes;
        s.next_icount = start_icount;
        double life_s = spec_.reuse_lifetime.sample(rng_);
        auto life_instr = (std::uint64_t)std::llround(std::max(0.0, life_s) * spec_.frequency_hz);
        s.death_icount = start_icount + life_instr;
    }

    WorkloadSpec spec_;
    std::mt19937_64 rng_;
    std::uint64_t num_lines_ = 0;
    std::uint64_t stride_ = 1;
    std::uint64_t next_residency_ = 0;
    std::uint64_t emitted_ = 0;
    std::priority_queue<Slot, std::vector<Slot>, std::greater<Slot>> heap_;
};

inline std::vector<TraceRecord> generate_trace(const WorkloadSpec& spec) {
    TraceGenerator gen(spec);
    std::vector<TraceRecord> out;
    out.reserve(spec.length);
    while (auto rec = gen.next()) out.push_back(*rec);
    return out;
}

}  // namespace lars
