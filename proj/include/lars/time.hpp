#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>

#include "lars/error.hpp"

namespace lars {

// Simulated time is kept in integer picoseconds so that monitor-clock and
// refresh-instant arithmetic is exact (no floating-point tick drift between
// the engine and the brute-force oracles). int64 picoseconds cover ~106 days
// of simulated time, far beyond desk-scale runs.
using TimePs = std::int64_t;

inline constexpr double kPsPerSecond = 1e12;

inline TimePs seconds_to_ps(double seconds) {
    double ps = seconds * kPsPerSecond;
    if (!(ps >= 0.0) || ps > static_cast<double>(std::numeric_limits<TimePs>::max()))
        throw ValidationError("time out of representable range: " + std::to_string(seconds) + " s");
    return static_cast<TimePs>(std::llround(ps));
}

inline double ps_to_seconds(TimePs ps) {
    return static_cast<double>(ps) / kPsPerSecond;
}

// Parses a duration like "100ms", "10us", "1e-3s", "0.5 s". Suffixes: s, ms, us, ns.
// "inf" denotes infinite retention (SRAM).
inline double parse_duration_s(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t == "inf" || t == "infinite") return std::numeric_limits<double>::infinity();
    double scale = 1.0;
    if (t.size() >= 2 && t.compare(t.size() - 2, 2, "ms") == 0) {
        scale = 1e-3;
        t.resize(t.size() - 2);
    } else if (t.size() >= 2 && t.compare(t.size() - 2, 2, "us") == 0) {
        scale = 1e-6;
        t.resize(t.size() - 2);
    } else if (t.size() >= 2 && t.compare(t.size() - 2, 2, "ns") == 0) {
        scale = 1e-9;
        t.resize(t.size() - 2);
    } else if (!t.empty() && t.back() == 's') {
        t.resize(t.size() - 1);
    }
    if (t.empty()) throw ParseError("empty duration");
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw ParseError("bad duration: '" + text + "'");
    }
    if (pos != t.size()) throw ParseError("bad duration: '" + text + "'");
    return value * scale;
}

// Formats a duration with the largest suffix that keeps the mantissa clean.
inline std::string format_duration_s(double seconds) {
    if (std::isinf(seconds)) return "inf";
    struct Unit {
        double scale;
        const char* suffix;
    };
    static const Unit units[] = {{1.0, "s"}, {1e-3, "ms"}, {1e-6, "us"}, {1e-9, "ns"}};
    for (const Unit& u : units) {
        double v = seconds / u.scale;
        if (v >= 1.0 - 1e-12 || seconds == 0.0) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.12g%s", v, u.suffix);
            return buf;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12gns", seconds / 1e-9);
    return buf;
}

}  // namespace lars
