#include <doctest.h>

#include <random>
#include <sstream>

#include "lars/trace.hpp"
#include "oracles.hpp"

using namespace lars;

TEST_CASE("trace line parsing") {
    std::istringstream in(
        "# header comment\n"
        "100 R 0x1f40\n"
        "\n"
        "150 W 80\n"
        "150 R 0x50 320\n");
    auto recs = read_trace(in, "t");
    REQUIRE(recs.size() == 3);
    CHECK(recs[0] == TraceRecord{100, Op::Read, 0x1f40, -1});
    CHECK(recs[1] == TraceRecord{150, Op::Write, 0x80, -1});
    CHECK(recs[2].cycle == 320);
}

TEST_CASE("empty file yields an empty stream") {
    std::istringstream in("");
    CHECK(read_trace(in).empty());
    std::istringstream comments("# nothing\n\n# here\n");
    CHECK(read_trace(comments).empty());
}

TEST_CASE("ordering violation is rejected with a line number") {
    std::istringstream in("100 W 0x0\n50 R 0x0\n");
    TraceReader reader(in, "t");
    reader.next();
    try {
        reader.next();
        FAIL("expected TraceError");
    } catch (const TraceError& e) {
        CHECK(std::string(e.what()).find("t:2") != std::string::npos);
    }
}

TEST_CASE("malformed lines are rejected") {
    auto expect_parse_error = [](const char* text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_trace(in), ParseError);
    };
    expect_parse_error("abc R 0x0\n");
    expect_parse_error("10 X 0x0\n");
    expect_parse_error("10 R zz\n");
    expect_parse_error("10 R\n");
    expect_parse_error("10 R 0x0 5 extra\n");
    expect_parse_error("10 R 0x1000000000000\n");  // = 2^48
}

TEST_CASE("explicit cycle column overrides the IPC=1 mapping") {
    TraceRecord plain{1000, Op::Read, 0, -1};
    TraceRecord stamped{1000, Op::Read, 0, 4000};
    CHECK(record_time_ps(plain, 2e9) == 500 * 1000);
    CHECK(record_time_ps(stamped, 2e9) == 500 * 4000);
}

TEST_CASE("generator determinism and write fraction") {
    WorkloadSpec spec;
    spec.seed = 7;
    spec.length = 100000;
    spec.write_fraction = 0.3;

    auto t1 = generate_trace(spec);
    auto t2 = generate_trace(spec);
    REQUIRE(t1.size() == spec.length);
    CHECK(t1 == t2);

    std::ostringstream s1, s2;
    write_trace(s1, t1);
    write_trace(s2, t2);
    CHECK(s1.str() == s2.str());  // byte-identical

    std::uint64_t writes = 0;
    for (const auto& r : t1)
        if (r.op == Op::Write) ++writes;
    double frac = (double)writes / (double)t1.size();
    CHECK(std::abs(frac - 0.3) < 0.01);
}

TEST_CASE("write_fraction zero emits no writes") {
    WorkloadSpec spec;
    spec.write_fraction = 0.0;
    spec.length = 5000;
    for (const auto& r : generate_trace(spec)) CHECK(r.op == Op::Read);
}

TEST_CASE("addresses stay inside the working set") {
    WorkloadSpec spec;
    spec.working_set_bytes = 1 << 16;
    spec.length = 20000;
    spec.num_blocks = 32;
    for (const auto& r : generate_trace(spec)) CHECK(r.address < spec.working_set_bytes);
}

TEST_CASE("invalid workload specs are rejected") {
    WorkloadSpec spec;
    spec.working_set_bytes = 32;  // smaller than one aligned line
    CHECK_THROWS_AS(validate_workload_spec(spec), ValidationError);

    spec = WorkloadSpec{};
    spec.write_fraction = 1.5;
    CHECK_THROWS_AS(validate_workload_spec(spec), ValidationError);

    spec = WorkloadSpec{};
    spec.num_blocks = 1 << 20;
    spec.working_set_bytes = 1 << 16;
    CHECK_THROWS_AS(validate_workload_spec(spec), ValidationError);
}

TEST_CASE("generated trace round-trips through the text format") {
    WorkloadSpec spec;
    spec.length = 3000;
    spec.seed = 11;
    auto records = generate_trace(spec);
    std::ostringstream out;
    write_trace(out, records);
    std::istringstream in(out.str());
    auto back = read_trace(in);
    CHECK(back == records);
}

TEST_CASE("icount is non-decreasing in generated traces") {
    WorkloadSpec spec;
    spec.length = 50000;
    spec.seed = 3;
    spec.inter_access_gap = DistSpec::exponential(800);
    spec.reuse_lifetime = DistSpec::exponential(0.001);
    auto records = generate_trace(spec);
    for (std::size_t i = 1; i < records.size(); ++i) REQUIRE(records[i].icount >= records[i - 1].icount);
}

TEST_CASE("fixed 5ms lifetimes measure at 5ms within 5%") {
    // Measured with the independent post-hoc analyzer; episodes that could be
    // truncated by the end of the trace are excluded.
    WorkloadSpec spec;
    spec.num_blocks = 8;
    spec.working_set_bytes = 64 << 20;
    spec.reuse_lifetime = DistSpec::fixed(0.005);
    spec.inter_access_gap = DistSpec::fixed(2500);
    spec.frequency_hz = 2e9;
    spec.length = 200000;
    spec.seed = 19;
    auto records = generate_trace(spec);
    auto stats = oracle::measure_lifetimes(records, spec.frequency_hz, /*margin=*/12'000'000);
    REQUIRE(stats.episodes >= 20);
    CHECK(stats.mean_s == doctest::Approx(0.005).epsilon(0.05));
}

TEST_CASE("exponential lifetimes land near the requested mean") {
    WorkloadSpec spec;
    spec.num_blocks = 32;
    spec.working_set_bytes = 64 << 20;
    spec.reuse_lifetime = DistSpec::exponential(0.001);  // 2M instructions at 2 GHz
    spec.inter_access_gap = DistSpec::fixed(1000);
    spec.length = 400000;
    spec.seed = 23;
    auto records = generate_trace(spec);
    auto stats = oracle::measure_lifetimes(records, spec.frequency_hz, /*margin=*/8'000'000);
    REQUIRE(stats.episodes >= 50);
    CHECK(stats.mean_s == doctest::Approx(0.001).epsilon(0.2));
}

TEST_CASE("reader rejects arbitrary garbage without crashing") {
    std::mt19937_64 rng(515);
    const char alphabet[] = "0123456789abxRW #\t\n";
    for (int round = 0; round < 500; ++round) {
        std::string text;
        std::size_t len = rng() % 160;
        for (std::size_t i = 0; i < len; ++i) text.push_back(alphabet[rng() % (sizeof(alphabet) - 1)]);
        std::istringstream in(text);
        try {
            auto records = read_trace(in, "fuzz");
            for (std::size_t i = 1; i < records.size(); ++i)
                CHECK(records[i].icount >= records[i - 1].icount);
        } catch (const Error&) {
            // ParseError / TraceError are the only acceptable outcomes.
        }
    }
}

TEST_CASE("distribution spec parsing") {
    CHECK(parse_dist("fixed:100") == DistSpec::fixed(100));
    CHECK(parse_dist("uniform:10:20") == DistSpec::uniform(10, 20));
    CHECK(parse_dist("exp:0.005") == DistSpec::exponential(0.005));
    CHECK_THROWS_AS(parse_dist("triangle:1"), ParseError);
    CHECK_THROWS_AS(parse_dist("fixed:abc"), ParseError);
    CHECK(parse_dist(format_dist(DistSpec::uniform(1.5, 2.5))) == DistSpec::uniform(1.5, 2.5));
}
