#include "helpers.hpp"
#include "tcer/compiler.hpp"
#include "tcer/determinizer.hpp"
#include "tcer/fixtures.hpp"
#include "tcer/io.hpp"

using namespace tcer;
using namespace tcer::test;

namespace {

const char* kSwg =
    "(((A OR B OR C) AS X1) FILTER X1[v >= 2] ;[0,3] ((A OR B OR C) AS X2) FILTER X2[v < 3]) WITHIN [0,5]";

std::size_t count_resets(const TimedCea& a, const Clock& z) {
    std::size_t n = 0;
    for (const auto& t : a.delta) n += t.resets.count(z);
    return n;
}

std::size_t count_reads(const TimedCea& a, const Clock& z) {
    std::size_t n = 0;
    for (const auto& t : a.delta) n += t.guard.clocks().count(z);
    return n;
}

}  // namespace

TEST_SUITE("compiler") {

TEST_CASE("a single event type") {
    TimedCea a = compile(cel::event_type("R"));
    CHECK(a.num_states == 2);
    CHECK(a.delta.size() == 1);
    CHECK(a.clocks.empty());
    CHECK(a.delta[0].label == VarSet{"R"});
}

TEST_CASE("the temperature/humidity query against its hand-built automaton") {
    TimedStream s = sensor_example_stream();
    for (Cmp cmp : {Cmp::Gt, Cmp::Ge}) {
        Cel f = parse_query(kQueryTempHum);
        if (cmp == Cmp::Ge) f = with_ge40(f);
        TimedCea hand = temp_hum_one_clock(cmp);
        CHECK(eval_cea_oracle(compile(f), s) == eval_cea_oracle(hand, s));
        CHECK(eval_cea_oracle(compile_windowed(f), s) == eval_cea_oracle(hand, s));
    }
    // The narrative match needs the non-strict reading of "above 40".
    CHECK(eval_cea_oracle(temp_hum_one_clock(Cmp::Ge), s) == CeSet{ce(5, 9, {{"X", {5}}, {"Y", {9}}})});
    CHECK(eval_cea_oracle(temp_hum_one_clock(Cmp::Gt), s).empty());
}

TEST_CASE("the temperature/humidity query agrees with its hand-built automaton on generated streams") {
    Rng rng(41);
    Cel f = with_ge40(parse_query(kQueryTempHum));
    TimedCea compiled = compile_windowed(f), hand = temp_hum_one_clock(Cmp::Ge);
    for (int k = 0; k < 40; ++k) {
        TimedStream s = sensor_stream(rng, 12);
        CHECK(eval_cea_oracle(compiled, s) == eval_cea_oracle(hand, s));
    }
}

TEST_CASE("windowed compilation") {
    Cel swg = parse_query(kSwg);
    TimedCea a = compile_windowed(swg);
    CHECK(a.clocks.size() <= 2);
    CHECK(check_sync(a).verdict == SyncVerdict::Yes);
    Rng rng(42);
    for (int k = 0; k < 40; ++k) {
        TimedStream s = random_stream(rng, 1 + rng() % 10);
        CHECK(eval_cea_oracle(a, s) == eval_cel_oracle(swg, s));
    }
    // Without a window the z_N clock is reset but never read.
    TimedCea simple = compile_windowed(parse_query("A AS X ; B AS Y"));
    CHECK(count_reads(simple, kWindowClock) == 0);
    CHECK_NOTHROW(compile_windowed(parse_query(kQueryTempHum)));
    CHECK_THROWS_AS(compile_windowed(parse_query("((A ; B) WITHIN [0,2]) ;[0,1] C")), NotWindowed);
    (void)count_resets;
}

TEST_CASE("a window that excludes zero rejects single events") {
    Rng rng(43);
    Cel f = cel::within(cel::event_type("A"), Interval::closed(Rational(1), Rational(2)));
    TimedCea a = compile(f);
    for (int k = 0; k < 20; ++k) CHECK(eval_cea_oracle(a, random_stream(rng, 6)).empty());
}

TEST_CASE("conjunction uses disjoint clocks") {
    Cel a = parse_query("A ;[0,1] B");
    Cel b = parse_query("(A ; B) WITHIN [0,2]");
    std::size_t ca = compile(a).clocks.size(), cb = compile(b).clocks.size();
    CHECK(compile(cel::conj(a, b)).clocks.size() == ca + cb);
}

TEST_CASE("property: compiled automata are well formed and sound") {
    Rng rng(44);
    int checked = 0;
    while (checked < 120) {
        Cel f = random_formula(rng, 3);
        TimedCea a = compile(f);
        CHECK(no_initial_incoming(a));
        CHECK_FALSE(clock_use_violation(a).has_value());
        TimedStream s = random_stream(rng, 1 + rng() % 8);
        try {
            CeSet want = eval_cel_oracle(f, s);
            INFO(print_query(f));
            CHECK(eval_cea_oracle(a, s) == want);
            ++checked;
        } catch (const OracleLimit&) {
        }
    }
}

}
