#include "helpers.hpp"
#include "tcer/fixtures.hpp"
#include "tcer/io.hpp"

using namespace tcer;
using namespace tcer::test;

TEST_SUITE("cea") {

TEST_CASE("guard satisfaction") {
    Valuation v{{"x", Rational(5)}, {"y", Rational(1, 2)}};
    Guard g1 = Guard::disj(Guard::atom("x", Cmp::Ge, Rational(4)), Guard::atom("y", Cmp::Lt, Rational(1, 2)));
    Guard g2 = Guard::conj(Guard::atom("z", Cmp::Le, Rational(5, 3)), Guard::atom("y", Cmp::Ge, Rational(1)));
    CHECK(guard_sat(v, g1));
    CHECK_FALSE(guard_sat(v, g2));
    CHECK(guard_sat(v, Guard::always()));
    CHECK(guard_sat({}, Guard::always()));
    CHECK_FALSE(guard_sat({}, Guard::atom("z", Cmp::Ge, Rational(0))));
}

TEST_CASE("step on the one-clock automaton") {
    TimedCea t1 = temp_hum_one_clock();
    TimedStream s = sensor_example_stream();
    auto succ = step(t1, 0, {}, s.event(2), s.ts(2));
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].state == 1);
    CHECK(succ[0].val == Valuation{{"z", Rational(0)}});
    CHECK(succ[0].label == VarSet{"X"});

    auto dry = step(t1, 2, {{"z", Rational(2)}}, s.event(9), Rational(1));
    bool reached_final = false;
    for (const auto& x : dry) reached_final = reached_final || (x.state == 3 && x.label == VarSet{"Y"});
    CHECK(reached_final);
    // Too late for the window.
    auto late = step(t1, 2, {{"z", Rational(9, 2)}}, s.event(9), Rational(1));
    for (const auto& x : late) CHECK(x.state != 3);
    // No transition reads an event the predicates reject.
    Event other;
    other.type = "W";
    CHECK(step(t1, 0, {}, other, Rational(1)).empty());
}

TEST_CASE("oracle basics") {
    TimedStream s = sensor_example_stream();
    TimedCea none = temp_hum_one_clock();
    none.finals.clear();
    CHECK(eval_cea_oracle(none, s).empty());
    TimedCea t1 = temp_hum_one_clock(Cmp::Ge);
    CeSet all = eval_cea_oracle(t1, s);
    CHECK(all == CeSet{ce(5, 9, {{"X", {5}}, {"Y", {9}}})});
    auto by_end = eval_cea_by_end(t1, s);
    std::size_t total = 0;
    for (std::size_t j = 1; j <= s.size(); ++j) {
        total += by_end[j].size();
        CHECK(by_end[j] == eval_cea_at(t1, s, j));
    }
    CHECK(total == all.size());
    CHECK(eval_cea_at(t1, s, 8).empty());
}

TEST_CASE("the two-clock automaton matches its golden files") {
    TimedCea t2 = automaton_from_json(Json::parse(read_file(TCER_DATA_DIR "/t2.json")));
    for (const char* name : {"s0", "sensor14"}) {
        TimedStream s = read_stream_file(std::string(TCER_DATA_DIR "/") + name + ".jsonl");
        std::string got;
        auto by_end = eval_cea_by_end(t2, s);
        for (std::size_t j = 1; j <= s.size(); ++j)
            for (const auto& c : by_end[j]) got += ce_to_jsonl(c, j) + "\n";
        INFO(name);
        CHECK(got == read_file(std::string(TCER_DATA_DIR "/t2_") + name + ".golden.jsonl"));
    }
}

TEST_CASE("structural classifiers") {
    CHECK(is_deterministic(temp_hum_two_clocks()));
    CHECK_FALSE(is_deterministic(temp_hum_one_clock()));
    TimedCea single = with_states(2);
    single.finals = {1};
    single.add(tr(0, 1, Predicate::type_is("A")));
    CHECK(is_deterministic(single));

    CHECK(is_monotonic(temp_hum_one_clock()) == Monotonicity::Le);
    CHECK(is_monotonic(single) == Monotonicity::Le);
    TimedCea eq = single;
    eq.clocks = {"z"};
    eq.delta[0].guard = Guard::atom("z", Cmp::Eq, Rational(3));
    CHECK(is_monotonic(eq) == Monotonicity::No);
    eq.delta[0].guard = Guard::atom("z", Cmp::Ge, Rational(3));
    CHECK(is_monotonic(eq) == Monotonicity::Ge);
}

TEST_CASE("property: reset and advance") {
    Rng rng(31);
    const std::vector<Clock> all{"a", "b", "c"};
    for (int k = 0; k < 500; ++k) {
        Valuation v;
        for (const auto& z : all)
            if (rng() % 2) v[z] = Rational(static_cast<std::int64_t>(rng() % 20), 4);
        ClockSet zs;
        for (const auto& z : all)
            if (rng() % 2) zs.insert(z);
        Valuation r = reset(v, zs);
        for (const auto& z : all) {
            if (zs.count(z))
                CHECK(r.at(z) == Rational(0));
            else if (v.count(z))
                CHECK(r.at(z) == v.at(z));
            else
                CHECK(r.count(z) == 0);
        }
        Valuation adv = tcer::advance(v, Rational(3, 2));
        for (const auto& [z, x] : v) CHECK(adv.at(z) == x + Rational(3, 2));
    }
}

TEST_CASE("property: clocks start uninitialized") {
    // A guard on a clock that no run resets never passes, whatever its constant.
    TimedCea a = with_states(2);
    a.finals = {1};
    a.clocks = {"z"};
    a.add(tr(0, 1, Predicate::always(), Guard::atom("z", Cmp::Ge, Rational(0)), {"X"}));
    Rng rng(32);
    for (int k = 0; k < 20; ++k) CHECK(eval_cea_oracle(a, random_stream(rng, 6)).empty());
}

TEST_CASE("property: without clocks the oracle is the untimed semantics") {
    // Clock-free automata ignore timestamps: shifting every timestamp changes nothing.
    Rng rng(33);
    CeaShape shape;
    shape.max_clocks = 0;
    for (int k = 0; k < 60; ++k) {
        TimedCea a = random_cea(rng, shape);
        TimedStream s = random_stream(rng, 7), shifted;
        for (std::size_t j = 1; j <= s.size(); ++j) shifted.push(s.event(j), s.ts(j) * Rational(3) + Rational(7));
        CHECK(eval_cea_oracle(a, s) == eval_cea_oracle(a, shifted));
    }
}

}
