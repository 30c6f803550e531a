#include "helpers.hpp"
#include "tcer/determinizer.hpp"
#include "tcer/fixtures.hpp"

using namespace tcer;
using namespace tcer::test;

TEST_SUITE("determinizer") {

TEST_CASE("guard negation") {
    Guard le = Guard::atom("z", Cmp::Le, Rational(3));
    CHECK(negate_guard(le) == Guard::atom("z", Cmp::Gt, Rational(3)));
    Guard eq = Guard::atom("z", Cmp::Eq, Rational(3));
    Guard neq = negate_guard(eq);
    CHECK(neq.kind() == Guard::Kind::Or);
    for (Rational x : {Rational(2), Rational(3), Rational(7, 2)})
        CHECK(guard_sat({{"z", x}}, neq) == (x != Rational(3)));
    CHECK(negate_guard(Guard::always()).is_false());
}

TEST_CASE("determinizing the one-clock automaton") {
    TimedCea t1 = temp_hum_one_clock(Cmp::Ge);
    TimedCea d = determinize(t1);
    CHECK(is_deterministic(d));
    CHECK(d.clocks.size() == 1);
    CHECK(is_monotonic(d) == Monotonicity::Le);
    TimedStream s = sensor_example_stream();
    CHECK(eval_cea_oracle(d, s) == eval_cea_oracle(t1, s));
    Rng rng(51);
    for (int k = 0; k < 100; ++k) {
        TimedStream r = sensor_stream(rng, 1 + rng() % 10);
        CHECK(eval_cea_oracle(d, r) == eval_cea_oracle(t1, r));
    }
}

TEST_CASE("determinizing a deterministic automaton keeps its semantics") {
    TimedCea t2 = temp_hum_two_clocks();
    TimedCea d = determinize(t2);
    CHECK(is_deterministic(d));
    Rng rng(52);
    for (int k = 0; k < 30; ++k) {
        TimedStream r = sensor_stream(rng, 10);
        CHECK(eval_cea_oracle(d, r) == eval_cea_oracle(t2, r));
    }
}

TEST_CASE("subset construction keeps only reachable subsets") {
    TimedCea a = with_states(4);
    a.finals = {1};
    a.add(tr(0, 1, Predicate::type_is("A"), Guard::always(), {"X"}));
    a.add(tr(0, 1, Predicate::type_is("B"), Guard::always(), {"X"}));
    a.add(tr(2, 3, Predicate::type_is("A")));  // unreachable
    DeterminizeOptions opt;
    opt.normalize = false;
    TimedCea d = determinize(a, opt);
    CHECK(d.num_states == 2);
    for (const auto& t : d.delta) CHECK(t.to != d.initial);
}

TEST_CASE("synchronous-reset decision") {
    CHECK(check_sync(temp_hum_one_clock()).verdict == SyncVerdict::Yes);
    TimedCea bad = with_states(3);
    bad.finals = {1, 2};
    bad.clocks = {"z"};
    bad.add(tr(0, 1, Predicate::type_is("A"), Guard::always(), {"X"}, {"z"}));
    bad.add(tr(0, 2, Predicate::type_is("A"), Guard::always(), {"X"}, {}));
    SyncResult r = check_sync(bad);
    REQUIRE(r.verdict == SyncVerdict::No);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->run1.size() == 1);
    CHECK(verify_sync_witness(bad, *r.witness));
    CHECK_THROWS_AS(determinize(bad), NotSynchronous);
    // A tiny cap makes incompleteness explicit.
    CHECK(check_sync(temp_hum_two_clocks(), 2).verdict == SyncVerdict::Unknown);
}

TEST_CASE("property: deterministic automata have synchronous resets") {
    Rng rng(53);
    int checked = 0;
    while (checked < 40) {
        CeaShape shape;
        TimedCea a = random_cea(rng, shape);
        if (!is_deterministic(a)) continue;
        CHECK(check_sync(a).verdict == SyncVerdict::Yes);
        ++checked;
    }
}

TEST_CASE("property: valuations in one region satisfy the same guards") {
    Rng rng(57);
    auto value = [&] { return Rational(static_cast<std::int64_t>(rng() % 60), 1 + static_cast<std::int64_t>(rng() % 6)); };
    std::size_t pairs = 0;
    for (int i = 0; i < 60; ++i) {
        CeaShape shape;
        shape.max_clocks = 3;
        TimedCea a = random_cea(rng, shape);
        Regions regions(a);
        std::map<Valuation, Valuation> seen;  // representative -> first sample
        for (int k = 0; k < 200; ++k) {
            Valuation v;
            for (const auto& z : a.clocks) v[z] = value();
            Valuation r = regions.canon(v);
            CHECK(regions.canon(r) == r);
            for (const auto& t : a.delta) CHECK(guard_sat(v, t.guard) == guard_sat(r, t.guard));
            auto [it, fresh] = seen.emplace(r, v);
            if (fresh) continue;
            ++pairs;
            for (const auto& t : a.delta) CHECK(guard_sat(v, t.guard) == guard_sat(it->second, t.guard));
            // Both samples pass through the same sequence of successor regions.
            auto dv = regions.delays(v), dw = regions.delays(it->second);
            REQUIRE(dv.size() == dw.size());
            for (std::size_t j = 0; j < dv.size(); ++j)
                CHECK(regions.canon(tcer::advance(v, dv[j])) == regions.canon(tcer::advance(it->second, dw[j])));
        }
    }
    CHECK(pairs > 1000);
}

TEST_CASE("property: predicate and guard types partition") {
    Rng rng(54);
    for (int k = 0; k < 60; ++k) {
        std::vector<Predicate> ps;
        for (int i = 0; i < 3; ++i) ps.push_back(random_predicate(rng, 1));
        auto types = predicate_types(ps);
        for (int e = 0; e < 20; ++e) {
            Event ev = random_event(rng);
            int hits = 0;
            for (const auto& t : types) {
                if (!sat(ev, t.pred)) continue;
                ++hits;
                for (std::size_t i = 0; i < ps.size(); ++i) CHECK(sat(ev, ps[i]) == t.members[i]);
            }
            CHECK(hits == 1);
        }
        std::vector<Guard> gs;
        for (int i = 0; i < 3; ++i) {
            Clock z = rng() % 2 ? "x" : "y";
            Cmp c = std::vector<Cmp>{Cmp::Lt, Cmp::Le, Cmp::Eq, Cmp::Ge, Cmp::Gt}[rng() % 5];
            gs.push_back(Guard::atom(z, c, Rational(static_cast<std::int64_t>(rng() % 4))));
        }
        auto gtypes = guard_types(gs);
        for (int v = 0; v < 20; ++v) {
            Valuation val{{"x", Rational(static_cast<std::int64_t>(rng() % 20), 4)},
                          {"y", Rational(static_cast<std::int64_t>(rng() % 20), 4)}};
            int hits = 0;
            for (const auto& t : gtypes) {
                if (!guard_sat(val, t.guard)) continue;
                ++hits;
                for (std::size_t i = 0; i < gs.size(); ++i) CHECK(guard_sat(val, gs[i]) == t.members[i]);
            }
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("property: determinization preserves semantics and respects the size bound") {
    Rng rng(55);
    int checked = 0;
    while (checked < 25) {
        CeaShape shape;
        shape.synchronous = true;
        TimedCea a = random_cea(rng, shape);
        TimedCea d;
        try {
            d = determinize(a);
        } catch (const NotSynchronous&) {
            continue;
        }
        CHECK(is_deterministic(d));
        CHECK(static_cast<long double>(d.size()) <= determinization_size_bound(a));
        for (int k = 0; k < 4; ++k) {
            TimedStream s = random_stream(rng, 1 + rng() % 8);
            CHECK(eval_cea_oracle(d, s) == eval_cea_oracle(a, s));
        }
        ++checked;
    }
}

TEST_CASE("property: conflicting automata are refuted with a replayable witness") {
    Rng rng(56);
    for (int k = 0; k < 30; ++k) {
        TimedCea a = conflicting_cea(rng);
        SyncResult r = check_sync(a);
        REQUIRE(r.verdict == SyncVerdict::No);
        REQUIRE(r.witness.has_value());
        CHECK(verify_sync_witness(a, *r.witness));
    }
}

}
