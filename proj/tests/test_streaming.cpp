#include "helpers.hpp"
#include "tcer/determinizer.hpp"
#include "tcer/fixtures.hpp"
#include "tcer/io.hpp"
#include "tcer/streaming.hpp"

using namespace tcer;
using namespace tcer::test;

namespace {

Gadget reset(Rational t) { return Gadget{false, {GadgetOp::reset(t)}}; }
Gadget check(Rational t0, Rational c) { return Gadget{false, {GadgetOp::check(t0, c)}}; }

}  // namespace

TEST_SUITE("streaming") {

TEST_CASE("gadget merging examples") {
    Gadget m = merge_gadgets(check(10, 5), check(8, 6), Direction::Le);
    CHECK_FALSE(m.empty);
    REQUIRE(m.ops.size() == 1);
    CHECK(m.ops[0] == GadgetOp::check(8, 3));
    CHECK(merge_gadgets(check(10, 1), reset(8), Direction::Le).empty);
    Gadget rr = merge_gadgets(reset(5), reset(3), Direction::Le);
    REQUIRE(rr.ops.size() == 1);
    CHECK(rr.ops[0] == GadgetOp::reset(5));
    CHECK(rr.form() == GadgetForm::Reset);
}

TEST_CASE("bottom, extend and aux semantics") {
    Caecs s;
    NodeId b = s.new_bottom(3, q("2.5"));
    CHECK(s.max_reset(b) == q("2.5"));
    CHECK(s.node(b).odepth == 0);
    CHECK(aux_semantics(s, b).size() == 1);

    NodeId b4 = s.new_bottom(4, q("3.7"));
    NodeId x = s.extend(b4, 4, {"X"});
    auto sem = aux_semantics(s, x);
    REQUIRE(sem.size() == 1);
    CHECK(sem.begin()->start == 4);
    CHECK(sem.begin()->iota == IndexedView{{4, {"X"}}});
    CHECK(sem.begin()->reset == q("3.7"));
    CHECK(s.max_reset(x) == q("3.7"));
    NodeId xy = s.extend(x, 6, {"Y"});
    CHECK(aux_semantics(s, xy).begin()->iota.size() == 2);
}

TEST_CASE("clock checks against the example timestamps") {
    Caecs s;
    NodeId late = s.new_bottom(5, q("4.5"));
    CHECK_FALSE(s.is_empty(s.add_clock_check(late, q("7.2"), Rational(5))));
    NodeId early = s.new_bottom(1, q("1.2"));
    CHECK(s.is_empty(s.add_clock_check(early, q("7.2"), Rational(5))));
    // Two resets collapse into one gadget node.
    NodeId r = s.add_reset(s.add_reset(late, Rational(5)), Rational(6));
    auto [g, below] = s.get_gadget(r);
    CHECK(g.ops.size() == 1);
    CHECK(g.form() == GadgetForm::Reset);
    CHECK(below == late);
}

TEST_CASE("union and enumeration") {
    Caecs s;
    NodeId a = s.extend(s.new_bottom(2, Rational(1)), 2, {"X"});
    NodeId b = s.extend(s.new_bottom(3, Rational(1)), 3, {"Y"});
    NodeId u = s.union_of(s.add_reset(a, Rational(3)), s.add_reset(b, Rational(3)));
    auto out = enumerate_all(s, u, 4);
    CHECK(out.size() == 2);
    CHECK(CeSet(out.begin(), out.end()) == CeSet{ce(2, 4, {{"X", {2}}}), ce(3, 4, {{"Y", {3}}})});
    auto single = enumerate_all(s, s.new_bottom(5, Rational(9)), 5);
    REQUIRE(single.size() == 1);
    CHECK(single[0].binding.empty());
}

TEST_CASE("union-list operations") {
    Caecs s;
    NodeId n3 = s.new_bottom(1, Rational(3)), n7 = s.new_bottom(2, Rational(7)), n9 = s.new_bottom(3, Rational(9));
    CHECK(ul_merge(s, ul_new(n3)) == n3);
    UnionList ul = ul_new(n9);
    ul_insert(s, ul, n3);
    ul_insert(s, ul, n7);
    REQUIRE(ul.size() == 3);
    CHECK(s.max_reset(ul[0]) == Rational(9));
    CHECK(s.max_reset(ul[1]) == Rational(7));
    CHECK(s.max_reset(ul[2]) == Rational(3));
    // Window of 4 at time 10 keeps reset times >= 6.
    UnionList kept = ul_clock_check(s, ul, Rational(10), Rational(4));
    REQUIRE(kept.size() == 2);
    CHECK(s.max_reset(kept[0]) == Rational(9));
    CHECK(s.max_reset(kept[1]) == Rational(7));
    CHECK(ul_reset(s, ul, Rational(11)).size() <= 2);
}

TEST_CASE("evaluation on the example stream") {
    TimedStream s = sensor_example_stream();
    TimedCea d = determinize(temp_hum_one_clock(Cmp::Ge));
    auto got = evaluate_stream(d, s);
    auto want = eval_cea_by_end(d, s);
    for (std::size_t j = 1; j <= s.size(); ++j) CHECK(got[j] == want[j]);
    CHECK(got[9].count(ce(5, 9, {{"X", {5}}, {"Y", {9}}})) == 1);

    TimedCea phi2 = streaming_automaton(parse_query(kQueryHumRun));
    auto run = evaluate_stream(phi2, s);
    CHECK(run[8].count(ce(4, 8, {{"X", {4}}, {"Y", {8}}, {"T", {5, 6, 7}}})) == 1);

    StreamingEvaluator empty(d);
    CHECK(empty.results().empty());
    CHECK(empty.table().empty());
}

TEST_CASE("the evaluator rejects automata outside its class") {
    CHECK_THROWS_AS(StreamingEvaluator{temp_hum_two_clocks()}, NotEvaluable);
    CHECK_THROWS_AS(StreamingEvaluator{temp_hum_one_clock()}, NotEvaluable);  // not deterministic
    StreamingEvaluator ev(determinize(temp_hum_one_clock()));
    Event e;
    e.type = "T";
    ev.push(e, Rational(2));
    CHECK_THROWS_AS(ev.push(e, Rational(2)), std::invalid_argument);
}

TEST_CASE("property: streaming equals the automaton oracle") {
    Rng rng(61);
    int checked = 0;
    while (checked < 40) {
        TimedCea a = random_streamable_cea(rng);
        TimedStream s = random_stream(rng, 1 + rng() % 20);
        std::vector<CeSet> want;
        try {
            CeaOracleOptions opt;
            opt.max_stream = 30;
            opt.max_results = 20'000;
            want = eval_cea_by_end(a, s, opt);
        } catch (const OracleLimit&) {
            continue;
        }
        StreamingEvaluator ev(a);
        for (std::size_t j = 1; j <= s.size(); ++j) {
            ev.push(s.event(j), s.ts(j));
            auto out = ev.results();
            CeSet got(out.begin(), out.end());
            CHECK(got.size() == out.size());  // no duplicates
            CHECK(got == want[j]);
            for (const auto& [q, ul] : ev.table()) {
                CHECK(ul.size() <= static_cast<std::size_t>(a.num_states) + 2);
                for (NodeId n : ul) CHECK_FALSE(ev.caecs().check_invariants(n).has_value());
            }
        }
        CHECK(ev.stats().max_odepth <= 11);
        ++checked;
    }
}

TEST_CASE("property: merge_gadgets agrees with applying both gadgets") {
    // Gadgets in series: creation times do not increase from the outer op
    // inwards, and entries below were reset no later than the innermost op.
    Rng rng(62);
    const std::vector<Rational> ts{Rational(0), Rational(1, 2), Rational(1), Rational(2), Rational(3), Rational(5)};
    auto pick = [&] { return ts[rng() % ts.size()]; };
    int compared = 0;
    for (int k = 0; k < 2000; ++k) {
        for (Direction dir : {Direction::Le, Direction::Ge}) {
            std::vector<Rational> times{pick() + Rational(5), pick() + Rational(5), pick() + Rational(5),
                                        pick() + Rational(5)};
            std::sort(times.rbegin(), times.rend());
            std::size_t next = 0;
            auto gadget = [&] {
                Gadget g;
                if (rng() % 2) g.ops.push_back(GadgetOp::reset(times[next++]));
                if (rng() % 2) g.ops.push_back(GadgetOp::check(times[next++], pick()));
                return g;
            };
            Gadget g1 = gadget(), g2 = gadget();
            Gadget m = merge_gadgets(g1, g2, dir);
            CHECK(m.ops.size() <= 2);
            for (Rational r = Rational(0); r <= Rational(5); r += Rational(1, 4)) {
                std::optional<Rational> inner = apply_gadget(g2, r, dir);
                std::optional<Rational> both = inner ? apply_gadget(g1, *inner, dir) : std::nullopt;
                std::optional<Rational> merged = apply_gadget(m, r, dir);
                INFO(g1.str() << " over " << g2.str() << " -> " << m.str() << " at " << r.str());
                CHECK(both == merged);
                ++compared;
            }
        }
    }
    CHECK(compared > 10'000);
}

}
