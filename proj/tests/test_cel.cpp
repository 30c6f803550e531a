#include "helpers.hpp"
#include "tcer/fixtures.hpp"

using namespace tcer;
using namespace tcer::test;

namespace {

CeSet ofType(const TimedStream& s, const std::string& type) {
    CeSet out;
    for (std::size_t k = 1; k <= s.size(); ++k)
        if (s.event(k).type == type) out.insert(ce(k, k, {{type, {k}}}));
    return out;
}

bool subset(const CeSet& a, const CeSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace

TEST_SUITE("cel") {

TEST_CASE("parse the humidity run query") {
    Cel f = parse_query(kQueryHumRun);
    REQUIRE(f->kind == CelKind::Project);
    CHECK(f->vars == VarSet{"X", "Y", "T"});
    // Below the filters: (H AS X :[0,1] T(+)[0,1]) :[0,1] H AS Y
    Cel body = f->lhs;
    while (body->kind == CelKind::Filter) body = body->lhs;
    REQUIRE(body->kind == CelKind::TimedContigSeq);
    REQUIRE(body->lhs->kind == CelKind::TimedContigSeq);
    Cel iter = body->lhs->rhs;
    REQUIRE(iter->kind == CelKind::TimedContigIter);
    CHECK(iter->lhs->kind == CelKind::EventType);
    CHECK(iter->lhs->name == "T");
    CHECK(iter->interval == Interval::closed(Rational(0), Rational(1)));
}

TEST_CASE("parse small formulas") {
    Cel t = parse_query("T");
    CHECK(t->kind == CelKind::EventType);
    CHECK(t->name == "T");
    Cel f = parse_query("A ;[2,inf) B WITHIN [0,5]");
    REQUIRE(f->kind == CelKind::Within);
    CHECK(f->interval == Interval::closed(Rational(0), Rational(5)));
    REQUIRE(f->lhs->kind == CelKind::TimedSeq);
    CHECK(f->lhs->interval == Interval::at_least(Rational(2)));
    CHECK_THROWS_AS(parse_query("A ;[2,1] B"), ParseError);
    CHECK_THROWS_AS(parse_query("(A"), ParseError);
}

TEST_CASE("oracle on the sensor stream") {
    TimedStream s = sensor_example_stream();
    CeSet phi2 = eval_cel_oracle(parse_query(kQueryHumRun), s);
    CHECK(phi2.count(ce(4, 8, {{"X", {4}}, {"Y", {8}}, {"T", {5, 6, 7}}})) == 1);
    CHECK(eval_cel_oracle(cel::event_type("H"), s) == ofType(s, "H"));
    Cel zero = cel::within(cel::event_type("T"), Interval::closed(Rational(0), Rational(0)));
    CHECK(eval_cel_oracle(zero, s) == ofType(s, "T"));
}

TEST_CASE("oracle refuses long streams") {
    Rng rng(3);
    TimedStream s = random_stream(rng, 15);
    CHECK_THROWS_AS(eval_cel_oracle(cel::event_type("A"), s), OracleLimit);
}

TEST_CASE("classification") {
    Classification c = classify(parse_query(kQueryTempHum));
    CHECK(c.windowed);
    CHECK(c.outer_projection);
    Cel swg = parse_query(
        "(((A OR B OR C) AS X1) FILTER X1[v >= 2] ;[0,3] ((A OR B OR C) AS X2) FILTER X2[v < 3]) WITHIN [0,5]");
    CHECK(classify(swg).swg);
    CHECK(classify(swg).primary == CelClass::Swg);
    Classification t = classify(cel::event_type("T"));
    CHECK(t.simple);
    CHECK(t.windowed);
}

TEST_CASE("property: print then parse is the identity") {
    Rng rng(21);
    for (int k = 0; k < 500; ++k) {
        Cel f = random_formula(rng, 4);
        std::string text = print_query(f);
        Cel g = parse_query(text);
        INFO(text);
        CHECK(cel_equal(f, g));
    }
}

TEST_CASE("property: semantic laws of the oracle") {
    Rng rng(22);
    int checked = 0;
    while (checked < 150) {
        Cel a = random_formula(rng, 2), b = random_formula(rng, 2);
        TimedStream s = random_stream(rng, 1 + rng() % 7);
        try {
            CeSet sa = eval_cel_oracle(a, s), sb = eval_cel_oracle(b, s);
            CeSet sor = eval_cel_oracle(cel::disj(a, b), s);
            CHECK(subset(sa, sor));
            CHECK(subset(sb, sor));
            CeSet both;
            std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(both, both.end()));
            CHECK(eval_cel_oracle(cel::conj(a, b), s) == both);
            CHECK(eval_cel_oracle(cel::within(a, Interval::all()), s) == sa);
            CHECK(eval_cel_oracle(cel::timed_seq(a, Interval::all(), b), s) == eval_cel_oracle(cel::seq(a, b), s));
            for (const auto& c : sor) {
                CHECK(c.start <= c.end);
                CHECK(c.well_formed());
            }
            ++checked;
        } catch (const OracleLimit&) {
        }
    }
}

}
