#include <sstream>

#include "helpers.hpp"
#include "tcer/determinizer.hpp"
#include "tcer/fixtures.hpp"
#include "tcer/io.hpp"
#include "tcer/streaming.hpp"

using namespace tcer;
using namespace tcer::test;

TEST_SUITE("io") {

TEST_CASE("the example stream file") {
    TimedStream s = read_stream_file(TCER_DATA_DIR "/s0.jsonl");
    REQUIRE(s.size() == 9);
    const char* want[] = {"1.2", "1.33", "2.5", "3.7", "4.5", "5.3", "5.9", "6.1", "7.2"};
    for (std::size_t k = 1; k <= 9; ++k) CHECK(s.ts(k) == q(want[k - 1]));
    CHECK(s.ts(2) == Rational(133, 100));
    TimedStream ref = sensor_example_stream();
    for (std::size_t k = 1; k <= 9; ++k) {
        CHECK(s.event(k).type == ref.event(k).type);
        CHECK(s.event(k).attrs == ref.event(k).attrs);
    }
}

TEST_CASE("stream reader edge cases") {
    std::istringstream empty("");
    StreamReader r(empty);
    CHECK_FALSE(r.next().has_value());

    std::istringstream blank("\n{\"type\":\"A\",\"ts\":\"1\"}\n\n");
    CHECK(read_stream(blank).size() == 1);

    std::istringstream same("{\"type\":\"A\",\"ts\":\"1.5\"}\n{\"type\":\"B\",\"ts\":\"1.5\"}\n");
    try {
        read_stream(same);
        FAIL("expected an error");
    } catch (const InputError& e) {
        std::string msg = e.what();
        CHECK(e.line == 2);
        CHECK(msg.find("1.5") != std::string::npos);
        CHECK(msg.find('2') != std::string::npos);
    }

    std::istringstream bad("{\"type\":\"A\",\"ts\":\"1\"}\n{\"type\": \n");
    try {
        read_stream(bad);
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(e.line == 2);
    }
    std::istringstream no_ts("{\"type\":\"A\"}\n");
    CHECK_THROWS_AS(read_stream(no_ts), InputError);
    std::istringstream float_ts("{\"type\":\"A\",\"ts\":\"abc\"}\n");
    CHECK_THROWS_AS(read_stream(float_ts), InputError);
}

TEST_CASE("property: automaton JSON round trip") {
    Rng rng(71);
    for (int k = 0; k < 100; ++k) {
        TimedCea a = random_cea(rng, CeaShape{});
        TimedCea b = automaton_from_json(Json::parse(automaton_to_json(a).dump()));
        CHECK(automaton_to_json(b) == automaton_to_json(a));
        TimedStream s = random_stream(rng, 6);
        CHECK(eval_cea_oracle(a, s) == eval_cea_oracle(b, s));
    }
    TimedCea t1 = temp_hum_one_clock();
    CHECK(automaton_to_json(automaton_from_json(automaton_to_json(t1))) == automaton_to_json(t1));
    CHECK_THROWS_AS(automaton_from_json(Json::parse(R"({"states": 2})")), InputError);
}

TEST_CASE("property: event lines round trip") {
    Rng rng(72);
    TimedStream s = random_stream(rng, 50);
    std::string text;
    for (std::size_t k = 1; k <= s.size(); ++k) text += event_to_jsonl(s.event(k), s.ts(k)) + "\n";
    std::istringstream in(text);
    TimedStream back = read_stream(in);
    REQUIRE(back.size() == s.size());
    for (std::size_t k = 1; k <= s.size(); ++k) {
        CHECK(back.ts(k) == s.ts(k));
        CHECK(back.event(k).attrs == s.event(k).attrs);
    }
}

TEST_CASE("complex event output format") {
    ComplexEvent c = ce(4, 8, {{"X", {4}}, {"Y", {8}}, {"T", {5, 6, 7}}, {"Z", {}}});
    CHECK(ce_to_jsonl(c, 8) == R"({"bindings":{"T":[5,6,7],"X":[4],"Y":[8]},"end":8,"pos":8,"start":4})");
}

TEST_CASE("the non-strict fixture predicate") {
    Cel f = with_ge40(parse_query(kQueryTempHum));
    CHECK(print_query(f).find("temp >= 40") != std::string::npos);
    CHECK(print_query(f).find("hum < 25") != std::string::npos);
}

TEST_CASE("streaming compilation pipeline") {
    CHECK_NOTHROW(streaming_automaton(parse_query(kQueryHumRun)));
    CHECK_THROWS_AS(streaming_automaton(parse_query(kQueryTempHum)), NotEvaluable);
}

}
