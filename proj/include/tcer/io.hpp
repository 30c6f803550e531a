#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tcer/cea.hpp"
#include "tcer/cel.hpp"

namespace tcer {

using Json = nlohmann::json;

// Malformed input; line is 1-based, or 0 when not line-oriented.
struct InputError : std::runtime_error {
    InputError(const std::string& what, std::size_t line = 0);
    std::size_t line;
};

// ---------------------------------------------------------------------------
// Automaton files

Cmp cmp_from_str(const std::string& s);

// {"num": "1.5"} or {"str": "x"}; plain JSON numbers and strings are accepted on input.
Json value_to_json(const Value& v);
Value value_from_json(const Json& j);

// {"true": true} | {"basic": {attr, cmp, value}} | {"type": R} | {"and": [a, b]} | {"not": a}
Json predicate_to_json(const Predicate& p);
Predicate predicate_from_json(const Json& j);

// true | false | {"clock", "cmp", "value"} | {"and": [a, b]} | {"or": [a, b]}
Json guard_to_json(const Guard& g);
Guard guard_from_json(const Json& j);

// {"states": [names], "initial", "finals", "clocks", "vars",
//  "transitions": [{"from", "to", "pred", "guard", "label", "resets"}]}
Json automaton_to_json(const TimedCea& a);
TimedCea automaton_from_json(const Json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// ---------------------------------------------------------------------------
// Streams: JSON Lines {"type": R, "attrs": {name: value}, "ts": "1.33"}

Rational parse_timestamp(const Json& j);
TimedEvent parse_event_line(const std::string& line, std::size_t line_no);
std::string event_to_jsonl(const Event& e, const Rational& ts);

// Pull-based reader; enforces strictly increasing timestamps.
class StreamReader {
public:
    explicit StreamReader(std::istream& in) : in_(in) {}
    // Next event, or nullopt at the end of the input. Blank lines are skipped.
    std::optional<TimedEvent> next();
    std::size_t line() const { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t count_ = 0;
    std::optional<Rational> last_;
};

TimedStream read_stream(std::istream& in);
TimedStream read_stream_file(const std::string& path);

// ---------------------------------------------------------------------------
// Output and query plumbing

// {"start": i, "end": j, "bindings": {var: [indices]}, "pos": j}
Json ce_to_json(const ComplexEvent& c, std::size_t pos);
std::string ce_to_jsonl(const ComplexEvent& c, std::size_t pos);

// Rewrites every "temp > 40" filter atom to "temp >= 40".
Cel with_ge40(const Cel& f);

// Compiles f for the streaming engine: the two-clock windowed construction
// when f is windowed, the general one otherwise, then unread clocks and dead
// resets are dropped and the result determinized. Throws NotEvaluable when
// the result is not a monotonic single-clock automaton.
TimedCea streaming_automaton(const Cel& f);

}  // namespace tcer
