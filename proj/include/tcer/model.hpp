#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tcer/rational.hpp"

namespace tcer {

// ---------------------------------------------------------------------------
// Intervals over non-negative rationals
// ---------------------------------------------------------------------------

struct Interval {
    Rational low;
    std::optional<Rational> high;  // nullopt means +infinity
    bool low_open = false;
    bool high_open = false;

    static Interval closed(Rational lo, Rational hi) { return {lo, hi, false, false}; }
    static Interval at_least(Rational lo) { return {lo, std::nullopt, false, true}; }
    static Interval at_most(Rational hi) { return {Rational(0), hi, false, false}; }
    static Interval all() { return at_least(Rational(0)); }

    bool contains(const Rational& q) const;
    bool is_unbounded() const { return !high.has_value(); }
    bool valid() const { return !high || low <= *high; }
    bool operator==(const Interval& o) const;

    // "[1,2]", "(0,inf)"
    std::string str() const;
};

// ---------------------------------------------------------------------------
// Events and streams
// ---------------------------------------------------------------------------

// Attribute values are numeric (integers are rationals with denominator 1) or strings.
using Value = std::variant<Rational, std::string>;

std::string value_str(const Value& v);

struct Event {
    std::string type;
    std::map<std::string, Value> attrs;

    const Value* get(const std::string& name) const {
        auto it = attrs.find(name);
        return it == attrs.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return attrs.size() + 1; }
};

struct TimedEvent {
    Event event;
    Rational ts;
};

// Positions are 1-based.
class TimedStream {
public:
    TimedStream() = default;
    explicit TimedStream(std::vector<TimedEvent> items);

    // Throws std::invalid_argument if ts does not strictly exceed the last timestamp.
    void push(Event e, Rational ts);

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const TimedEvent& at(std::size_t pos) const { return items_.at(pos - 1); }
    const Event& event(std::size_t pos) const { return at(pos).event; }
    const Rational& ts(std::size_t pos) const { return at(pos).ts; }
    const std::vector<TimedEvent>& items() const { return items_; }

    TimedStream prefix(std::size_t n) const;

private:
    std::vector<TimedEvent> items_;
};

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

enum class Cmp { Lt, Le, Eq, Ge, Gt, Ne };

const char* cmp_str(Cmp c);
Cmp cmp_negate(Cmp c);
bool cmp_eval(Cmp c, const Rational& lhs, const Rational& rhs);

class Predicate {
public:
    enum class Kind { True, Basic, TypeIs, And, Not };

    Predicate();  // True

    static Predicate always();
    static Predicate basic(std::string attr, Cmp cmp, Value constant);
    static Predicate type_is(std::string type);
    static Predicate conj(Predicate a, Predicate b);
    static Predicate negate(Predicate a);
    // Disjunction expressed through the closed variant: not(not a and not b).
    static Predicate disj(Predicate a, Predicate b);

    Kind kind() const;
    const std::string& attr() const;      // Basic
    Cmp cmp() const;                      // Basic
    const Value& constant() const;        // Basic
    const std::string& type_name() const; // TypeIs
    const Predicate& left() const;        // And, Not
    const Predicate& right() const;       // And

    bool is_true() const { return kind() == Kind::True; }

    // Standard size: basic = 1, and = sum, not = inner + 1.
    std::size_t size() const;
    std::string str() const;

    bool operator==(const Predicate& o) const { return str() == o.str(); }
    bool operator<(const Predicate& o) const { return str() < o.str(); }

private:
    struct Node;
    explicit Predicate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Missing attributes, or a comparison between a string and a number, make a Basic false.
bool sat(const Event& e, const Predicate& p);

// Satisfiability of a conjunction of (predicate, polarity) literals over the
// closed predicate variant. Decided per attribute by interval reasoning on
// numbers and equality reasoning on strings and types; a model event is
// returned when one exists.
struct PredLiteral {
    Predicate pred;
    bool positive = true;
};
std::optional<Event> find_model(const std::vector<PredLiteral>& lits);
bool satisfiable(const std::vector<PredLiteral>& lits);
bool intersects(const Predicate& a, const Predicate& b);

// ---------------------------------------------------------------------------
// Complex events
// ---------------------------------------------------------------------------

using VarSet = std::set<std::string>;

struct ComplexEvent {
    std::size_t start = 0;
    std::size_t end = 0;
    // Only variables with non-empty index sets are stored.
    std::map<std::string, std::set<std::size_t>> binding;

    const std::set<std::size_t>& get(const std::string& var) const;
    bool well_formed() const;

    auto operator<=>(const ComplexEvent&) const = default;
    bool operator==(const ComplexEvent&) const = default;

    std::string str() const;
};

using IndexedView = std::map<std::size_t, VarSet>;

IndexedView to_indexed(const ComplexEvent& c);
ComplexEvent from_indexed(std::size_t start, std::size_t end, const IndexedView& iota);

ComplexEvent union_ce(const ComplexEvent& a, const ComplexEvent& b);
ComplexEvent project_ce(const ComplexEvent& c, const VarSet& vars);

using CeSet = std::set<ComplexEvent>;

}  // namespace tcer
