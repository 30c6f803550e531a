#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tcer/model.hpp"

namespace tcer {

using Clock = std::string;
using ClockSet = std::set<Clock>;

// Clock conditions: true | z ~ c | g and g | g or g, with ~ in {<,<=,=,>=,>}.
// False is internal: it only appears as the negation of true.
class Guard {
public:
    enum class Kind { True, False, Atom, And, Or };

    Guard();  // true

    static Guard always();
    static Guard never();
    static Guard atom(Clock z, Cmp cmp, Rational c);
    // conj/disj fold away true and false operands.
    static Guard conj(Guard a, Guard b);
    static Guard disj(Guard a, Guard b);

    Kind kind() const;
    const Clock& clock() const;
    Cmp cmp() const;
    const Rational& constant() const;
    const Guard& left() const;
    const Guard& right() const;

    bool is_true() const { return kind() == Kind::True; }
    bool is_false() const { return kind() == Kind::False; }

    // Number of atomic comparisons (true and false count as one).
    std::size_t size() const;
    std::string str() const;
    ClockSet clocks() const;

    bool operator==(const Guard& o) const { return str() == o.str(); }
    bool operator<(const Guard& o) const { return str() < o.str(); }

private:
    struct Node;
    explicit Guard(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Partial map; clocks outside the domain are not initialized.
using Valuation = std::map<Clock, Rational>;

Valuation advance(const Valuation& v, const Rational& dt);
Valuation reset(const Valuation& v, const ClockSet& zs);
std::string valuation_str(const Valuation& v);

// True iff every clock of g is initialized in v and g evaluates to true.
bool guard_sat(const Valuation& v, const Guard& g);

// Dual condition: and/or swapped, <= to >, = to (> or <), true to false.
Guard negate_guard(const Guard& g);

// Satisfiability over valuations defined on every clock of the conjunction.
// Returns a witness valuation when one exists.
std::optional<Valuation> guard_model(const std::vector<Guard>& conj);
bool guard_satisfiable(const Guard& g);
bool guards_intersect(const Guard& a, const Guard& b);

// For z <= c style reasoning: largest constant compared against each clock.
std::map<Clock, Rational> max_constants(const Guard& g);

// ---------------------------------------------------------------------------
// Finite unions of intervals over Q>=0, used for single-clock guard algebra.

class IntervalSet {
public:
    IntervalSet() = default;
    static IntervalSet all() { return IntervalSet(std::vector<Interval>{Interval::all()}); }
    static IntervalSet of(const Interval& i) { return IntervalSet(std::vector<Interval>{i}); }

    bool empty() const { return parts_.empty(); }
    bool contains(const Rational& q) const;
    bool is_all() const;
    const std::vector<Interval>& parts() const { return parts_; }

    IntervalSet unite(const IntervalSet& o) const;
    IntervalSet intersect(const IntervalSet& o) const;
    IntervalSet complement() const;

    bool operator==(const IntervalSet& o) const { return parts_ == o.parts_; }
    std::string str() const;

private:
    explicit IntervalSet(std::vector<Interval> parts);
    std::vector<Interval> parts_;  // sorted, disjoint, non-adjacent
};

// Values of clock z satisfying g, treating other clocks as unconstrained.
// Only meaningful when g mentions at most the clock z.
IntervalSet guard_values(const Guard& g, const Clock& z);
// Inverse of guard_values: an equivalent guard over z.
Guard guard_from_values(const IntervalSet& s, const Clock& z);

}  // namespace tcer
