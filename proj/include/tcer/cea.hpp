#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tcer/cel.hpp"
#include "tcer/clock.hpp"
#include "tcer/model.hpp"

namespace tcer {

using State = int;

struct Transition {
    State from = 0;
    Predicate pred;
    Guard guard;
    VarSet label;
    ClockSet resets;
    State to = 0;

    std::string str() const;
};

struct TimedCea {
    int num_states = 0;
    State initial = 0;
    std::set<State> finals;
    std::vector<Transition> delta;
    ClockSet clocks;
    VarSet vars;
    std::vector<std::string> names;  // optional, parallel to states

    State add_state(std::string name = "");
    // Registers the transition's clocks and variables as well.
    void add(Transition t);
    bool is_final(State q) const { return finals.count(q) > 0; }
    std::vector<std::vector<int>> outgoing() const;  // transition indices per state
    std::string state_name(State q) const;

    // states + sum over transitions of (|guard| + |pred| + |label| + |resets|)
    std::size_t size() const;
};

struct Successor {
    State state;
    Valuation val;
    VarSet label;
    int transition;
};

// All transitions from `state` that read `e` after `dt` time units have passed.
std::vector<Successor> step(const TimedCea& a, State state, const Valuation& val, const Event& e,
                            const Rational& dt);

struct CeaOracleOptions {
    std::size_t max_stream = 14;
    std::size_t max_results = 2'000'000;  // live configurations; 0 disables
};

CeSet eval_cea_oracle(const TimedCea& a, const TimedStream& s, const CeaOracleOptions& opt = {});
CeSet eval_cea_at(const TimedCea& a, const TimedStream& s, std::size_t j, const CeaOracleOptions& opt = {});
// Element j holds the outputs ending at j (element 0 is unused).
std::vector<CeSet> eval_cea_by_end(const TimedCea& a, const TimedStream& s, const CeaOracleOptions& opt = {});

// A pair of transitions from one state with overlapping predicates and guards and equal labels.
std::optional<std::pair<int, int>> determinism_violation(const TimedCea& a);
bool is_deterministic(const TimedCea& a);

enum class Monotonicity { Le, Ge, No };
const char* monotonicity_name(Monotonicity m);
Monotonicity is_monotonic(const TimedCea& a);

// Structural conditions the compiler maintains.
bool no_initial_incoming(const TimedCea& a);
// A transition whose guard reads a clock that some path from the initial
// state reaches without resetting it; nullopt when the discipline holds.
std::optional<int> clock_use_violation(const TimedCea& a);

// Keeps the initial state and the states that are reachable from it and
// can reach a final state.
void trim(TimedCea& a);

std::string to_dot(const TimedCea& a);

}  // namespace tcer
