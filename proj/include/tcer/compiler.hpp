#pragma once

#include <stdexcept>

#include "tcer/cea.hpp"
#include "tcer/cel.hpp"

namespace tcer {

struct NotWindowed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operator-by-operator translation. Clocks are named z1, z2, ... in creation order.
TimedCea compile(const Cel& f);

// Clock condition "z in I"; true when I = [0, inf).
Guard interval_guard(const Clock& z, const Interval& i);

// Two-clock automaton with synchronous resets for windowed formulas:
// z_N is reset on the initial out-transitions and z_X on every marking
// transition. Also accepts a windowed formula under one outermost
// projection when the projected automaton still has synchronous resets.
// Throws NotWindowed otherwise.
inline const Clock kWindowClock = "z_N";
inline const Clock kGapClock = "z_X";
TimedCea compile_windowed(const Cel& f);

// Removes resets that no path observes before the next reset of the same clock.
void drop_dead_resets(TimedCea& a);
// Removes clocks that no guard reads.
void drop_unchecked_clocks(TimedCea& a);

}  // namespace tcer
