#pragma once

#include <string>

#include "tcer/cea.hpp"

namespace tcer {

// The sensor stream used throughout the examples: H events carry "hum",
// T events carry "temp". Positions 1..9, timestamps 1.2 ... 7.2.
TimedStream sensor_example_stream();

// Two readings above 40 degrees at most one time unit apart, then a humidity
// reading below 25 within five time units of the first one.
inline const char* kQueryTempHum =
    "PROJECT {X, Y} ((T AS X ;[<=1] T ; H AS Y) WITHIN [<=5] FILTER (T[temp > 40] && H[hum < 25]))";
// Humidity below 30, then a contiguous run of temperatures one unit apart,
// then humidity above 30.
inline const char* kQueryHumRun =
    "PROJECT {X, Y, T} ((H AS X :[<=1] (T (+)[<=1]) :[<=1] H AS Y) FILTER (X[hum < 30] && Y[hum > 30]))";

// Single-clock automaton for kQueryTempHum (threshold given by the comparison).
TimedCea temp_hum_one_clock(Cmp temp_cmp = Cmp::Gt);
// Two-clock variant that tracks two candidate X readings independently.
TimedCea temp_hum_two_clocks(Cmp temp_cmp = Cmp::Gt);

}  // namespace tcer
