#pragma once

#include <cstdint>
#include <random>

#include "tcer/cea.hpp"
#include "tcer/cel.hpp"

namespace tcer {

// Seeded generators for tests and benchmarks. The random schema has event
// types A, B, C with one integer attribute v in [0, 5].
using Rng = std::mt19937_64;

Predicate random_predicate(Rng& rng, int depth = 2);
Event random_event(Rng& rng);
// n events; gaps drawn from {1/4, 1/3, 1/2, 2/3, 1, 3/2, 2}.
TimedStream random_stream(Rng& rng, std::size_t n);
Interval random_interval(Rng& rng);

// Depth <= max_depth; every operator kind can be drawn at every inner level.
Cel random_formula(Rng& rng, int max_depth = 4);

struct CeaShape {
    int max_states = 4;
    int max_clocks = 2;
    int max_transitions = 8;
    bool synchronous = false;  // reset sets depend on the label only
    bool monotone_le = false;  // guards are true or conjunctions of z <= c
    bool monotone_ge = false;  // guards are true or conjunctions of z >= c
};
TimedCea random_cea(Rng& rng, const CeaShape& shape);

// Deterministic, monotonic, single-clock automaton whose clock is reset
// before every read: a determinized random synchronous automaton.
TimedCea random_streamable_cea(Rng& rng);

// Two same-labeled transitions with overlapping conditions and different
// resets, reached after a random synchronous prefix.
TimedCea conflicting_cea(Rng& rng);

// Sensor-style stream over types H (attribute hum) and T (attribute temp).
TimedStream sensor_stream(Rng& rng, std::size_t n, const Rational& mean_gap = Rational(1, 2));

}  // namespace tcer
