#pragma once

#include <doctest.h>

#include "tcer/cea.hpp"
#include "tcer/cel.hpp"
#include "tcer/generate.hpp"

namespace tcer::test {

inline ComplexEvent ce(std::size_t i, std::size_t j, std::map<std::string, std::set<std::size_t>> b) {
    ComplexEvent c;
    c.start = i;
    c.end = j;
    c.binding = std::move(b);
    return c;
}

inline Rational q(const char* text) { return *Rational::parse(text); }

// Random complex event with start <= end and bindings inside [start, end].
inline ComplexEvent random_ce(Rng& rng) {
    std::uniform_int_distribution<std::size_t> pos(1, 8);
    std::size_t a = pos(rng), b = pos(rng);
    ComplexEvent c;
    c.start = std::min(a, b);
    c.end = std::max(a, b);
    std::uniform_int_distribution<std::size_t> in(c.start, c.end);
    for (const char* v : {"X", "Y"})
        for (int k = 0; k < 2; ++k)
            if (rng() % 2) c.binding[v].insert(in(rng));
    return c;
}

}  // namespace tcer::test

namespace tcer::test {

inline Transition tr(State from, State to, Predicate p, Guard g = Guard::always(), VarSet l = {}, ClockSet z = {}) {
    Transition t;
    t.from = from;
    t.to = to;
    t.pred = std::move(p);
    t.guard = std::move(g);
    t.label = std::move(l);
    t.resets = std::move(z);
    return t;
}

inline TimedCea with_states(int n) {
    TimedCea a;
    for (int k = 0; k < n; ++k) a.add_state();
    return a;
}

inline std::vector<CeSet> cel_by_end(const Cel& f, const TimedStream& s) {
    std::vector<CeSet> out(s.size() + 1);
    for (const auto& c : eval_cel_oracle(f, s)) out[c.end].insert(c);
    return out;
}

}  // namespace tcer::test
