#include "tcer/generate.hpp"

#include "tcer/determinizer.hpp"

namespace tcer {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(xs.size()) - 1))];
}

const std::vector<std::string> kTypes{"A", "B", "C"};
const std::vector<std::string> kVars{"X", "Y"};
const std::vector<Cmp> kCmps{Cmp::Lt, Cmp::Le, Cmp::Eq, Cmp::Ge, Cmp::Gt, Cmp::Ne};

Rational random_constant(Rng& rng) {
    static const std::vector<Rational> cs{Rational(0), Rational(1, 2), Rational(1), Rational(3, 2),
                                          Rational(2), Rational(3)};
    return pick(rng, cs);
}

Guard random_guard(Rng& rng, const std::vector<Clock>& clocks, const CeaShape& shape) {
    if (clocks.empty() || coin(rng, 0.4)) return Guard::always();
    auto atom = [&] {
        Cmp c;
        if (shape.monotone_le)
            c = Cmp::Le;
        else if (shape.monotone_ge)
            c = Cmp::Ge;
        else
            c = pick(rng, std::vector<Cmp>{Cmp::Lt, Cmp::Le, Cmp::Eq, Cmp::Ge, Cmp::Gt});
        return Guard::atom(pick(rng, clocks), c, random_constant(rng));
    };
    Guard g = atom();
    if (coin(rng, 0.25)) g = Guard::conj(g, atom());
    if (!shape.monotone_le && !shape.monotone_ge && coin(rng, 0.1)) g = Guard::disj(g, atom());
    return g;
}

VarSet random_label(Rng& rng) {
    VarSet l;
    for (const auto& v : kVars)
        if (coin(rng, 0.35)) l.insert(v);
    return l;
}

}  // namespace

Predicate random_predicate(Rng& rng, int depth) {
    int r = uniform(rng, 0, depth > 0 ? 5 : 2);
    switch (r) {
        case 0: return Predicate::type_is(pick(rng, kTypes));
        case 1:
        case 2: return Predicate::basic("v", pick(rng, kCmps), Rational(uniform(rng, 0, 5)));
        case 3: return Predicate::negate(random_predicate(rng, depth - 1));
        default: return Predicate::conj(random_predicate(rng, depth - 1), random_predicate(rng, depth - 1));
    }
}

Event random_event(Rng& rng) {
    Event e;
    e.type = pick(rng, kTypes);
    e.attrs["v"] = Rational(uniform(rng, 0, 5));
    return e;
}

TimedStream random_stream(Rng& rng, std::size_t n) {
    static const std::vector<Rational> gaps{Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3),
                                            Rational(1),    Rational(3, 2), Rational(2)};
    TimedStream s;
    Rational t = pick(rng, gaps);
    for (std::size_t i = 0; i < n; ++i) {
        s.push(random_event(rng), t);
        t = t + pick(rng, gaps);
    }
    return s;
}

Interval random_interval(Rng& rng) {
    static const std::vector<Rational> lows{Rational(0), Rational(0), Rational(1, 2), Rational(1)};
    static const std::vector<Rational> widths{Rational(1, 2), Rational(1), Rational(2), Rational(3)};
    Interval i;
    i.low = pick(rng, lows);
    if (coin(rng, 0.2)) {
        i.low_open = i.low > Rational(0) && coin(rng);
        i.high_open = true;
        return i;
    }
    i.high = i.low + pick(rng, widths);
    i.low_open = i.low > Rational(0) && coin(rng, 0.3);
    i.high_open = coin(rng, 0.3);
    return i;
}

Cel random_formula(Rng& rng, int max_depth) {
    if (max_depth <= 0) {
        Cel f = cel::event_type(pick(rng, kTypes));
        return coin(rng, 0.5) ? cel::as(f, pick(rng, kVars)) : f;
    }
    auto sub = [&] { return random_formula(rng, max_depth - 1); };
    auto kind = static_cast<CelKind>(uniform(rng, 0, static_cast<int>(CelKind::TimedContigIter)));
    switch (kind) {
        case CelKind::EventType: return cel::event_type(pick(rng, kTypes));
        case CelKind::As: return cel::as(sub(), pick(rng, kVars));
        case CelKind::Filter: {
            Cel f = sub();
            VarSet vs = cel_variables(f);
            std::string v = vs.empty() ? pick(rng, kVars) : pick(rng, std::vector<std::string>(vs.begin(), vs.end()));
            return cel::filter(f, v, random_predicate(rng, 1));
        }
        case CelKind::Or: return cel::disj(sub(), sub());
        case CelKind::And: return cel::conj(sub(), sub());
        case CelKind::Seq: return cel::seq(sub(), sub());
        case CelKind::ContigSeq: return cel::contig(sub(), sub());
        case CelKind::Plus: return cel::plus(sub());
        case CelKind::ContigPlus: return cel::contig_plus(sub());
        case CelKind::Project: {
            VarSet keep;
            for (const auto& v : kVars)
                if (coin(rng)) keep.insert(v);
            return cel::project(keep, sub());
        }
        case CelKind::Within: return cel::within(sub(), random_interval(rng));
        case CelKind::TimedSeq: return cel::timed_seq(sub(), random_interval(rng), sub());
        case CelKind::TimedContigSeq: return cel::timed_contig(sub(), random_interval(rng), sub());
        case CelKind::TimedIter: return cel::timed_iter(sub(), random_interval(rng));
        case CelKind::TimedContigIter: return cel::timed_contig_iter(sub(), random_interval(rng));
    }
    return cel::event_type("A");
}

TimedCea random_cea(Rng& rng, const CeaShape& shape) {
    TimedCea a;
    int nq = uniform(rng, 2, shape.max_states);
    for (int q = 0; q < nq; ++q) a.add_state();
    a.initial = 0;
    a.finals.insert(uniform(rng, 1, nq - 1));
    if (coin(rng, 0.3)) a.finals.insert(uniform(rng, 0, nq - 1));
    std::vector<Clock> clocks;
    int nc = uniform(rng, 0, shape.max_clocks);
    for (int c = 1; c <= nc; ++c) clocks.push_back("z" + std::to_string(c));

    // For synchronous shapes the reset set is a function of the label.
    std::map<VarSet, ClockSet> reset_of;
    auto resets_for = [&](const VarSet& label) {
        ClockSet r;
        for (const auto& z : clocks)
            if (coin(rng, 0.4)) r.insert(z);
        if (!shape.synchronous) return r;
        return reset_of.try_emplace(label, r).first->second;
    };

    int nt = uniform(rng, nq, shape.max_transitions);
    for (int k = 0; k < nt; ++k) {
        Transition t;
        // The first transitions chain the states so most of them are reachable.
        t.from = k < nq - 1 ? k : uniform(rng, 0, nq - 1);
        t.to = k < nq - 1 ? k + 1 : uniform(rng, 0, nq - 1);
        t.pred = coin(rng, 0.2) ? Predicate::always() : random_predicate(rng, 1);
        t.guard = random_guard(rng, clocks, shape);
        t.label = random_label(rng);
        t.resets = resets_for(t.label);
        a.add(std::move(t));
    }
    for (const auto& z : clocks) a.clocks.insert(z);
    return a;
}

TimedCea random_streamable_cea(Rng& rng) {
    for (;;) {
        CeaShape shape;
        shape.max_clocks = 1;
        shape.max_states = 4;
        shape.max_transitions = 7;
        shape.synchronous = true;
        if (coin(rng))
            shape.monotone_le = true;
        else
            shape.monotone_ge = true;
        TimedCea a = random_cea(rng, shape);
        // A reset on each initial transition keeps most guards readable.
        for (auto& t : a.delta)
            if (t.from == a.initial && !a.clocks.empty()) t.resets = a.clocks;
        if (check_sync(a, 200'000).verdict != SyncVerdict::Yes) continue;
        TimedCea d;
        try {
            d = determinize(a);
        } catch (const NotSynchronous&) {
            continue;
        }
        if (d.delta.empty() || d.finals.empty()) continue;
        if (d.clocks.size() > 1 || is_monotonic(d) == Monotonicity::No) continue;
        if (!is_deterministic(d) || clock_use_violation(d)) continue;
        return d;
    }
}

TimedCea conflicting_cea(Rng& rng) {
    TimedCea a;
    int prefix = uniform(rng, 0, 2);
    bool z1_set = false;
    for (int q = 0; q < prefix + 3; ++q) a.add_state();
    a.initial = 0;
    a.clocks = {"z1", "z2"};
    for (int q = 0; q < prefix; ++q) {
        Transition t;
        t.from = q;
        t.to = q + 1;
        do t.pred = random_predicate(rng, 1);
        while (!satisfiable({{t.pred, true}}));
        t.label = random_label(rng);
        if (coin(rng)) t.resets = {"z1"};
        z1_set = z1_set || !t.resets.empty();
        a.add(std::move(t));
    }
    // Two branches from the last prefix state on a common event.
    Predicate common = Predicate::type_is(pick(rng, kTypes));
    Transition b1, b2;
    b1.from = b2.from = prefix;
    b1.to = prefix + 1;
    b2.to = prefix + 2;
    b1.pred = coin(rng) ? common : Predicate::conj(common, Predicate::basic("v", Cmp::Ge, Rational(uniform(rng, 0, 3))));
    b2.pred = common;
    b1.label = b2.label = random_label(rng);
    if (coin(rng)) {
        b1.resets = {"z1"};
        b2.resets = {"z2"};
    } else {
        b1.resets = {"z1"};
    }
    if (z1_set && coin(rng)) b1.guard = Guard::atom("z1", Cmp::Ge, Rational(0));
    a.add(b1);
    a.add(b2);
    a.finals = {prefix + 1, prefix + 2};
    return a;
}

TimedStream sensor_stream(Rng& rng, std::size_t n, const Rational& mean_gap) {
    TimedStream s;
    Rational t = mean_gap;
    std::uniform_int_distribution<int> hum(10, 80), temp(20, 50), step(1, 3);
    for (std::size_t i = 0; i < n; ++i) {
        Event e;
        if (coin(rng)) {
            e.type = "H";
            e.attrs["hum"] = Rational(hum(rng));
        } else {
            e.type = "T";
            e.attrs["temp"] = Rational(temp(rng));
        }
        s.push(std::move(e), t);
        // Gaps of 1/2, 1 or 3/2 times the mean.
        t = t + mean_gap * Rational(step(rng), 2);
    }
    return s;
}

}  // namespace tcer
