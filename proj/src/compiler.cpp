#include "tcer/compiler.hpp"

#include <deque>
#include <map>

#include "tcer/determinizer.hpp"

namespace tcer {

Guard interval_guard(const Clock& z, const Interval& i) {
    Guard g = Guard::always();
    if (i.low_open)
        g = Guard::atom(z, Cmp::Gt, i.low);
    else if (i.low > Rational(0))
        g = Guard::atom(z, Cmp::Ge, i.low);
    if (i.high) g = Guard::conj(g, Guard::atom(z, i.high_open ? Cmp::Lt : Cmp::Le, *i.high));
    return g;
}

namespace {

Predicate pand(const Predicate& a, const Predicate& b) {
    if (a.is_true()) return b;
    if (b.is_true()) return a;
    return Predicate::conj(a, b);
}

Transition with(Transition t, State from, State to) {
    t.from = from;
    t.to = to;
    return t;
}

Transition loop(State q) {
    Transition t;
    t.from = t.to = q;
    return t;
}

class Compiler {
public:
    std::map<Clock, bool> window_clock;  // clock -> created by a time window

    TimedCea run(const Cel& f) {
        switch (f->kind) {
            case CelKind::EventType: return event_type(f->name);
            case CelKind::As: return as(run(f->lhs), f->name);
            case CelKind::Filter: return filter(run(f->lhs), f->name, f->pred);
            case CelKind::Or: return disj(run(f->lhs), run(f->rhs));
            case CelKind::And: return conj(run(f->lhs), run(f->rhs));
            case CelKind::Seq: return seq(run(f->lhs), run(f->rhs), true, nullptr);
            case CelKind::ContigSeq: return seq(run(f->lhs), run(f->rhs), false, nullptr);
            case CelKind::TimedSeq: return seq(run(f->lhs), run(f->rhs), true, &f->interval);
            case CelKind::TimedContigSeq: return seq(run(f->lhs), run(f->rhs), false, &f->interval);
            case CelKind::Plus: return iter(run(f->lhs), true, nullptr);
            case CelKind::ContigPlus: return iter(run(f->lhs), false, nullptr);
            case CelKind::TimedIter: return iter(run(f->lhs), true, &f->interval);
            case CelKind::TimedContigIter: return iter(run(f->lhs), false, &f->interval);
            case CelKind::Project: return project(run(f->lhs), f->vars);
            case CelKind::Within: return within(run(f->lhs), f->interval);
        }
        throw std::logic_error("unknown formula kind");
    }

private:
    int clock_counter_ = 0;

    Clock fresh_clock(bool window) {
        Clock z = "z" + std::to_string(++clock_counter_);
        window_clock[z] = window;
        return z;
    }

    // Copies the states and transitions of b into a; returns b's state offset.
    static int absorb(TimedCea& a, const TimedCea& b) {
        int off = a.num_states;
        for (State q = 0; q < b.num_states; ++q) a.add_state(b.names.size() > static_cast<std::size_t>(q) ? b.names[static_cast<std::size_t>(q)] : "");
        for (auto t : b.delta) {
            t.from += off;
            t.to += off;
            a.add(std::move(t));
        }
        a.clocks.insert(b.clocks.begin(), b.clocks.end());
        a.vars.insert(b.vars.begin(), b.vars.end());
        return off;
    }

    static TimedCea event_type(const std::string& r) {
        TimedCea a;
        State q0 = a.add_state(), q1 = a.add_state();
        a.initial = q0;
        a.finals = {q1};
        Transition t;
        t.from = q0;
        t.to = q1;
        t.pred = Predicate::type_is(r);
        t.label = {r};
        a.add(std::move(t));
        return a;
    }

    static TimedCea as(TimedCea a, const std::string& x) {
        for (auto& t : a.delta)
            if (!t.label.empty()) t.label.insert(x);
        a.vars.insert(x);
        return a;
    }

    static TimedCea filter(TimedCea a, const std::string& x, const Predicate& p) {
        for (auto& t : a.delta)
            if (t.label.count(x)) t.pred = pand(t.pred, p);
        return a;
    }

    static TimedCea project(TimedCea a, const VarSet& keep) {
        for (auto& t : a.delta) {
            VarSet l;
            for (const auto& v : t.label)
                if (keep.count(v)) l.insert(v);
            t.label = std::move(l);
        }
        a.vars = keep;
        return a;
    }

    static TimedCea disj(const TimedCea& a, const TimedCea& b) {
        TimedCea r;
        State q = r.add_state();
        r.initial = q;
        int oa = absorb(r, a), ob = absorb(r, b);
        for (State f : a.finals) r.finals.insert(f + oa);
        for (State f : b.finals) r.finals.insert(f + ob);
        for (const auto& t : a.delta)
            if (t.from == a.initial) r.add(with(t, q, t.to + oa));
        for (const auto& t : b.delta)
            if (t.from == b.initial) r.add(with(t, q, t.to + ob));
        return r;
    }

    // Product over the pairs reachable from the pair of initial states.
    static TimedCea conj(const TimedCea& a, const TimedCea& b) {
        TimedCea r;
        std::map<std::pair<State, State>, State> id;
        std::deque<std::pair<State, State>> todo;
        auto get = [&](State p, State q) {
            auto [it, fresh] = id.emplace(std::make_pair(p, q), r.num_states);
            if (fresh) {
                r.add_state(a.state_name(p) + "|" + b.state_name(q));
                if (a.is_final(p) && b.is_final(q)) r.finals.insert(it->second);
                todo.emplace_back(p, q);
            }
            return it->second;
        };
        r.initial = get(a.initial, b.initial);
        auto oa = a.outgoing(), ob = b.outgoing();
        while (!todo.empty()) {
            auto [p, q] = todo.front();
            todo.pop_front();
            State from = id.at({p, q});
            for (int i : oa[static_cast<std::size_t>(p)]) {
                for (int j : ob[static_cast<std::size_t>(q)]) {
                    const auto& t1 = a.delta[static_cast<std::size_t>(i)];
                    const auto& t2 = b.delta[static_cast<std::size_t>(j)];
                    if (t1.label != t2.label) continue;
                    Transition t;
                    t.from = from;
                    t.to = get(t1.to, t2.to);
                    t.pred = pand(t1.pred, t2.pred);
                    t.guard = Guard::conj(t1.guard, t2.guard);
                    t.label = t1.label;
                    t.resets = t1.resets;
                    t.resets.insert(t2.resets.begin(), t2.resets.end());
                    r.add(std::move(t));
                }
            }
        }
        r.clocks.insert(a.clocks.begin(), a.clocks.end());
        r.clocks.insert(b.clocks.begin(), b.clocks.end());
        r.vars.insert(a.vars.begin(), a.vars.end());
        r.vars.insert(b.vars.begin(), b.vars.end());
        return r;
    }

    // ; and : (gap == nullptr) and their timed variants.
    TimedCea seq(const TimedCea& a, const TimedCea& b, bool loose, const Interval* gap) {
        TimedCea r;
        absorb(r, a);
        int ob = absorb(r, b);
        r.initial = a.initial;
        for (State f : b.finals) r.finals.insert(f + ob);
        State q0b = b.initial + ob;
        if (!gap) {
            for (const auto& t : a.delta)
                if (a.is_final(t.to)) r.add(with(t, t.from, q0b));
            if (loose) r.add(loop(q0b));
            return r;
        }
        Clock z = fresh_clock(false);
        State qn = r.add_state();
        for (const auto& t : a.delta) {
            if (!a.is_final(t.to)) continue;
            Transition c = with(t, t.from, qn);
            c.resets.insert(z);
            r.add(std::move(c));
        }
        if (loose) r.add(loop(qn));
        Guard gi = interval_guard(z, *gap);
        for (const auto& t : b.delta) {
            if (t.from != b.initial) continue;
            Transition c = with(t, qn, t.to + ob);
            c.guard = Guard::conj(c.guard, gi);
            r.add(std::move(c));
        }
        return r;
    }

    // + and (+) (gap == nullptr) and their timed variants.
    TimedCea iter(const TimedCea& a, bool loose, const Interval* gap) {
        TimedCea r = a;
        State qn = r.add_state();
        Clock z;
        Guard gi = Guard::always();
        if (gap) {
            z = fresh_clock(false);
            gi = interval_guard(z, *gap);
            r.clocks.insert(z);
        }
        for (const auto& t : a.delta) {
            if (!a.is_final(t.to)) continue;
            Transition c = with(t, t.from, qn);
            if (gap) c.resets.insert(z);
            r.add(std::move(c));
        }
        if (loose) r.add(loop(qn));
        for (const auto& t : a.delta) {
            if (t.from != a.initial) continue;
            Transition c = with(t, qn, t.to);
            c.guard = Guard::conj(c.guard, gi);
            r.add(c);
            if (a.is_final(t.to)) {
                // One more single-step iteration: the gap since the previous
                // iteration is checked like any other re-entry.
                Transition d = with(t, qn, qn);
                d.guard = c.guard;
                if (gap) d.resets.insert(z);
                r.add(std::move(d));
            }
        }
        return r;
    }

    TimedCea within(const TimedCea& a, const Interval& w) {
        Clock z = fresh_clock(true);
        TimedCea r;
        for (State q = 0; q < a.num_states; ++q) r.add_state(a.state_name(q));
        r.clocks = a.clocks;
        r.vars = a.vars;
        r.initial = a.initial;
        State qf = r.add_state();
        r.finals = {qf};
        r.clocks.insert(z);
        Guard gi = interval_guard(z, w);
        for (const auto& t : a.delta) {
            bool into_final = a.is_final(t.to);
            if (t.from == a.initial) {
                if (!into_final) {
                    Transition c = t;
                    c.resets.insert(z);
                    r.add(std::move(c));
                } else if (w.contains(Rational(0))) {
                    r.add(with(t, t.from, qf));
                }
            } else {
                r.add(t);
                if (into_final) {
                    Transition c = with(t, t.from, qf);
                    c.guard = Guard::conj(c.guard, gi);
                    r.add(std::move(c));
                }
            }
        }
        return r;
    }
};

}  // namespace

TimedCea compile(const Cel& f) { return Compiler().run(f); }

void drop_dead_resets(TimedCea& a) {
    auto outs = a.outgoing();
    for (const auto& z : a.clocks) {
        // needs[q]: some path from q reads z before resetting it.
        std::vector<bool> needs(static_cast<std::size_t>(a.num_states), false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& t : a.delta) {
                if (needs[static_cast<std::size_t>(t.from)]) continue;
                bool reads = t.guard.clocks().count(z) > 0;
                bool passes = !t.resets.count(z) && needs[static_cast<std::size_t>(t.to)];
                if (reads || passes) {
                    needs[static_cast<std::size_t>(t.from)] = true;
                    changed = true;
                }
            }
        }
        for (auto& t : a.delta)
            if (t.resets.count(z) && !needs[static_cast<std::size_t>(t.to)]) t.resets.erase(z);
    }
}

void drop_unchecked_clocks(TimedCea& a) {
    ClockSet used;
    for (const auto& t : a.delta) {
        auto c = t.guard.clocks();
        used.insert(c.begin(), c.end());
    }
    for (auto& t : a.delta) {
        ClockSet keep;
        for (const auto& z : t.resets)
            if (used.count(z)) keep.insert(z);
        t.resets = std::move(keep);
    }
    a.clocks = used;
}

namespace {

Guard rename_clocks(const Guard& g, const std::map<Clock, bool>& window) {
    switch (g.kind()) {
        case Guard::Kind::Atom: {
            auto it = window.find(g.clock());
            bool w = it != window.end() && it->second;
            return Guard::atom(w ? kWindowClock : kGapClock, g.cmp(), g.constant());
        }
        case Guard::Kind::And:
            return Guard::conj(rename_clocks(g.left(), window), rename_clocks(g.right(), window));
        case Guard::Kind::Or:
            return Guard::disj(rename_clocks(g.left(), window), rename_clocks(g.right(), window));
        default:
            return g;
    }
}

}  // namespace

TimedCea compile_windowed(const Cel& f) {
    Classification c = classify(f);
    if (!c.windowed) throw NotWindowed("formula is not in the windowed fragment: " + print_query(f));
    Cel body = c.outer_projection ? f->lhs : f;

    Compiler comp;
    TimedCea a = comp.run(body);
    for (auto& t : a.delta) {
        t.guard = rename_clocks(t.guard, comp.window_clock);
        t.resets.clear();
        if (t.from == a.initial) t.resets.insert(kWindowClock);
        if (!t.label.empty()) t.resets.insert(kGapClock);
    }
    a.clocks = {kWindowClock, kGapClock};
    trim(a);
    if (!c.outer_projection) return a;

    for (auto& t : a.delta) {
        VarSet l;
        for (const auto& v : t.label)
            if (f->vars.count(v)) l.insert(v);
        t.label = std::move(l);
    }
    a.vars = f->vars;
    drop_dead_resets(a);
    drop_unchecked_clocks(a);
    SyncResult s = check_sync(a);
    if (s.verdict != SyncVerdict::Yes)
        throw NotWindowed("the outermost projection breaks synchronous resets for: " + print_query(f));
    return a;
}

}  // namespace tcer
