#include "tcer/determinizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace tcer {

// ---------------------------------------------------------------------------
// Types

std::vector<PredicateType> predicate_types(const std::vector<Predicate>& preds) {
    std::vector<PredicateType> out;
    std::vector<PredLiteral> lits;
    std::vector<bool> members;
    auto rec = [&](auto& self, std::size_t i) -> void {
        if (!satisfiable(lits)) return;
        if (i == preds.size()) {
            Predicate p;
            for (const auto& l : lits) {
                Predicate x = l.positive ? l.pred : Predicate::negate(l.pred);
                p = p.is_true() ? x : Predicate::conj(p, x);
            }
            out.push_back({members, p});
            return;
        }
        for (bool pos : {true, false}) {
            lits.push_back({preds[i], pos});
            members.push_back(pos);
            self(self, i + 1);
            lits.pop_back();
            members.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<GuardType> guard_types(const std::vector<Guard>& guards) {
    std::vector<GuardType> out;
    std::vector<Guard> lits;
    std::vector<bool> members;
    auto rec = [&](auto& self, std::size_t i) -> void {
        if (!guard_model(lits)) return;
        if (i == guards.size()) {
            Guard g;
            for (const auto& l : lits) g = Guard::conj(g, l);
            out.push_back({members, g});
            return;
        }
        for (bool pos : {true, false}) {
            lits.push_back(pos ? guards[i] : negate_guard(guards[i]));
            members.push_back(pos);
            self(self, i + 1);
            lits.pop_back();
            members.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Determinization

namespace {

std::string clocks_str(const ClockSet& s) {
    std::string o = "{";
    for (const auto& z : s) o += (o.size() > 1 ? "," : "") + z;
    return o + "}";
}

bool subset(const ClockSet& a, const ClockSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TimedCea determinize(const TimedCea& a, const DeterminizeOptions& opt) {
    using Key = std::pair<std::vector<State>, ClockSet>;
    TimedCea d;
    std::map<Key, State> id;
    std::deque<Key> todo;
    auto get = [&](Key k) {
        auto it = id.find(k);
        if (it != id.end()) return it->second;
        std::string name = "{";
        bool fin = false;
        for (State q : k.first) {
            name += (name.size() > 1 ? "," : "") + a.state_name(q);
            fin = fin || a.is_final(q);
        }
        name += "}";
        if (!k.second.empty()) name += clocks_str(k.second);
        State s = d.add_state(name);
        if (fin) d.finals.insert(s);
        id.emplace(k, s);
        todo.push_back(std::move(k));
        return s;
    };
    d.initial = get({{a.initial}, {}});
    auto outs = a.outgoing();

    while (!todo.empty()) {
        Key key = todo.front();
        todo.pop_front();
        State from = id.at(key);
        const ClockSet& dom = key.second;

        std::vector<int> live;
        for (State q : key.first)
            for (int ti : outs[static_cast<std::size_t>(q)])
                if (subset(a.delta[static_cast<std::size_t>(ti)].guard.clocks(), dom)) live.push_back(ti);
        if (live.empty()) continue;

        std::vector<Predicate> preds;
        for (int ti : live) {
            const auto& p = a.delta[static_cast<std::size_t>(ti)].pred;
            if (!p.is_true() && std::find(preds.begin(), preds.end(), p) == preds.end()) preds.push_back(p);
        }
        for (const auto& pt : predicate_types(preds)) {
            std::vector<int> mp;
            for (int ti : live) {
                const auto& p = a.delta[static_cast<std::size_t>(ti)].pred;
                if (p.is_true()) {
                    mp.push_back(ti);
                    continue;
                }
                auto k = static_cast<std::size_t>(std::find(preds.begin(), preds.end(), p) - preds.begin());
                if (pt.members[k]) mp.push_back(ti);
            }
            if (mp.empty()) continue;

            std::vector<Guard> guards;
            for (int ti : mp) {
                const auto& g = a.delta[static_cast<std::size_t>(ti)].guard;
                if (!g.is_true() && std::find(guards.begin(), guards.end(), g) == guards.end()) guards.push_back(g);
            }
            for (const auto& gt : guard_types(guards)) {
                std::map<VarSet, std::pair<std::vector<State>, std::optional<ClockSet>>> cells;
                std::map<VarSet, int> witness;
                for (int ti : mp) {
                    const auto& t = a.delta[static_cast<std::size_t>(ti)];
                    if (!t.guard.is_true()) {
                        auto k = static_cast<std::size_t>(std::find(guards.begin(), guards.end(), t.guard) - guards.begin());
                        if (!gt.members[k]) continue;
                    }
                    auto& cell = cells[t.label];
                    cell.first.push_back(t.to);
                    if (!cell.second) {
                        cell.second = t.resets;
                        witness[t.label] = ti;
                    } else if (*cell.second != t.resets) {
                        const auto& o = a.delta[static_cast<std::size_t>(witness[t.label])];
                        throw NotSynchronous("transitions reset different clocks on the same label from state " +
                                             d.state_name(from) + ": " + o.str() + " vs " + t.str());
                    }
                }
                for (auto& [label, cell] : cells) {
                    auto& targets = cell.first;
                    std::sort(targets.begin(), targets.end());
                    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
                    ClockSet ndom = dom;
                    ndom.insert(cell.second->begin(), cell.second->end());
                    Transition t;
                    t.from = from;
                    t.pred = pt.pred;
                    t.guard = gt.guard;
                    t.label = label;
                    t.resets = *cell.second;
                    t.to = get({targets, ndom});
                    d.add(std::move(t));
                }
            }
        }
    }
    d.clocks.insert(a.clocks.begin(), a.clocks.end());
    d.vars = a.vars;
    if (opt.normalize && d.clocks.size() == 1) normalize_single_clock(d);
    return d;
}

long double determinization_size_bound(const TimedCea& a) {
    long double q = a.num_states, m = static_cast<long double>(a.delta.size());
    long double t = static_cast<long double>(a.size());
    return std::exp2(q + 2 * m) * t + std::exp2(q);
}

namespace {

// [0, sup U): the arrival values from which some later event can use U.
IntervalSet downward(const IntervalSet& u) {
    if (u.empty()) return {};
    const auto& last = u.parts().back();
    if (!last.high) return IntervalSet::all();
    if (*last.high == Rational(0)) return {};
    return IntervalSet::of(Interval{Rational(0), *last.high, false, true});
}

}  // namespace

void normalize_single_clock(TimedCea& a) {
    if (a.clocks.size() != 1) return;
    const Clock z = *a.clocks.begin();
    auto n = static_cast<std::size_t>(a.num_states);
    std::vector<IntervalSet> gv;
    for (const auto& t : a.delta) gv.push_back(guard_values(t.guard, z));

    std::vector<IntervalSet> live(n);
    auto useful = [&](std::size_t k) {
        const auto& t = a.delta[k];
        if (a.is_final(t.to)) return gv[k];
        const auto& l = live[static_cast<std::size_t>(t.to)];
        if (!t.resets.empty()) return l.empty() ? IntervalSet{} : gv[k];
        return gv[k].intersect(l);
    };
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<IntervalSet> u(n);
        for (std::size_t k = 0; k < a.delta.size(); ++k) {
            auto& slot = u[static_cast<std::size_t>(a.delta[k].from)];
            slot = slot.unite(useful(k));
        }
        for (std::size_t q = 0; q < n; ++q) {
            auto w = downward(u[q]);
            if (!(w == live[q])) {
                live[q] = w;
                changed = true;
            }
        }
    }

    struct Group {
        Transition t;
        IntervalSet used, slack;  // slack: values where firing only reaches dead configurations
        Guard chosen;
    };
    std::map<std::string, Group> groups;
    for (std::size_t k = 0; k < a.delta.size(); ++k) {
        auto u = useful(k);
        if (u.empty()) continue;
        const auto& t = a.delta[k];
        Transition shape = t;
        shape.guard = Guard::always();
        std::string key = shape.str();
        auto [it, fresh] = groups.try_emplace(key, Group{shape, u, {}, {}});
        if (!fresh) it->second.used = it->second.used.unite(u);
        if (fresh && t.resets.empty() && !a.is_final(t.to))
            it->second.slack = live[static_cast<std::size_t>(t.to)].complement();
    }
    for (auto& [_, g] : groups) {
        IntervalSet allowed = g.used.unite(g.slack);
        g.chosen = guard_from_values(g.used, z);
        if (allowed.is_all()) {
            g.chosen = Guard::always();
        } else if (!g.used.parts().back().is_unbounded()) {
            Rational c = *g.used.parts().back().high;
            if (allowed.intersect(IntervalSet::of(Interval::at_most(c))) == IntervalSet::of(Interval::at_most(c)))
                g.chosen = Guard::atom(z, Cmp::Le, c);
        }
    }
    // Widening into slack may make two groups overlap; fall back to the exact sets there.
    std::vector<Group*> gs;
    for (auto& [_, g] : groups) gs.push_back(&g);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            for (std::size_t j = i + 1; j < gs.size(); ++j) {
                auto& x = *gs[i];
                auto& y = *gs[j];
                if (x.t.from != y.t.from || x.t.label != y.t.label || !(x.t.pred == y.t.pred)) continue;
                if (guard_values(x.chosen, z).intersect(guard_values(y.chosen, z)).empty()) continue;
                x.chosen = guard_from_values(x.used, z);
                y.chosen = guard_from_values(y.used, z);
                changed = true;
            }
        }
    }
    a.delta.clear();
    for (auto& [_, g] : groups) {
        g.t.guard = g.chosen;
        a.delta.push_back(g.t);
    }
    trim(a);
    a.clocks = {z};
}

// ---------------------------------------------------------------------------
// Synchronous resets

const char* sync_verdict_name(SyncVerdict v) {
    switch (v) {
        case SyncVerdict::Yes: return "yes";
        case SyncVerdict::No: return "no";
        case SyncVerdict::Unknown: return "unknown";
    }
    return "?";
}

namespace {

void collect_constants(const Guard& g, std::vector<std::pair<Clock, Rational>>& out) {
    switch (g.kind()) {
        case Guard::Kind::Atom: out.emplace_back(g.clock(), g.constant()); break;
        case Guard::Kind::And:
        case Guard::Kind::Or:
            collect_constants(g.left(), out);
            collect_constants(g.right(), out);
            break;
        default: break;
    }
}

}  // namespace

std::int64_t Regions::max_of(const Clock& z) const {
    auto it = max_.find(z);
    return it == max_.end() ? 0 : it->second;
}

Regions::Regions(const TimedCea& a) {
    std::vector<std::pair<Clock, Rational>> cs;
    for (const auto& t : a.delta) collect_constants(t.guard, cs);
    for (const auto& [z, c] : cs) scale_ = lcm_checked(scale_, c.den());
    for (const auto& z : a.clocks) max_[z] = 0;
    for (const auto& [z, c] : cs) max_[z] = std::max(max_[z], (c * Rational(scale_)).floor());
}

Valuation Regions::canon(const Valuation& v) const {
    std::vector<Rational> fracs;
    for (const auto& [z, x] : v) {
        Rational s = x * Rational(scale_);
        if (s <= Rational(max_of(z)) && !s.is_integer()) fracs.push_back(s.fract());
    }
    std::sort(fracs.begin(), fracs.end());
    fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
    auto k = static_cast<std::int64_t>(fracs.size()) + 1;
    Valuation out;
    for (const auto& [z, x] : v) {
        Rational s = x * Rational(scale_);
        std::int64_t c = max_of(z);
        Rational r;
        if (s > Rational(c)) {
            r = Rational(c + 1);
        } else {
            r = Rational(s.floor());
            if (!s.is_integer()) {
                auto rank = std::lower_bound(fracs.begin(), fracs.end(), s.fract()) - fracs.begin() + 1;
                r += Rational(rank, k);
            }
        }
        out[z] = r / Rational(scale_);
    }
    return out;
}

std::vector<Rational> Regions::delays(const Valuation& v) const {
    std::vector<Rational> crit;
    for (const auto& [z, x] : v) {
        Rational s = x * Rational(scale_);
        std::int64_t c = max_of(z);
        if (s > Rational(c)) continue;
        for (std::int64_t k = s.floor() + 1; k <= c + 1; ++k) crit.push_back(Rational(k) - s);
    }
    if (crit.empty()) return {Rational(1)};
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
    std::vector<Rational> out{crit.front() / Rational(2)};
    for (std::size_t i = 0; i < crit.size(); ++i) {
        out.push_back(crit[i]);
        if (i + 1 < crit.size()) out.push_back((crit[i] + crit[i + 1]) / Rational(2));
    }
    for (auto& d : out) d = d / Rational(scale_);
    return out;
}

SyncResult check_sync(const TimedCea& a, std::size_t cap) {
    SyncResult res;
    Regions regions(a);
    auto outs = a.outgoing();

    struct Node {
        State p, q;
        Valuation val;
        int parent;
        Rational delay;
        int t1, t2;
    };
    std::vector<Node> nodes;
    std::unordered_map<std::string, int> seen;
    auto key_of = [](State p, State q, const Valuation& v) {
        return std::to_string(p) + "," + std::to_string(q) + valuation_str(v);
    };
    nodes.push_back({a.initial, a.initial, {}, -1, Rational(0), -1, -1});
    seen.emplace(key_of(a.initial, a.initial, {}), 0);

    std::map<std::pair<int, int>, bool> joint;
    auto compatible = [&](int i, int j) {
        auto k = std::minmax(i, j);
        auto it = joint.find(k);
        if (it != joint.end()) return it->second;
        bool ok = intersects(a.delta[static_cast<std::size_t>(i)].pred, a.delta[static_cast<std::size_t>(j)].pred);
        joint.emplace(k, ok);
        return ok;
    };

    for (std::size_t head = 0; head < nodes.size(); ++head) {
        if (nodes.size() > cap) {
            res.verdict = SyncVerdict::Unknown;
            res.explored = nodes.size();
            return res;
        }
        const Node cur = nodes[head];
        for (const Rational& delta : regions.delays(cur.val)) {
            Valuation moved = tcer::advance(cur.val, delta);
            for (int i : outs[static_cast<std::size_t>(cur.p)]) {
                const auto& t1 = a.delta[static_cast<std::size_t>(i)];
                if (!guard_sat(moved, t1.guard)) continue;
                for (int j : outs[static_cast<std::size_t>(cur.q)]) {
                    const auto& t2 = a.delta[static_cast<std::size_t>(j)];
                    if (t1.label != t2.label || !guard_sat(moved, t2.guard) || !compatible(i, j)) continue;
                    if (t1.resets != t2.resets) {
                        res.verdict = SyncVerdict::No;
                        res.explored = nodes.size();
                        // Replay the abstract path with concrete delays.
                        std::vector<std::tuple<int, Rational, int, int>> path{{static_cast<int>(head), delta, i, j}};
                        for (int n = static_cast<int>(head); nodes[static_cast<std::size_t>(n)].parent >= 0;
                             n = nodes[static_cast<std::size_t>(n)].parent) {
                            const auto& nd = nodes[static_cast<std::size_t>(n)];
                            path.emplace_back(nd.parent, nd.delay, nd.t1, nd.t2);
                        }
                        std::reverse(path.begin(), path.end());
                        SyncWitness w;
                        Valuation concrete;
                        Rational ts(1);
                        bool first = true;
                        for (const auto& [src, d, x, y] : path) {
                            const auto& abs = nodes[static_cast<std::size_t>(src)].val;
                            Valuation target = regions.canon(tcer::advance(abs, d));
                            Rational dt(1);
                            for (const auto& c : regions.delays(concrete)) {
                                if (regions.canon(tcer::advance(concrete, c)) == target) {
                                    dt = c;
                                    break;
                                }
                            }
                            if (!first) ts += dt;
                            first = false;
                            const auto& tx = a.delta[static_cast<std::size_t>(x)];
                            const auto& ty = a.delta[static_cast<std::size_t>(y)];
                            concrete = reset(tcer::advance(concrete, dt), tx.resets);
                            auto ev = find_model({{tx.pred, true}, {ty.pred, true}});
                            w.stream.push(ev ? *ev : Event{}, ts);
                            w.run1.push_back(x);
                            w.run2.push_back(y);
                        }
                        res.witness = std::move(w);
                        return res;
                    }
                    Valuation nv = regions.canon(reset(moved, t1.resets));
                    auto k = key_of(t1.to, t2.to, nv);
                    if (seen.count(k)) continue;
                    seen.emplace(std::move(k), static_cast<int>(nodes.size()));
                    nodes.push_back({t1.to, t2.to, std::move(nv), static_cast<int>(head), delta, i, j});
                }
            }
        }
    }
    res.explored = nodes.size();
    return res;
}

bool verify_sync_witness(const TimedCea& a, const SyncWitness& w) {
    std::size_t n = w.run1.size();
    if (n == 0 || w.run2.size() != n || w.stream.size() != n) return false;
    State p = a.initial, q = a.initial;
    Valuation vp, vq;
    for (std::size_t k = 1; k <= n; ++k) {
        auto i = w.run1[k - 1], j = w.run2[k - 1];
        if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= a.delta.size() ||
            static_cast<std::size_t>(j) >= a.delta.size())
            return false;
        const auto& t1 = a.delta[static_cast<std::size_t>(i)];
        const auto& t2 = a.delta[static_cast<std::size_t>(j)];
        Rational dt = k == 1 ? Rational(0) : w.stream.ts(k) - w.stream.ts(k - 1);
        Valuation mp = tcer::advance(vp, dt), mq = tcer::advance(vq, dt);
        const auto& e = w.stream.event(k);
        if (t1.from != p || t2.from != q) return false;
        if (!sat(e, t1.pred) || !sat(e, t2.pred) || !guard_sat(mp, t1.guard) || !guard_sat(mq, t2.guard)) return false;
        if (t1.label != t2.label) return false;
        bool same = t1.resets == t2.resets;
        if (same != (k < n)) return false;
        vp = reset(mp, t1.resets);
        vq = reset(mq, t2.resets);
        p = t1.to;
        q = t2.to;
    }
    return true;
}

}  // namespace tcer
