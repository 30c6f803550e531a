#include "tcer/cea.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>

namespace tcer {

namespace {

std::string set_str(const std::set<std::string>& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& x : s) {
        if (!first) out += ",";
        first = false;
        out += x;
    }
    return out + "}";
}

}  // namespace

std::string Transition::str() const {
    return std::to_string(from) + " -[" + pred.str() + " | " + guard.str() + " / " + set_str(label) + ", " +
           set_str(resets) + "]-> " + std::to_string(to);
}

State TimedCea::add_state(std::string name) {
    names.resize(static_cast<std::size_t>(num_states));
    names.push_back(std::move(name));
    return num_states++;
}

void TimedCea::add(Transition t) {
    auto gc = t.guard.clocks();
    clocks.insert(gc.begin(), gc.end());
    clocks.insert(t.resets.begin(), t.resets.end());
    vars.insert(t.label.begin(), t.label.end());
    delta.push_back(std::move(t));
}

std::vector<std::vector<int>> TimedCea::outgoing() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(num_states));
    for (std::size_t k = 0; k < delta.size(); ++k) out[static_cast<std::size_t>(delta[k].from)].push_back(static_cast<int>(k));
    return out;
}

std::string TimedCea::state_name(State q) const {
    auto k = static_cast<std::size_t>(q);
    if (k < names.size() && !names[k].empty()) return names[k];
    return "q" + std::to_string(q);
}

std::size_t TimedCea::size() const {
    std::size_t n = static_cast<std::size_t>(num_states);
    for (const auto& t : delta) n += t.guard.size() + t.pred.size() + t.label.size() + t.resets.size();
    return n;
}

std::vector<Successor> step(const TimedCea& a, State state, const Valuation& val, const Event& e,
                            const Rational& dt) {
    std::vector<Successor> out;
    Valuation moved = advance(val, dt);
    for (std::size_t k = 0; k < a.delta.size(); ++k) {
        const auto& t = a.delta[k];
        if (t.from != state) continue;
        if (!sat(e, t.pred) || !guard_sat(moved, t.guard)) continue;
        out.push_back({t.to, reset(moved, t.resets), t.label, static_cast<int>(k)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Run enumeration

namespace {

struct Config {
    State state;
    Valuation val;
    IndexedView iota;

    bool operator<(const Config& o) const {
        return std::tie(state, val, iota) < std::tie(o.state, o.val, o.iota);
    }
};

}  // namespace

std::vector<CeSet> eval_cea_by_end(const TimedCea& a, const TimedStream& s, const CeaOracleOptions& opt) {
    if (s.size() > opt.max_stream)
        throw OracleLimit("stream of length " + std::to_string(s.size()) + " exceeds the oracle cap of " +
                          std::to_string(opt.max_stream));
    auto outs = a.outgoing();
    std::vector<CeSet> result(s.size() + 1);
    for (std::size_t i = 1; i <= s.size(); ++i) {
        std::set<Config> live{{a.initial, {}, {}}};
        for (std::size_t k = i; k <= s.size() && !live.empty(); ++k) {
            // The first step's delay is irrelevant: the valuation is still empty.
            Rational dt = k == i ? s.ts(k) : s.ts(k) - s.ts(k - 1);
            std::set<Config> next;
            for (const auto& c : live) {
                Valuation moved = advance(c.val, dt);
                for (int ti : outs[static_cast<std::size_t>(c.state)]) {
                    const auto& t = a.delta[static_cast<std::size_t>(ti)];
                    if (!sat(s.event(k), t.pred) || !guard_sat(moved, t.guard)) continue;
                    Config n{t.to, reset(moved, t.resets), c.iota};
                    if (!t.label.empty()) n.iota[k] = t.label;
                    if (a.is_final(t.to)) result[k].insert(from_indexed(i, k, n.iota));
                    next.insert(std::move(n));
                }
            }
            if (opt.max_results && next.size() > opt.max_results)
                throw OracleLimit("automaton oracle exceeded " + std::to_string(opt.max_results) + " configurations");
            live = std::move(next);
        }
    }
    return result;
}

CeSet eval_cea_oracle(const TimedCea& a, const TimedStream& s, const CeaOracleOptions& opt) {
    CeSet out;
    for (auto& part : eval_cea_by_end(a, s, opt)) out.insert(part.begin(), part.end());
    return out;
}

CeSet eval_cea_at(const TimedCea& a, const TimedStream& s, std::size_t j, const CeaOracleOptions& opt) {
    auto parts = eval_cea_by_end(a, s, opt);
    if (j == 0 || j >= parts.size()) return {};
    return parts[j];
}

// ---------------------------------------------------------------------------
// Classifiers

std::optional<std::pair<int, int>> determinism_violation(const TimedCea& a) {
    auto outs = a.outgoing();
    for (const auto& list : outs) {
        for (std::size_t x = 0; x < list.size(); ++x) {
            for (std::size_t y = x + 1; y < list.size(); ++y) {
                const auto& t1 = a.delta[static_cast<std::size_t>(list[x])];
                const auto& t2 = a.delta[static_cast<std::size_t>(list[y])];
                if (t1.label != t2.label) continue;
                if (!intersects(t1.pred, t2.pred)) continue;
                if (!guards_intersect(t1.guard, t2.guard)) continue;
                return std::make_pair(list[x], list[y]);
            }
        }
    }
    return std::nullopt;
}

bool is_deterministic(const TimedCea& a) { return !determinism_violation(a).has_value(); }

const char* monotonicity_name(Monotonicity m) {
    switch (m) {
        case Monotonicity::Le: return "le";
        case Monotonicity::Ge: return "ge";
        case Monotonicity::No: return "no";
    }
    return "?";
}

namespace {

// Every atom of a pure conjunction uses `want`.
bool conj_of(const Guard& g, Cmp want) {
    switch (g.kind()) {
        case Guard::Kind::True: return true;
        case Guard::Kind::Atom: return g.cmp() == want;
        case Guard::Kind::And: return conj_of(g.left(), want) && conj_of(g.right(), want);
        default: return false;
    }
}

}  // namespace

Monotonicity is_monotonic(const TimedCea& a) {
    bool le = true, ge = true;
    for (const auto& t : a.delta) {
        le = le && conj_of(t.guard, Cmp::Le);
        ge = ge && conj_of(t.guard, Cmp::Ge);
    }
    if (le) return Monotonicity::Le;
    if (ge) return Monotonicity::Ge;
    return Monotonicity::No;
}

bool no_initial_incoming(const TimedCea& a) {
    return std::none_of(a.delta.begin(), a.delta.end(), [&](const Transition& t) { return t.to == a.initial; });
}

std::optional<int> clock_use_violation(const TimedCea& a) {
    auto outs = a.outgoing();
    for (const auto& z : a.clocks) {
        std::vector<bool> seen(static_cast<std::size_t>(a.num_states), false);
        std::deque<State> todo{a.initial};
        seen[static_cast<std::size_t>(a.initial)] = true;
        while (!todo.empty()) {
            State q = todo.front();
            todo.pop_front();
            for (int ti : outs[static_cast<std::size_t>(q)]) {
                const auto& t = a.delta[static_cast<std::size_t>(ti)];
                if (t.guard.clocks().count(z)) return ti;
                if (t.resets.count(z)) continue;
                if (!seen[static_cast<std::size_t>(t.to)]) {
                    seen[static_cast<std::size_t>(t.to)] = true;
                    todo.push_back(t.to);
                }
            }
        }
    }
    return std::nullopt;
}

void trim(TimedCea& a) {
    auto n = static_cast<std::size_t>(a.num_states);
    std::vector<bool> fwd(n, false), bwd(n, false);
    auto outs = a.outgoing();
    std::deque<State> todo{a.initial};
    fwd[static_cast<std::size_t>(a.initial)] = true;
    while (!todo.empty()) {
        State q = todo.front();
        todo.pop_front();
        for (int ti : outs[static_cast<std::size_t>(q)]) {
            auto to = static_cast<std::size_t>(a.delta[static_cast<std::size_t>(ti)].to);
            if (!fwd[to]) {
                fwd[to] = true;
                todo.push_back(static_cast<State>(to));
            }
        }
    }
    for (State f : a.finals) bwd[static_cast<std::size_t>(f)] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& t : a.delta) {
            if (bwd[static_cast<std::size_t>(t.to)] && !bwd[static_cast<std::size_t>(t.from)]) {
                bwd[static_cast<std::size_t>(t.from)] = true;
                changed = true;
            }
        }
    }
    std::vector<State> id(n, -1);
    TimedCea r;
    for (std::size_t q = 0; q < n; ++q) {
        if (static_cast<State>(q) == a.initial || (fwd[q] && bwd[q]))
            id[q] = r.add_state(a.state_name(static_cast<State>(q)));
    }
    r.initial = id[static_cast<std::size_t>(a.initial)];
    for (State f : a.finals)
        if (id[static_cast<std::size_t>(f)] >= 0) r.finals.insert(id[static_cast<std::size_t>(f)]);
    for (auto t : a.delta) {
        State from = id[static_cast<std::size_t>(t.from)], to = id[static_cast<std::size_t>(t.to)];
        if (from < 0 || to < 0) continue;
        t.from = from;
        t.to = to;
        r.add(std::move(t));
    }
    r.clocks.insert(a.clocks.begin(), a.clocks.end());
    r.vars = a.vars;
    a = std::move(r);
}


std::string to_dot(const TimedCea& a) {
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '"' || c == '\\') o += '\\';
            o += c;
        }
        return o;
    };
    std::ostringstream os;
    os << "digraph cea {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (State q = 0; q < a.num_states; ++q) {
        os << "  q" << q << " [label=\"" << esc(a.state_name(q)) << "\", shape="
           << (a.is_final(q) ? "doublecircle" : "circle") << "];\n";
    }
    os << "  __start -> q" << a.initial << ";\n";
    for (const auto& t : a.delta) {
        std::string label = t.pred.str();
        if (!t.guard.is_true()) label += ", " + t.guard.str();
        label += " / " + set_str(t.label);
        if (!t.resets.empty()) label += ", " + set_str(t.resets);
        os << "  q" << t.from << " -> q" << t.to << " [label=\"" << esc(label) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace tcer
