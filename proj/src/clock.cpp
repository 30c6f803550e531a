#include "tcer/clock.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tcer {

struct Guard::Node {
    Kind kind = Kind::True;
    Clock clock;
    Cmp cmp = Cmp::Le;
    Rational constant;
    Guard a{std::shared_ptr<const Node>()}, b{std::shared_ptr<const Node>()};
    std::string text;
    std::size_t size = 1;
};

Guard::Guard() {
    static const auto t = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::True;
        n->text = "true";
        return std::shared_ptr<const Node>(n);
    }();
    node_ = t;
}

Guard Guard::always() { return Guard(); }

Guard Guard::never() {
    static const auto f = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::False;
        n->text = "false";
        return std::shared_ptr<const Node>(n);
    }();
    return Guard(f);
}

Guard Guard::atom(Clock z, Cmp cmp, Rational c) {
    if (cmp == Cmp::Ne) throw std::invalid_argument("clock conditions do not support !=");
    if (c < Rational(0)) throw std::invalid_argument("clock constants must be non-negative");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->clock = std::move(z);
    n->cmp = cmp;
    n->constant = c;
    n->text = n->clock + " " + cmp_str(cmp) + " " + c.decimal();
    return Guard(std::shared_ptr<const Node>(n));
}

Guard Guard::conj(Guard a, Guard b) {
    if (a.is_false() || b.is_false()) return never();
    if (a.is_true()) return b;
    if (b.is_true()) return a;
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->text = "(" + a.str() + " && " + b.str() + ")";
    n->size = a.size() + b.size();
    n->a = std::move(a);
    n->b = std::move(b);
    return Guard(std::shared_ptr<const Node>(n));
}

Guard Guard::disj(Guard a, Guard b) {
    if (a.is_true() || b.is_true()) return always();
    if (a.is_false()) return b;
    if (b.is_false()) return a;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->text = "(" + a.str() + " || " + b.str() + ")";
    n->size = a.size() + b.size();
    n->a = std::move(a);
    n->b = std::move(b);
    return Guard(std::shared_ptr<const Node>(n));
}

Guard::Kind Guard::kind() const { return node_->kind; }
const Clock& Guard::clock() const { return node_->clock; }
Cmp Guard::cmp() const { return node_->cmp; }
const Rational& Guard::constant() const { return node_->constant; }
const Guard& Guard::left() const { return node_->a; }
const Guard& Guard::right() const { return node_->b; }
std::size_t Guard::size() const { return node_->size; }
std::string Guard::str() const { return node_->text; }

ClockSet Guard::clocks() const {
    ClockSet out;
    switch (kind()) {
        case Kind::Atom:
            out.insert(clock());
            break;
        case Kind::And:
        case Kind::Or: {
            out = left().clocks();
            auto r = right().clocks();
            out.insert(r.begin(), r.end());
            break;
        }
        default:
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------

Valuation advance(const Valuation& v, const Rational& dt) {
    Valuation out;
    for (const auto& [z, x] : v) out.emplace(z, x + dt);
    return out;
}

Valuation reset(const Valuation& v, const ClockSet& zs) {
    Valuation out = v;
    for (const auto& z : zs) out[z] = Rational(0);
    return out;
}

std::string valuation_str(const Valuation& v) {
    std::string s = "{";
    bool first = true;
    for (const auto& [z, x] : v) {
        if (!first) s += ", ";
        first = false;
        s += z + "=" + x.decimal();
    }
    return s + "}";
}

bool guard_sat(const Valuation& v, const Guard& g) {
    switch (g.kind()) {
        case Guard::Kind::True:
            return true;
        case Guard::Kind::False:
            return false;
        case Guard::Kind::Atom: {
            auto it = v.find(g.clock());
            if (it == v.end()) return false;
            return cmp_eval(g.cmp(), it->second, g.constant());
        }
        case Guard::Kind::And:
            return guard_sat(v, g.left()) && guard_sat(v, g.right());
        case Guard::Kind::Or: {
            // Every clock of the whole condition must be initialized.
            for (const auto& z : g.clocks())
                if (!v.count(z)) return false;
            return guard_sat(v, g.left()) || guard_sat(v, g.right());
        }
    }
    return false;
}

Guard negate_guard(const Guard& g) {
    switch (g.kind()) {
        case Guard::Kind::True:
            return Guard::never();
        case Guard::Kind::False:
            return Guard::always();
        case Guard::Kind::Atom:
            if (g.cmp() == Cmp::Eq)
                return Guard::disj(Guard::atom(g.clock(), Cmp::Gt, g.constant()),
                                   Guard::atom(g.clock(), Cmp::Lt, g.constant()));
            return Guard::atom(g.clock(), cmp_negate(g.cmp()), g.constant());
        case Guard::Kind::And:
            return Guard::disj(negate_guard(g.left()), negate_guard(g.right()));
        case Guard::Kind::Or:
            return Guard::conj(negate_guard(g.left()), negate_guard(g.right()));
    }
    return Guard::never();
}

namespace {

struct Bounds {
    Interval iv = Interval::all();
    bool empty = false;

    void meet(Cmp cmp, const Rational& c) {
        Interval a = Interval::all();
        switch (cmp) {
            case Cmp::Lt: a = {Rational(0), c, false, true}; break;
            case Cmp::Le: a = {Rational(0), c, false, false}; break;
            case Cmp::Eq: a = {c, c, false, false}; break;
            case Cmp::Ge: a = {c, std::nullopt, false, true}; break;
            case Cmp::Gt: a = {c, std::nullopt, true, true}; break;
            case Cmp::Ne: throw std::logic_error("unexpected != in clock condition");
        }
        auto r = IntervalSet::of(iv).intersect(IntervalSet::of(a));
        if (r.empty()) {
            empty = true;
        } else {
            iv = r.parts().front();
        }
    }

    Rational pick() const {
        if (!iv.low_open) return iv.low;
        if (!iv.high) return iv.low + Rational(1);
        return (iv.low + *iv.high) / Rational(2);
    }
};

// Depth-first expansion of the conjunction into atom sets.
bool search(std::vector<Guard> todo, std::map<Clock, Bounds> bounds, Valuation& model) {
    while (!todo.empty()) {
        Guard g = todo.back();
        todo.pop_back();
        switch (g.kind()) {
            case Guard::Kind::True:
                break;
            case Guard::Kind::False:
                return false;
            case Guard::Kind::Atom: {
                auto& b = bounds[g.clock()];
                b.meet(g.cmp(), g.constant());
                if (b.empty) return false;
                break;
            }
            case Guard::Kind::And:
                todo.push_back(g.left());
                todo.push_back(g.right());
                break;
            case Guard::Kind::Or: {
                // Clocks of the untaken branch still have to be defined.
                for (const auto& z : g.clocks()) bounds.try_emplace(z);
                auto t1 = todo;
                t1.push_back(g.left());
                if (search(t1, bounds, model)) return true;
                todo.push_back(g.right());
                break;
            }
        }
    }
    model.clear();
    for (const auto& [z, b] : bounds) model[z] = b.pick();
    return true;
}

}  // namespace

std::optional<Valuation> guard_model(const std::vector<Guard>& conj) {
    Valuation m;
    if (search(conj, {}, m)) return m;
    return std::nullopt;
}

bool guard_satisfiable(const Guard& g) { return guard_model({g}).has_value(); }

bool guards_intersect(const Guard& a, const Guard& b) { return guard_model({a, b}).has_value(); }

std::map<Clock, Rational> max_constants(const Guard& g) {
    std::map<Clock, Rational> out;
    std::vector<Guard> todo{g};
    while (!todo.empty()) {
        Guard x = todo.back();
        todo.pop_back();
        if (x.kind() == Guard::Kind::Atom) {
            auto [it, fresh] = out.emplace(x.clock(), x.constant());
            if (!fresh && it->second < x.constant()) it->second = x.constant();
        } else if (x.kind() == Guard::Kind::And || x.kind() == Guard::Kind::Or) {
            todo.push_back(x.left());
            todo.push_back(x.right());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// IntervalSet

namespace {

// Lower endpoint order: a value-closed start comes before an open one.
bool low_before(const Interval& a, const Interval& b) {
    if (a.low != b.low) return a.low < b.low;
    return !a.low_open && b.low_open;
}

// True if b starts inside a or right where a ends without a gap.
bool touches(const Interval& a, const Interval& b) {
    if (!a.high) return true;
    if (b.low < *a.high) return true;
    if (b.low == *a.high) return !(a.high_open && b.low_open);
    return false;
}

// Upper endpoint comparison: is a's end at or beyond b's end?
bool ends_after(const Interval& a, const Interval& b) {
    if (!a.high) return true;
    if (!b.high) return false;
    if (*a.high != *b.high) return *a.high > *b.high;
    return !a.high_open || b.high_open;
}

bool nonempty(const Interval& i) {
    if (!i.high) return true;
    if (i.low < *i.high) return true;
    return i.low == *i.high && !i.low_open && !i.high_open;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> parts) {
    std::vector<Interval> ps;
    for (auto& p : parts)
        if (nonempty(p)) ps.push_back(p);
    std::sort(ps.begin(), ps.end(), low_before);
    for (auto& p : ps) {
        if (!parts_.empty() && touches(parts_.back(), p)) {
            auto& last = parts_.back();
            if (!ends_after(last, p)) {
                last.high = p.high;
                last.high_open = p.high_open;
            }
        } else {
            parts_.push_back(p);
        }
    }
}

bool IntervalSet::contains(const Rational& q) const {
    return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& i) { return i.contains(q); });
}

bool IntervalSet::is_all() const { return parts_.size() == 1 && parts_[0] == Interval::all(); }

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
    std::vector<Interval> all = parts_;
    all.insert(all.end(), o.parts_.begin(), o.parts_.end());
    return IntervalSet(all);
}

IntervalSet IntervalSet::complement() const {
    std::vector<Interval> out;
    Rational cur(0);
    bool cur_open = false;
    bool done = false;
    for (const auto& p : parts_) {
        Interval gap{cur, p.low, cur_open, !p.low_open};
        out.push_back(gap);
        if (!p.high) {
            done = true;
            break;
        }
        cur = *p.high;
        cur_open = !p.high_open;
    }
    if (!done) out.push_back(Interval{cur, std::nullopt, cur_open, true});
    return IntervalSet(out);
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
    // A and B = not(not A or not B)
    return complement().unite(o.complement()).complement();
}

std::string IntervalSet::str() const {
    if (parts_.empty()) return "{}";
    std::string s;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += " u ";
        s += parts_[i].str();
    }
    return s;
}

IntervalSet guard_values(const Guard& g, const Clock& z) {
    switch (g.kind()) {
        case Guard::Kind::True:
            return IntervalSet::all();
        case Guard::Kind::False:
            return {};
        case Guard::Kind::Atom: {
            if (g.clock() != z) return IntervalSet::all();
            Bounds b;
            b.meet(g.cmp(), g.constant());
            if (b.empty) return {};
            return IntervalSet::of(b.iv);
        }
        case Guard::Kind::And:
            return guard_values(g.left(), z).intersect(guard_values(g.right(), z));
        case Guard::Kind::Or:
            return guard_values(g.left(), z).unite(guard_values(g.right(), z));
    }
    return {};
}

Guard guard_from_values(const IntervalSet& s, const Clock& z) {
    Guard out = Guard::never();
    for (const auto& p : s.parts()) {
        Guard g = Guard::always();
        if (p.high && p.low == *p.high) {
            g = Guard::atom(z, Cmp::Eq, p.low);
        } else {
            if (p.low_open)
                g = Guard::atom(z, Cmp::Gt, p.low);
            else if (p.low > Rational(0))
                g = Guard::atom(z, Cmp::Ge, p.low);
            if (p.high) g = Guard::conj(g, Guard::atom(z, p.high_open ? Cmp::Lt : Cmp::Le, *p.high));
        }
        out = Guard::disj(out, g);
    }
    return out;
}

}  // namespace tcer
