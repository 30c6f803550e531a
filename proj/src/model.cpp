#include "tcer/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tcer {

// ---------------------------------------------------------------------------
// Interval

bool Interval::contains(const Rational& q) const {
    if (low_open ? !(q > low) : !(q >= low)) return false;
    if (!high) return true;
    return high_open ? q < *high : q <= *high;
}

bool Interval::operator==(const Interval& o) const {
    if (low != o.low || low_open != o.low_open) return false;
    if (high.has_value() != o.high.has_value()) return false;
    if (!high) return true;
    return *high == *o.high && high_open == o.high_open;
}

std::string Interval::str() const {
    std::string s = low_open ? "(" : "[";
    s += low.decimal();
    s += ",";
    if (high) {
        s += high->decimal();
        s += high_open ? ")" : "]";
    } else {
        s += "inf)";
    }
    return s;
}

// ---------------------------------------------------------------------------
// Values and streams

std::string value_str(const Value& v) {
    if (auto r = std::get_if<Rational>(&v)) return r->decimal();
    std::string out = "\"";
    for (char c : std::get<std::string>(v)) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

TimedStream::TimedStream(std::vector<TimedEvent> items) {
    for (auto& it : items) push(std::move(it.event), it.ts);
}

void TimedStream::push(Event e, Rational ts) {
    if (ts < Rational(0)) throw std::invalid_argument("negative timestamp " + ts.decimal());
    if (!items_.empty() && !(ts > items_.back().ts)) {
        throw std::invalid_argument("timestamp " + ts.decimal() + " at position " + std::to_string(items_.size() + 1) +
                                    " does not exceed previous timestamp " + items_.back().ts.decimal());
    }
    items_.push_back({std::move(e), ts});
}

TimedStream TimedStream::prefix(std::size_t n) const {
    TimedStream s;
    s.items_.assign(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(std::min(n, items_.size())));
    return s;
}

// ---------------------------------------------------------------------------
// Predicates

const char* cmp_str(Cmp c) {
    switch (c) {
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Eq: return "=";
        case Cmp::Ge: return ">=";
        case Cmp::Gt: return ">";
        case Cmp::Ne: return "!=";
    }
    return "?";
}

Cmp cmp_negate(Cmp c) {
    switch (c) {
        case Cmp::Lt: return Cmp::Ge;
        case Cmp::Le: return Cmp::Gt;
        case Cmp::Eq: return Cmp::Ne;
        case Cmp::Ge: return Cmp::Lt;
        case Cmp::Gt: return Cmp::Le;
        case Cmp::Ne: return Cmp::Eq;
    }
    return c;
}

bool cmp_eval(Cmp c, const Rational& l, const Rational& r) {
    switch (c) {
        case Cmp::Lt: return l < r;
        case Cmp::Le: return l <= r;
        case Cmp::Eq: return l == r;
        case Cmp::Ge: return l >= r;
        case Cmp::Gt: return l > r;
        case Cmp::Ne: return l != r;
    }
    return false;
}

struct Predicate::Node {
    Kind kind = Kind::True;
    std::string name;  // attribute or type
    Cmp cmp = Cmp::Eq;
    Value constant;
    Predicate a{std::shared_ptr<const Node>()}, b{std::shared_ptr<const Node>()};
    std::size_t size = 0;
    std::string text;
};

Predicate::Predicate() {
    static const std::shared_ptr<const Node> t = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::True;
        n->size = 1;
        n->text = "true";
        return n;
    }();
    node_ = t;
}

Predicate Predicate::always() { return Predicate(); }

Predicate Predicate::basic(std::string attr, Cmp cmp, Value constant) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Basic;
    n->name = std::move(attr);
    n->cmp = cmp;
    n->constant = std::move(constant);
    n->size = 1;
    n->text = n->name + " " + cmp_str(cmp) + " " + value_str(n->constant);
    return Predicate(std::move(n));
}

Predicate Predicate::type_is(std::string type) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::TypeIs;
    n->name = std::move(type);
    n->size = 1;
    n->text = "is " + n->name;
    return Predicate(std::move(n));
}

Predicate Predicate::conj(Predicate a, Predicate b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->size = a.size() + b.size();
    n->text = "(" + a.str() + " && " + b.str() + ")";
    n->a = std::move(a);
    n->b = std::move(b);
    return Predicate(std::move(n));
}

Predicate Predicate::negate(Predicate a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->size = a.size() + 1;
    n->text = "!" + a.str();
    n->a = std::move(a);
    return Predicate(std::move(n));
}

Predicate Predicate::disj(Predicate a, Predicate b) {
    return negate(conj(negate(std::move(a)), negate(std::move(b))));
}

Predicate::Kind Predicate::kind() const { return node_->kind; }
const std::string& Predicate::attr() const { return node_->name; }
Cmp Predicate::cmp() const { return node_->cmp; }
const Value& Predicate::constant() const { return node_->constant; }
const std::string& Predicate::type_name() const { return node_->name; }
const Predicate& Predicate::left() const { return node_->a; }
const Predicate& Predicate::right() const { return node_->b; }
std::size_t Predicate::size() const { return node_->size; }
std::string Predicate::str() const { return node_->text; }

bool sat(const Event& e, const Predicate& p) {
    switch (p.kind()) {
        case Predicate::Kind::True: return true;
        case Predicate::Kind::TypeIs: return e.type == p.type_name();
        case Predicate::Kind::And: return sat(e, p.left()) && sat(e, p.right());
        case Predicate::Kind::Not: return !sat(e, p.left());
        case Predicate::Kind::Basic: {
            const Value* v = e.get(p.attr());
            if (!v) return false;
            const auto* num = std::get_if<Rational>(v);
            const auto* cnum = std::get_if<Rational>(&p.constant());
            if (num && cnum) return cmp_eval(p.cmp(), *num, *cnum);
            if (!num && !cnum) {
                const auto& s = std::get<std::string>(*v);
                const auto& c = std::get<std::string>(p.constant());
                if (p.cmp() == Cmp::Eq) return s == c;
                if (p.cmp() == Cmp::Ne) return s != c;
            }
            return false;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Predicate satisfiability

namespace {

struct AttrLit {
    Cmp cmp;
    Value constant;
    bool positive;
};

struct Atoms {
    std::vector<std::pair<std::string, bool>> types;
    std::map<std::string, std::vector<AttrLit>> attrs;
};

// Finds a number satisfying all (cmp, c) constraints.
std::optional<Rational> solve_numeric(const std::vector<std::pair<Cmp, Rational>>& cs) {
    std::optional<Rational> lo, hi, eq;
    bool lo_strict = false, hi_strict = false;
    std::vector<Rational> ne;
    for (const auto& [c, v] : cs) {
        switch (c) {
            case Cmp::Eq:
                if (eq && *eq != v) return std::nullopt;
                eq = v;
                break;
            case Cmp::Ne: ne.push_back(v); break;
            case Cmp::Gt:
            case Cmp::Ge: {
                bool strict = c == Cmp::Gt;
                if (!lo || v > *lo || (v == *lo && strict)) {
                    lo = v;
                    lo_strict = strict;
                }
                break;
            }
            case Cmp::Lt:
            case Cmp::Le: {
                bool strict = c == Cmp::Lt;
                if (!hi || v < *hi || (v == *hi && strict)) {
                    hi = v;
                    hi_strict = strict;
                }
                break;
            }
        }
    }
    auto ok = [&](const Rational& x) {
        for (const auto& [c, v] : cs)
            if (!cmp_eval(c, x, v)) return false;
        return true;
    };
    if (eq) return ok(*eq) ? eq : std::nullopt;
    std::vector<Rational> candidates;
    if (lo && hi) {
        if (*lo > *hi) return std::nullopt;
        if (*lo == *hi) {
            candidates.push_back(*lo);
        } else {
            Rational span = *hi - *lo;
            for (std::size_t k = 1; k <= ne.size() + 2; ++k) candidates.push_back(*lo + span / Rational(static_cast<std::int64_t>(k + 1)));
            candidates.push_back(*lo);
            candidates.push_back(*hi);
        }
    } else if (lo) {
        for (std::size_t k = 0; k <= ne.size() + 1; ++k) candidates.push_back(*lo + Rational(static_cast<std::int64_t>(k)));
    } else if (hi) {
        for (std::size_t k = 0; k <= ne.size() + 1; ++k) candidates.push_back(*hi - Rational(static_cast<std::int64_t>(k)));
    } else {
        for (std::size_t k = 0; k <= ne.size(); ++k) candidates.push_back(Rational(static_cast<std::int64_t>(k)));
    }
    (void)lo_strict;
    (void)hi_strict;
    for (const auto& x : candidates)
        if (ok(x)) return x;
    return std::nullopt;
}

std::optional<std::string> solve_string(const std::vector<std::pair<Cmp, std::string>>& cs) {
    std::optional<std::string> eq;
    std::set<std::string> ne;
    for (const auto& [c, v] : cs) {
        if (c == Cmp::Eq) {
            if (eq && *eq != v) return std::nullopt;
            eq = v;
        } else if (c == Cmp::Ne) {
            ne.insert(v);
        } else {
            return std::nullopt;
        }
    }
    if (eq) return ne.count(*eq) ? std::nullopt : eq;
    for (int k = 0;; ++k) {
        std::string s = "s" + std::to_string(k);
        if (!ne.count(s)) return s;
    }
}

// Picks a value for one attribute, or nullopt-in-optional meaning "leave it missing".
// Returns false if no choice works.
bool solve_attr(const std::vector<AttrLit>& lits, std::optional<Value>& out) {
    bool any_pos = false;
    for (const auto& l : lits) any_pos |= l.positive;
    if (!any_pos) {
        out.reset();
        return true;
    }
    // Numeric choice.
    {
        std::vector<std::pair<Cmp, Rational>> cs;
        bool possible = true;
        for (const auto& l : lits) {
            const auto* c = std::get_if<Rational>(&l.constant);
            if (l.positive) {
                if (!c) {
                    possible = false;
                    break;
                }
                cs.emplace_back(l.cmp, *c);
            } else if (c) {
                cs.emplace_back(cmp_negate(l.cmp), *c);
            }
        }
        if (possible) {
            if (auto x = solve_numeric(cs)) {
                out = *x;
                return true;
            }
        }
    }
    // String choice.
    {
        std::vector<std::pair<Cmp, std::string>> cs;
        bool possible = true;
        for (const auto& l : lits) {
            const auto* c = std::get_if<std::string>(&l.constant);
            if (l.positive) {
                if (!c || (l.cmp != Cmp::Eq && l.cmp != Cmp::Ne)) {
                    possible = false;
                    break;
                }
                cs.emplace_back(l.cmp, *c);
            } else if (c && (l.cmp == Cmp::Eq || l.cmp == Cmp::Ne)) {
                cs.emplace_back(cmp_negate(l.cmp), *c);
            }
        }
        if (possible) {
            if (auto s = solve_string(cs)) {
                out = *s;
                return true;
            }
        }
    }
    return false;
}

std::optional<Event> solve_atoms(const Atoms& atoms) {
    Event e;
    std::optional<std::string> type;
    std::set<std::string> not_types;
    for (const auto& [t, pos] : atoms.types) {
        if (pos) {
            if (type && *type != t) return std::nullopt;
            type = t;
        } else {
            not_types.insert(t);
        }
    }
    if (type) {
        if (not_types.count(*type)) return std::nullopt;
        e.type = *type;
    } else {
        for (int k = 0;; ++k) {
            std::string t = "T" + std::to_string(k);
            if (!not_types.count(t)) {
                e.type = t;
                break;
            }
        }
    }
    for (const auto& [name, lits] : atoms.attrs) {
        std::optional<Value> v;
        if (!solve_attr(lits, v)) return std::nullopt;
        if (v) e.attrs[name] = *v;
    }
    return e;
}

std::optional<Event> search(std::vector<PredLiteral> work, Atoms atoms) {
    while (!work.empty()) {
        PredLiteral lit = std::move(work.back());
        work.pop_back();
        const Predicate& p = lit.pred;
        switch (p.kind()) {
            case Predicate::Kind::True:
                if (!lit.positive) return std::nullopt;
                break;
            case Predicate::Kind::Not: work.push_back({p.left(), !lit.positive}); break;
            case Predicate::Kind::And:
                if (lit.positive) {
                    work.push_back({p.left(), true});
                    work.push_back({p.right(), true});
                } else {
                    auto alt = work;
                    alt.push_back({p.right(), false});
                    work.push_back({p.left(), false});
                    if (auto m = search(work, atoms)) return m;
                    return search(std::move(alt), std::move(atoms));
                }
                break;
            case Predicate::Kind::TypeIs:
                atoms.types.emplace_back(p.type_name(), lit.positive);
                // Cheap early exit on conflicting positive types.
                if (lit.positive) {
                    for (const auto& [t, pos] : atoms.types)
                        if (pos && t != p.type_name()) return std::nullopt;
                }
                break;
            case Predicate::Kind::Basic: atoms.attrs[p.attr()].push_back({p.cmp(), p.constant(), lit.positive}); break;
        }
    }
    return solve_atoms(atoms);
}

}  // namespace

std::optional<Event> find_model(const std::vector<PredLiteral>& lits) { return search(lits, Atoms{}); }

bool satisfiable(const std::vector<PredLiteral>& lits) { return find_model(lits).has_value(); }

bool intersects(const Predicate& a, const Predicate& b) { return satisfiable({{a, true}, {b, true}}); }

// ---------------------------------------------------------------------------
// Complex events

const std::set<std::size_t>& ComplexEvent::get(const std::string& var) const {
    static const std::set<std::size_t> empty;
    auto it = binding.find(var);
    return it == binding.end() ? empty : it->second;
}

bool ComplexEvent::well_formed() const {
    if (start > end) return false;
    for (const auto& [v, idx] : binding) {
        if (idx.empty()) return false;
        if (*idx.begin() < start || *idx.rbegin() > end) return false;
    }
    return true;
}

std::string ComplexEvent::str() const {
    std::ostringstream os;
    os << "(" << start << "," << end << ",{";
    bool first = true;
    for (const auto& [v, idx] : binding) {
        if (!first) os << ",";
        first = false;
        os << v << ":{";
        bool f2 = true;
        for (auto i : idx) {
            if (!f2) os << ",";
            f2 = false;
            os << i;
        }
        os << "}";
    }
    os << "})";
    return os.str();
}

IndexedView to_indexed(const ComplexEvent& c) {
    IndexedView iota;
    for (const auto& [v, idx] : c.binding)
        for (auto i : idx) iota[i].insert(v);
    return iota;
}

ComplexEvent from_indexed(std::size_t start, std::size_t end, const IndexedView& iota) {
    ComplexEvent c;
    c.start = start;
    c.end = end;
    for (const auto& [i, vars] : iota)
        for (const auto& v : vars) c.binding[v].insert(i);
    return c;
}

ComplexEvent union_ce(const ComplexEvent& a, const ComplexEvent& b) {
    ComplexEvent c;
    c.start = std::min(a.start, b.start);
    c.end = std::max(a.end, b.end);
    c.binding = a.binding;
    for (const auto& [v, idx] : b.binding) c.binding[v].insert(idx.begin(), idx.end());
    return c;
}

ComplexEvent project_ce(const ComplexEvent& c, const VarSet& vars) {
    ComplexEvent out;
    out.start = c.start;
    out.end = c.end;
    for (const auto& [v, idx] : c.binding)
        if (vars.count(v)) out.binding.emplace(v, idx);
    return out;
}

}  // namespace tcer
