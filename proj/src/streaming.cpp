#include "tcer/streaming.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

namespace tcer {

// ---------------------------------------------------------------------------
// Gadgets

const char* gadget_form_name(GadgetForm f) {
    switch (f) {
        case GadgetForm::Void: return "void";
        case GadgetForm::Reset: return "reset";
        case GadgetForm::ClockCheck: return "clock-check";
        case GadgetForm::Empty: return "empty";
        case GadgetForm::Composed: return "composed";
    }
    return "?";
}

GadgetForm Gadget::form() const {
    if (empty) return GadgetForm::Empty;
    if (ops.empty()) return GadgetForm::Void;
    if (ops.size() == 2) return GadgetForm::Composed;
    return ops[0].kind == GadgetOp::Kind::Reset ? GadgetForm::Reset : GadgetForm::ClockCheck;
}

std::string Gadget::str() const {
    if (empty) return "empty";
    std::string s;
    for (const auto& op : ops) {
        if (!s.empty()) s += " . ";
        if (op.kind == GadgetOp::Kind::Reset)
            s += "reset(" + op.t.str() + ")";
        else
            s += "check(" + op.t.str() + ", " + op.c.str() + ")";
    }
    return s.empty() ? "void" : s;
}

namespace {

bool check_passes(const GadgetOp& chk, const Rational& reset_time, Direction dir) {
    Rational elapsed = chk.t - reset_time;
    return dir == Direction::Le ? elapsed <= chk.c : elapsed >= chk.c;
}

// Two checks in series. Entries below both were reset no later than the
// earlier of the two creation times.
std::optional<GadgetOp> merge_checks(GadgetOp a, GadgetOp b, Direction dir) {
    if (a.t < b.t) std::swap(a, b);  // a: later check (t1, W1), b: earlier (t2, W2)
    Rational lo_a = a.t - a.c, lo_b = b.t - b.c;
    if (dir == Direction::Le) {
        if (lo_a <= lo_b) return b;
        if (lo_a <= b.t) return GadgetOp::check(b.t, a.c - (a.t - b.t));
        return std::nullopt;
    }
    if (lo_b <= lo_a) return b;
    return GadgetOp::check(b.t, a.c - (a.t - b.t));
}

}  // namespace

Gadget merge_gadgets(const Gadget& g1, const Gadget& g2, Direction dir) {
    Gadget out;
    if (g1.empty || g2.empty) {
        out.empty = true;
        return out;
    }
    std::vector<GadgetOp> ops = g1.ops;
    ops.insert(ops.end(), g2.ops.begin(), g2.ops.end());
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i + 1 < ops.size(); ++i) {
            const GadgetOp a = ops[i], b = ops[i + 1];
            using K = GadgetOp::Kind;
            std::optional<GadgetOp> r;
            if (a.kind == K::Reset && b.kind == K::Reset) {
                r = a;
            } else if (a.kind == K::Check && b.kind == K::Check) {
                r = merge_checks(a, b, dir);
                if (!r) {
                    out.empty = true;
                    return out;
                }
            } else if (a.kind == K::Check && b.kind == K::Reset) {
                if (!check_passes(a, b.t, dir)) {
                    out.empty = true;
                    return out;
                }
                r = b;
            } else {
                continue;  // reset above check: the composed form
            }
            ops[i] = *r;
            ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            changed = true;
            break;
        }
    }
    out.ops = std::move(ops);
    return out;
}

std::optional<Rational> apply_gadget(const Gadget& g, const Rational& reset_time, Direction dir) {
    if (g.empty) return std::nullopt;
    Rational r = reset_time;
    for (auto it = g.ops.rbegin(); it != g.ops.rend(); ++it) {
        if (it->kind == GadgetOp::Kind::Reset) {
            r = it->t;
        } else if (!check_passes(*it, r, dir)) {
            return std::nullopt;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Caecs

NodeId Caecs::push(CaecsNode n) {
    switch (n.kind) {
        case NodeKind::Bottom:
        case NodeKind::Extended:
        case NodeKind::Empty: n.odepth = 0; break;
        default: n.odepth = node(n.left).odepth + 1; break;
    }
    max_odepth_ = std::max(max_odepth_, n.odepth);
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Caecs::new_bottom(std::size_t i, const Rational& t) {
    CaecsNode n{NodeKind::Bottom};
    n.pos = i;
    n.t = t;
    n.maxkey = key(t);
    return push(std::move(n));
}

NodeId Caecs::extend(NodeId child, std::size_t j, const VarSet& label) {
    if (is_empty(child)) throw std::logic_error("extend of an empty node");
    auto [it, fresh] = label_ids_.try_emplace(label, static_cast<int>(labels_.size()));
    if (fresh) labels_.push_back(label);
    CaecsNode n{NodeKind::Extended};
    n.left = child;
    n.pos = j;
    n.label = it->second;
    n.maxkey = node(child).maxkey;
    return push(std::move(n));
}

NodeId Caecs::empty_node(NodeId debug_child) {
    CaecsNode n{NodeKind::Empty};
    n.left = debug_child;
    return push(std::move(n));
}

NodeId Caecs::raw_union(NodeId l, NodeId r) {
    assert(node(l).maxkey >= node(r).maxkey);
    if (node(l).odepth > 3) l = flatten(l);
    CaecsNode n{NodeKind::Union};
    n.left = l;
    n.right = r;
    n.maxkey = node(l).maxkey;
    return push(std::move(n));
}

NodeId Caecs::union_parts(const std::vector<NodeId>& parts) {
    std::vector<NodeId> live;
    for (NodeId p : parts)
        if (!is_empty(p)) live.push_back(p);
    if (live.empty()) return empty_node();
    NodeId acc = live.back();
    for (std::size_t k = live.size() - 1; k-- > 0;) acc = raw_union(live[k], acc);
    return acc;
}

std::pair<Gadget, NodeId> Caecs::get_gadget(NodeId n) const {
    Gadget g;
    const auto& x = node(n);
    switch (x.kind) {
        case NodeKind::Empty: g.empty = true; return {g, n};
        case NodeKind::Check: g.ops = {GadgetOp::check(x.t, x.c)}; return {g, x.left};
        case NodeKind::Reset: {
            g.ops = {GadgetOp::reset(x.t)};
            const auto& y = node(x.left);
            if (y.kind == NodeKind::Check) {
                g.ops.push_back(GadgetOp::check(y.t, y.c));
                return {g, y.left};
            }
            return {g, x.left};
        }
        default: return {g, n};
    }
}

NodeId Caecs::wrap(const Gadget& g, NodeId exit) {
    if (g.empty || is_empty(exit)) return empty_node(exit);
    NodeId cur = exit;
    for (auto it = g.ops.rbegin(); it != g.ops.rend(); ++it) {
        if (it->kind == GadgetOp::Kind::Check) {
            if (node(cur).maxkey < threshold(it->t, it->c)) return empty_node(cur);
            CaecsNode n{NodeKind::Check};
            n.left = cur;
            n.t = it->t;
            n.c = it->c;
            n.maxkey = node(cur).maxkey;
            cur = push(std::move(n));
        } else {
            CaecsNode n{NodeKind::Reset};
            n.left = cur;
            n.t = it->t;
            n.maxkey = key(it->t);
            cur = push(std::move(n));
        }
    }
    return cur;
}

NodeId Caecs::add_reset(NodeId n, const Rational& t) {
    if (is_empty(n)) throw std::logic_error("reset of an empty node");
    auto [g2, exit] = get_gadget(n);
    Gadget g1;
    g1.ops = {GadgetOp::reset(t)};
    return wrap(merge_gadgets(g1, g2, dir_), exit);
}

NodeId Caecs::add_clock_check(NodeId n, const Rational& t0, const Rational& c) {
    if (is_empty(n)) throw std::logic_error("clock check of an empty node");
    if (node(n).maxkey < threshold(t0, c)) return empty_node(n);
    auto [g2, exit] = get_gadget(n);
    Gadget g1;
    g1.ops = {GadgetOp::check(t0, c)};
    return wrap(merge_gadgets(g1, g2, dir_), exit);
}

NodeId Caecs::union_of(NodeId n1, NodeId n2) {
    if (is_empty(n1) || is_empty(n2)) throw std::logic_error("union with an empty node");
    if (node(n1).maxkey != node(n2).maxkey) throw std::logic_error("union of nodes with different max resets");
    auto [g1, e1] = get_gadget(n1);
    auto [g2, e2] = get_gadget(n2);
    bool u1 = node(e1).kind == NodeKind::Union, u2 = node(e2).kind == NodeKind::Union;
    if (!u1 && !u2) return raw_union(n1, n2);
    if (u1 && u2) {
        auto [g3, e3] = get_gadget(node(e1).left);
        auto [g4, e4] = get_gadget(node(e2).left);
        auto [g5, e5] = get_gadget(node(e1).right);
        auto [g6, e6] = get_gadget(node(e2).right);
        NodeId a = wrap(merge_gadgets(g1, g3, dir_), e3);
        NodeId b = wrap(merge_gadgets(g2, g4, dir_), e4);
        NodeId c = wrap(merge_gadgets(g1, g5, dir_), e5);
        NodeId d = wrap(merge_gadgets(g2, g6, dir_), e6);
        if (!is_empty(c) && !is_empty(d) && node(c).maxkey < node(d).maxkey) std::swap(c, d);
        return union_parts({a, b, c, d});
    }
    if (u1) {
        std::swap(g1, g2);
        std::swap(e1, e2);
        std::swap(n1, n2);
    }
    auto [g3, e3] = get_gadget(node(e2).left);
    auto [g4, e4] = get_gadget(node(e2).right);
    NodeId b = wrap(merge_gadgets(g2, g3, dir_), e3);
    NodeId c = wrap(merge_gadgets(g2, g4, dir_), e4);
    return union_parts({n1, b, c});
}

NodeId Caecs::flatten(NodeId n) {
    if (is_empty(n) || node(n).odepth <= 2) return n;
    std::vector<NodeId> parts;
    Gadget acc;
    NodeId cur = n;
    for (;;) {
        auto [g, exit] = get_gadget(cur);
        acc = merge_gadgets(acc, g, dir_);
        if (acc.empty) break;
        if (node(exit).kind != NodeKind::Union) {
            parts.push_back(wrap(acc, exit));
            break;
        }
        auto [gr, er] = get_gadget(node(exit).right);
        parts.push_back(wrap(merge_gadgets(acc, gr, dir_), er));
        cur = node(exit).left;
    }
    // The last part hangs off the spine's output node and carries the largest key.
    std::vector<NodeId> live;
    for (NodeId p : parts)
        if (!is_empty(p)) live.push_back(p);
    if (live.empty()) return empty_node(n);
    bool has_head = !parts.empty() && live.back() == parts.back() && node(parts.back()).odepth <= 2;
    auto first = live.begin();
    if (has_head) {
        std::rotate(live.begin(), live.end() - 1, live.end());
        ++first;
    }
    std::stable_sort(first, live.end(), [&](NodeId x, NodeId y) { return node(x).maxkey > node(y).maxkey; });
    return union_parts(live);
}

std::optional<std::string> Caecs::check_invariants(NodeId root, int bound) const {
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> todo{root};
    auto is_gadget = [&](NodeId n) {
        auto k = node(n).kind;
        return k == NodeKind::Reset || k == NodeKind::Check;
    };
    while (!todo.empty()) {
        NodeId n = todo.back();
        todo.pop_back();
        if (!seen.insert(n).second) continue;
        const auto& x = node(n);
        std::string at = "node " + std::to_string(n) + ": ";
        if (x.odepth > bound) return at + "odepth " + std::to_string(x.odepth) + " exceeds " + std::to_string(bound);
        if (x.kind == NodeKind::Empty) {
            if (n == root) continue;
            return at + "empty node below a root";
        }
        if (x.left != kNoNode && x.kind != NodeKind::Empty && is_empty(x.left)) return at + "empty left child";
        switch (x.kind) {
            case NodeKind::Union:
                if (is_empty(x.right)) return at + "empty right child";
                if (node(x.left).maxkey < node(x.right).maxkey) return at + "union is not time-ordered";
                break;
            case NodeKind::Check:
                if (is_gadget(x.left)) return at + "gadgets in series below a check";
                if (node(x.left).maxkey < threshold(x.t, x.c)) return at + "check without a passing entry";
                break;
            case NodeKind::Reset:
                if (node(x.left).kind == NodeKind::Reset) return at + "gadgets in series below a reset";
                if (node(x.left).kind == NodeKind::Check && is_gadget(node(x.left).left))
                    return at + "gadgets in series below a composed gadget";
                break;
            default: break;
        }
        if (x.left != kNoNode) todo.push_back(x.left);
        if (x.right != kNoNode) todo.push_back(x.right);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Union-lists

UnionList ul_new(NodeId u0) { return {u0}; }

void ul_insert(Caecs& s, UnionList& ul, NodeId u) {
    if (ul.empty()) {
        ul.push_back(u);
        return;
    }
    const Rational& k = s.node(u).maxkey;
    if (k > s.node(ul[0]).maxkey) {
        // New head; the old head may tie with its successor, which the tail forbids.
        u = s.flatten(u);
        if (ul.size() > 1 && s.node(ul[0]).maxkey == s.node(ul[1]).maxkey) {
            ul[1] = s.union_of(ul[0], ul[1]);
            ul[0] = u;
        } else {
            ul.insert(ul.begin(), u);
        }
        return;
    }
    std::size_t i = 1;
    while (i < ul.size() && s.node(ul[i]).maxkey > k) ++i;
    if (i < ul.size() && s.node(ul[i]).maxkey == k)
        ul[i] = s.union_of(ul[i], u);
    else
        ul.insert(ul.begin() + static_cast<std::ptrdiff_t>(i), u);
}

NodeId ul_merge(Caecs& s, const UnionList& ul) {
    if (ul.empty()) throw std::logic_error("merge of an empty union-list");
    NodeId acc = ul.back();
    for (std::size_t k = ul.size() - 1; k-- > 0;) acc = s.raw_union(ul[k], acc);
    return acc;
}

UnionList ul_clock_check(Caecs& s, const UnionList& ul, const Rational& t0, const Rational& c) {
    UnionList out;
    for (NodeId u : ul) {
        NodeId v = s.add_clock_check(u, t0, c);
        if (s.is_empty(v)) break;  // keys decrease along the list
        out.push_back(v);
    }
    if (!out.empty()) out[0] = s.flatten(out[0]);
    return out;
}

UnionList ul_reset(Caecs& s, const UnionList& ul, const Rational& t) {
    UnionList out;
    if (ul.empty()) return out;
    out.push_back(s.add_reset(ul[0], t));
    if (ul.size() > 1) {
        NodeId acc = s.add_reset(ul[1], t);
        for (std::size_t k = 2; k < ul.size(); ++k) acc = s.union_of(acc, s.add_reset(ul[k], t));
        out.push_back(acc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration

Enumerator::Enumerator(const Caecs& s, NodeId root, std::size_t end) : s_(s), end_(end) {
    if (!s_.is_empty(root)) stack_.push_back({root, std::nullopt, 0});
}

bool Enumerator::next(ComplexEvent& out) {
    while (!stack_.empty()) {
        Frame f = stack_.back();
        stack_.pop_back();
        path_.resize(f.path_len);
        NodeId n = f.node;
        std::optional<Rational> bound = f.bound;
        bool dead = false;
        while (!dead) {
            ++stats_.steps;
            ++since_last_;
            const auto& x = s_.node(n);
            switch (x.kind) {
                case NodeKind::Bottom: {
                    if (bound && s_.key(x.t) < *bound) {
                        dead = true;
                        break;
                    }
                    IndexedView iota;
                    for (const auto& [p, l] : path_) iota[p] = s_.label(l);
                    out = from_indexed(x.pos, end_, iota);
                    ++stats_.outputs;
                    double ratio = static_cast<double>(since_last_) / static_cast<double>(iota.size() + 1);
                    stats_.max_delay_ratio = std::max(stats_.max_delay_ratio, ratio);
                    since_last_ = 0;
                    return true;
                }
                case NodeKind::Extended:
                    path_.emplace_back(x.pos, x.label);
                    n = x.left;
                    break;
                case NodeKind::Union:
                    if (!bound || s_.node(x.right).maxkey >= *bound) stack_.push_back({x.right, bound, path_.size()});
                    n = x.left;
                    break;
                case NodeKind::Reset:
                    if (bound && s_.key(x.t) < *bound) {
                        dead = true;
                        break;
                    }
                    bound.reset();
                    n = x.left;
                    break;
                case NodeKind::Check: {
                    Rational th = s_.threshold(x.t, x.c);
                    if (!bound || *bound < th) bound = th;
                    if (s_.node(x.left).maxkey < *bound) {
                        dead = true;
                        break;
                    }
                    n = x.left;
                    break;
                }
                case NodeKind::Empty: dead = true; break;
            }
        }
    }
    return false;
}

std::vector<ComplexEvent> enumerate_all(const Caecs& s, NodeId root, std::size_t end) {
    std::vector<ComplexEvent> out;
    Enumerator en(s, root, end);
    ComplexEvent c;
    while (en.next(c)) out.push_back(c);
    return out;
}

std::set<OpenEvent> aux_semantics(const Caecs& s, NodeId n) {
    const auto& x = s.node(n);
    std::set<OpenEvent> out;
    switch (x.kind) {
        case NodeKind::Bottom: out.insert({x.pos, {}, x.t}); break;
        case NodeKind::Extended:
            for (auto e : aux_semantics(s, x.left)) {
                e.iota[x.pos] = s.label(x.label);
                out.insert(std::move(e));
            }
            break;
        case NodeKind::Union:
            out = aux_semantics(s, x.left);
            for (auto& e : aux_semantics(s, x.right)) out.insert(e);
            break;
        case NodeKind::Reset:
            for (auto e : aux_semantics(s, x.left)) {
                e.reset = x.t;
                out.insert(std::move(e));
            }
            break;
        case NodeKind::Check:
            for (auto& e : aux_semantics(s, x.left))
                if (s.key(e.reset) >= s.threshold(x.t, x.c)) out.insert(e);
            break;
        case NodeKind::Empty: break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluator

namespace {

// Collapses a conjunction of same-direction atoms to its tightest bound.
bool collect_bound(const Guard& g, Cmp want, std::optional<Rational>& bound) {
    switch (g.kind()) {
        case Guard::Kind::True: return true;
        case Guard::Kind::Atom:
            if (g.cmp() != want) return false;
            if (!bound || (want == Cmp::Le ? g.constant() < *bound : g.constant() > *bound)) bound = g.constant();
            return true;
        case Guard::Kind::And: return collect_bound(g.left(), want, bound) && collect_bound(g.right(), want, bound);
        default: return false;
    }
}

}  // namespace

StreamingEvaluator::StreamingEvaluator(const TimedCea& a) : a_(a) {
    ClockSet used;
    for (const auto& t : a.delta) {
        auto c = t.guard.clocks();
        used.insert(c.begin(), c.end());
        used.insert(t.resets.begin(), t.resets.end());
    }
    if (used.size() > 1) throw NotEvaluable("the automaton uses " + std::to_string(used.size()) + " clocks; one is supported");
    Monotonicity m = is_monotonic(a);
    if (m == Monotonicity::No) throw NotEvaluable("guards are not all of the form z <= c (or all z >= c)");
    if (auto v = determinism_violation(a))
        throw NotEvaluable("the automaton is not deterministic: " + a.delta[static_cast<std::size_t>(v->first)].str() +
                           " overlaps " + a.delta[static_cast<std::size_t>(v->second)].str());
    if (auto v = clock_use_violation(a))
        throw NotEvaluable("a guard may read the clock before any reset: " + a.delta[static_cast<std::size_t>(*v)].str());
    Direction dir = m == Monotonicity::Ge ? Direction::Ge : Direction::Le;
    caecs_ = Caecs(dir);
    out_.resize(static_cast<std::size_t>(a.num_states));
    for (const auto& t : a.delta) {
        Trans tr{t.from, t.to, t.pred, std::nullopt, t.label, !t.resets.empty()};
        collect_bound(t.guard, dir == Direction::Le ? Cmp::Le : Cmp::Ge, tr.bound);
        out_[static_cast<std::size_t>(t.from)].push_back(std::move(tr));
    }
}

void StreamingEvaluator::add(std::map<State, UnionList>& next, State q, const UnionList& ul) {
    auto it = next.find(q);
    if (it == next.end())
        next.emplace(q, ul);
    else
        ul_insert(caecs_, it->second, ul_merge(caecs_, ul));
}

void StreamingEvaluator::exec(State p, const UnionList& ul, const Event& e, const Rational& t, bool with_reset,
                              std::map<State, UnionList>& next) {
    std::optional<NodeId> merged;
    for (const auto& tr : out_[static_cast<std::size_t>(p)]) {
        if (tr.resets != with_reset || !sat(e, tr.pred)) continue;
        if (!tr.label.empty()) {
            if (!merged) merged = ul_merge(caecs_, ul);
            NodeId n = caecs_.extend(*merged, pos_, tr.label);
            if (tr.bound) n = caecs_.add_clock_check(n, t, *tr.bound);
            if (tr.resets && !caecs_.is_empty(n)) n = caecs_.add_reset(n, t);
            if (!caecs_.is_empty(n)) add(next, tr.to, ul_new(n));
        } else {
            UnionList out = ul;
            if (tr.bound) out = ul_clock_check(caecs_, out, t, *tr.bound);
            if (tr.resets && !out.empty()) out = ul_reset(caecs_, out, t);
            if (!out.empty()) add(next, tr.to, out);
        }
    }
}

void StreamingEvaluator::push(const Event& e, const Rational& ts) {
    if (last_ts_ && !(ts > *last_ts_))
        throw std::invalid_argument("timestamp " + ts.str() + " does not exceed the previous " + last_ts_->str());
    last_ts_ = ts;
    ++pos_;
    ++stats_.events;
    UnionList fresh = ul_new(caecs_.new_bottom(pos_, ts));

    std::vector<State> keys;
    for (const auto& [q, _] : table_) keys.push_back(q);
    std::stable_sort(keys.begin(), keys.end(), [&](State x, State y) {
        return caecs_.node(table_.at(x)[0]).maxkey > caecs_.node(table_.at(y)[0]).maxkey;
    });

    std::map<State, UnionList> next;
    exec(a_.initial, fresh, e, ts, true, next);
    for (State q : keys) exec(q, table_.at(q), e, ts, true, next);
    exec(a_.initial, fresh, e, ts, false, next);
    for (State q : keys) exec(q, table_.at(q), e, ts, false, next);
    for (const auto& [q, ul] : next) stats_.max_union_list = std::max(stats_.max_union_list, ul.size());
    table_ = std::move(next);
    stats_.max_odepth = caecs_.max_odepth();
    stats_.nodes = caecs_.size();
}

void StreamingEvaluator::enumerate(const std::function<void(const ComplexEvent&)>& sink) {
    last_enum_ = EnumStats{};
    for (const auto& [q, ul] : table_) {
        if (!a_.is_final(q)) continue;
        NodeId root = ul_merge(caecs_, ul);
        Enumerator en(caecs_, root, pos_);
        ComplexEvent c;
        while (en.next(c)) sink(c);
        const EnumStats& es = en.stats();
        last_enum_.outputs += es.outputs;
        last_enum_.steps += es.steps;
        last_enum_.max_delay_ratio = std::max(last_enum_.max_delay_ratio, es.max_delay_ratio);
        stats_.max_delay_ratio = std::max(stats_.max_delay_ratio, es.max_delay_ratio);
    }
    stats_.max_odepth = caecs_.max_odepth();
}

std::vector<ComplexEvent> StreamingEvaluator::results() {
    std::vector<ComplexEvent> out;
    enumerate([&](const ComplexEvent& c) { out.push_back(c); });
    return out;
}

std::vector<CeSet> evaluate_stream(const TimedCea& a, const TimedStream& s) {
    StreamingEvaluator ev(a);
    std::vector<CeSet> out(s.size() + 1);
    for (std::size_t j = 1; j <= s.size(); ++j) {
        ev.push(s.event(j), s.ts(j));
        for (auto& c : ev.results()) out[j].insert(std::move(c));
    }
    return out;
}

}  // namespace tcer
