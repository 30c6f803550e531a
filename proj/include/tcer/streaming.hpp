#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tcer/cea.hpp"

namespace tcer {

// Comparison direction of the single clock's guards.
enum class Direction { Le, Ge };

// ---------------------------------------------------------------------------
// Gadgets: short reset / clock-check chains, outermost operation first.

struct GadgetOp {
    enum class Kind { Reset, Check };
    Kind kind;
    Rational t;  // reset time, or creation time t0 of a check
    Rational c;  // check bound
    static GadgetOp reset(Rational t) { return {Kind::Reset, t, Rational(0)}; }
    static GadgetOp check(Rational t0, Rational c) { return {Kind::Check, t0, c}; }
    bool operator==(const GadgetOp& o) const { return kind == o.kind && t == o.t && c == o.c; }
};

enum class GadgetForm { Void, Reset, ClockCheck, Empty, Composed };
const char* gadget_form_name(GadgetForm f);

struct Gadget {
    bool empty = false;
    std::vector<GadgetOp> ops;  // at most [reset, check]
    GadgetForm form() const;
    std::string str() const;
};

// g1 placed above g2. Empty when the two checks cannot both hold for a reset
// time no later than the earliest creation time involved.
Gadget merge_gadgets(const Gadget& g1, const Gadget& g2, Direction dir);

// Clock component after passing a reset time through g (inner op first);
// nullopt when a check filters it out.
std::optional<Rational> apply_gadget(const Gadget& g, const Rational& reset_time, Direction dir);

// ---------------------------------------------------------------------------
// The compact output structure. Nodes live in an append-only arena.

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

enum class NodeKind { Bottom, Extended, Union, Reset, Check, Empty };

struct CaecsNode {
    explicit CaecsNode(NodeKind k) : kind(k) {}
    NodeKind kind;
    NodeId left = kNoNode, right = kNoNode;
    std::size_t pos = 0;  // Bottom, Extended
    int label = -1;       // Extended: index into the label table
    Rational t;           // Bottom: timestamp; Reset: reset time; Check: t0
    Rational c;           // Check bound
    Rational maxkey;      // largest clock key among the node's entries
    int odepth = 0;
};

class Caecs {
public:
    explicit Caecs(Direction dir = Direction::Le) : dir_(dir) {}

    Direction direction() const { return dir_; }
    const CaecsNode& node(NodeId n) const { return nodes_[static_cast<std::size_t>(n)]; }
    std::size_t size() const { return nodes_.size(); }
    const VarSet& label(int id) const { return labels_[static_cast<std::size_t>(id)]; }
    bool is_empty(NodeId n) const { return node(n).kind == NodeKind::Empty; }

    // Key of a reset time: t for Le, -t for Ge. Checks keep keys >= threshold.
    Rational key(const Rational& t) const { return dir_ == Direction::Le ? t : -t; }
    Rational threshold(const Rational& t0, const Rational& c) const { return dir_ == Direction::Le ? t0 - c : c - t0; }
    // Reset time with the largest key below n.
    Rational max_reset(NodeId n) const { return key(node(n).maxkey); }

    NodeId new_bottom(std::size_t i, const Rational& t);
    NodeId extend(NodeId n, std::size_t j, const VarSet& label);
    NodeId union_of(NodeId n1, NodeId n2);  // requires equal max_reset
    NodeId add_reset(NodeId n, const Rational& t);
    NodeId add_clock_check(NodeId n, const Rational& t0, const Rational& c);
    NodeId empty_node(NodeId debug_child = kNoNode);

    // Largest gadget starting at n, and the node right below it.
    std::pair<Gadget, NodeId> get_gadget(NodeId n) const;
    // Materializes g above exit; Empty if a check fails on exit's largest key.
    NodeId wrap(const Gadget& g, NodeId exit);

    // Equivalent node whose left spine reaches an output node within two
    // gadget nodes: the spine's unions become a right-leaning, time-ordered chain.
    NodeId flatten(NodeId n);

    int max_odepth() const { return max_odepth_; }

    // Structural invariants below n: time-ordered unions, odepth bound,
    // no stacked gadgets, checks with at least one passing entry.
    std::optional<std::string> check_invariants(NodeId n, int odepth_bound = 11) const;

private:
    friend NodeId ul_merge(Caecs& s, const std::vector<NodeId>& ul);
    NodeId push(CaecsNode n);
    NodeId raw_union(NodeId l, NodeId r);
    NodeId union_parts(const std::vector<NodeId>& parts);  // right-leaning, skips Empty

    Direction dir_;
    std::vector<CaecsNode> nodes_;
    std::vector<VarSet> labels_;
    std::map<VarSet, int> label_ids_;
    int max_odepth_ = 0;
};

// ---------------------------------------------------------------------------
// Union-lists

using UnionList = std::vector<NodeId>;

UnionList ul_new(NodeId u0);
void ul_insert(Caecs& s, UnionList& ul, NodeId u);
NodeId ul_merge(Caecs& s, const UnionList& ul);
UnionList ul_clock_check(Caecs& s, const UnionList& ul, const Rational& t0, const Rational& c);
UnionList ul_reset(Caecs& s, const UnionList& ul, const Rational& t);

// ---------------------------------------------------------------------------
// Enumeration

struct EnumStats {
    std::size_t outputs = 0;
    std::size_t steps = 0;
    double max_delay_ratio = 0;  // max over outputs of steps since the previous output / |output|
};

class Enumerator {
public:
    Enumerator(const Caecs& s, NodeId root, std::size_t end);
    // Advances to the next complex event; false at the end.
    bool next(ComplexEvent& out);
    const EnumStats& stats() const { return stats_; }

private:
    struct Frame {
        NodeId node;
        std::optional<Rational> bound;
        std::size_t path_len;
    };
    const Caecs& s_;
    std::size_t end_;
    std::vector<Frame> stack_;
    std::vector<std::pair<std::size_t, int>> path_;
    EnumStats stats_;
    std::size_t since_last_ = 0;
};

std::vector<ComplexEvent> enumerate_all(const Caecs& s, NodeId root, std::size_t end);

// Auxiliary semantics of a node: (start, index view, reset time) triples.
struct OpenEvent {
    std::size_t start;
    IndexedView iota;
    Rational reset;
    bool operator<(const OpenEvent& o) const {
        return std::tie(start, iota, reset) < std::tie(o.start, o.iota, o.reset);
    }
};
std::set<OpenEvent> aux_semantics(const Caecs& s, NodeId n);

// ---------------------------------------------------------------------------
// Streaming evaluation

struct NotEvaluable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EvalStats {
    std::size_t events = 0;
    std::size_t max_union_list = 0;
    int max_odepth = 0;
    std::size_t nodes = 0;
    double max_delay_ratio = 0;
};

class StreamingEvaluator {
public:
    // Accepts deterministic, single-clock, monotonic automata whose clock is
    // reset on every path before it is read. Throws NotEvaluable otherwise.
    explicit StreamingEvaluator(const TimedCea& a);

    Direction direction() const { return caecs_.direction(); }

    // Update phase for the next event. Throws std::invalid_argument when the
    // timestamp does not increase.
    void push(const Event& e, const Rational& ts);

    // Enumeration phase for the current position.
    void enumerate(const std::function<void(const ComplexEvent&)>& sink);
    std::vector<ComplexEvent> results();

    std::size_t position() const { return pos_; }
    const EvalStats& stats() const { return stats_; }
    // Outputs, steps and max delay ratio of the latest enumerate() call.
    const EnumStats& last_enumeration() const { return last_enum_; }
    // Union-list of each active state, in key order.
    const std::map<State, UnionList>& table() const { return table_; }
    const Caecs& caecs() const { return caecs_; }

private:
    struct Trans {
        State from, to;
        Predicate pred;
        std::optional<Rational> bound;  // collapsed single-clock guard
        VarSet label;
        bool resets;
    };
    void exec(State p, const UnionList& ul, const Event& e, const Rational& t, bool with_reset,
              std::map<State, UnionList>& next);
    // First list for q is stored; later ones are merged and inserted.
    void add(std::map<State, UnionList>& next, State q, const UnionList& ul);

    TimedCea a_;
    Caecs caecs_;
    std::vector<std::vector<Trans>> out_;
    std::map<State, UnionList> table_;
    std::size_t pos_ = 0;
    std::optional<Rational> last_ts_;
    EvalStats stats_;
    EnumStats last_enum_;
};

// All outputs by end position (index 0 unused).
std::vector<CeSet> evaluate_stream(const TimedCea& a, const TimedStream& s);

}  // namespace tcer
