#include "tcer/io.hpp"

#include <fstream>
#include <sstream>

#include "tcer/compiler.hpp"
#include "tcer/determinizer.hpp"
#include "tcer/streaming.hpp"

namespace tcer {

InputError::InputError(const std::string& what, std::size_t line_no)
    : std::runtime_error(line_no ? "line " + std::to_string(line_no) + ": " + what : what), line(line_no) {}

Cmp cmp_from_str(const std::string& s) {
    if (s == "<") return Cmp::Lt;
    if (s == "<=") return Cmp::Le;
    if (s == "=" || s == "==") return Cmp::Eq;
    if (s == ">=") return Cmp::Ge;
    if (s == ">") return Cmp::Gt;
    if (s == "!=") return Cmp::Ne;
    throw InputError("unknown comparison '" + s + "'");
}

namespace {

Rational rational_from_json(const Json& j, const char* what) {
    std::optional<Rational> r;
    if (j.is_string())
        r = Rational::parse(j.get<std::string>());
    else if (j.is_number_integer())
        r = Rational(j.get<std::int64_t>());
    else if (j.is_number_float())
        r = Rational::parse(j.dump());
    if (!r) throw InputError(std::string("bad ") + what + ": " + j.dump());
    return *r;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "' in " + j.dump());
    return j.at(key);
}

std::string rational_text(const Rational& r) { return r.decimal(); }

template <class Set>
Json string_array(const Set& s) {
    Json a = Json::array();
    for (const auto& x : s) a.push_back(x);
    return a;
}

template <class Set>
Set string_set(const Json& j, const char* what) {
    Set s;
    if (j.is_null()) return s;
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
    for (const auto& x : j) s.insert(x.get<std::string>());
    return s;
}

}  // namespace

Json value_to_json(const Value& v) {
    if (auto r = std::get_if<Rational>(&v)) return {{"num", rational_text(*r)}};
    return {{"str", std::get<std::string>(v)}};
}

Value value_from_json(const Json& j) {
    if (j.is_object() && j.contains("num")) return rational_from_json(j.at("num"), "number");
    if (j.is_object() && j.contains("str")) return j.at("str").get<std::string>();
    if (j.is_number()) return rational_from_json(j, "number");
    if (j.is_string()) return j.get<std::string>();
    throw InputError("bad attribute value: " + j.dump());
}

Json predicate_to_json(const Predicate& p) {
    switch (p.kind()) {
        case Predicate::Kind::True: return {{"true", true}};
        case Predicate::Kind::Basic:
            return {{"basic", {{"attr", p.attr()}, {"cmp", cmp_str(p.cmp())}, {"value", value_to_json(p.constant())}}}};
        case Predicate::Kind::TypeIs: return {{"type", p.type_name()}};
        case Predicate::Kind::And: return {{"and", {predicate_to_json(p.left()), predicate_to_json(p.right())}}};
        case Predicate::Kind::Not: return {{"not", predicate_to_json(p.left())}};
    }
    return nullptr;
}

Predicate predicate_from_json(const Json& j) {
    if (j.is_boolean() && j.get<bool>()) return Predicate::always();
    if (!j.is_object() || j.size() != 1) throw InputError("bad predicate: " + j.dump());
    if (j.contains("true")) return Predicate::always();
    if (j.contains("basic")) {
        const Json& b = j.at("basic");
        return Predicate::basic(field(b, "attr").get<std::string>(), cmp_from_str(field(b, "cmp").get<std::string>()),
                                value_from_json(field(b, "value")));
    }
    if (j.contains("type")) return Predicate::type_is(j.at("type").get<std::string>());
    if (j.contains("and")) {
        const Json& a = j.at("and");
        if (!a.is_array() || a.size() != 2) throw InputError("'and' takes two predicates: " + j.dump());
        return Predicate::conj(predicate_from_json(a[0]), predicate_from_json(a[1]));
    }
    if (j.contains("not")) return Predicate::negate(predicate_from_json(j.at("not")));
    throw InputError("bad predicate: " + j.dump());
}

Json guard_to_json(const Guard& g) {
    switch (g.kind()) {
        case Guard::Kind::True: return true;
        case Guard::Kind::False: return false;
        case Guard::Kind::Atom:
            return {{"clock", g.clock()}, {"cmp", cmp_str(g.cmp())}, {"value", rational_text(g.constant())}};
        case Guard::Kind::And: return {{"and", {guard_to_json(g.left()), guard_to_json(g.right())}}};
        case Guard::Kind::Or: return {{"or", {guard_to_json(g.left()), guard_to_json(g.right())}}};
    }
    return nullptr;
}

Guard guard_from_json(const Json& j) {
    if (j.is_null()) return Guard::always();
    if (j.is_boolean()) return j.get<bool>() ? Guard::always() : Guard::never();
    if (!j.is_object()) throw InputError("bad guard: " + j.dump());
    for (const char* op : {"and", "or"}) {
        if (!j.contains(op)) continue;
        const Json& a = j.at(op);
        if (!a.is_array() || a.size() != 2) throw InputError(std::string("'") + op + "' takes two guards: " + j.dump());
        Guard l = guard_from_json(a[0]), r = guard_from_json(a[1]);
        return op[0] == 'a' ? Guard::conj(l, r) : Guard::disj(l, r);
    }
    Cmp c = cmp_from_str(field(j, "cmp").get<std::string>());
    if (c == Cmp::Ne) throw InputError("clock conditions cannot use !=");
    return Guard::atom(field(j, "clock").get<std::string>(), c, rational_from_json(field(j, "value"), "clock constant"));
}

Json automaton_to_json(const TimedCea& a) {
    Json states = Json::array();
    for (State q = 0; q < a.num_states; ++q) states.push_back(a.state_name(q));
    Json trans = Json::array();
    for (const auto& t : a.delta) {
        trans.push_back({{"from", t.from},
                         {"to", t.to},
                         {"pred", predicate_to_json(t.pred)},
                         {"guard", guard_to_json(t.guard)},
                         {"label", string_array(t.label)},
                         {"resets", string_array(t.resets)}});
    }
    return {{"states", states},
            {"initial", a.initial},
            {"finals", a.finals},
            {"clocks", string_array(a.clocks)},
            {"vars", string_array(a.vars)},
            {"transitions", trans}};
}

TimedCea automaton_from_json(const Json& j) {
    try {
        TimedCea a;
        const Json& states = field(j, "states");
        if (states.is_number_integer()) {
            for (int q = 0; q < states.get<int>(); ++q) a.add_state();
        } else {
            for (const auto& s : states) a.add_state(s.get<std::string>());
        }
        auto check_state = [&](const Json& s) {
            int q = s.get<int>();
            if (q < 0 || q >= a.num_states) throw InputError("state " + std::to_string(q) + " out of range");
            return q;
        };
        a.initial = check_state(field(j, "initial"));
        for (const auto& f : field(j, "finals")) a.finals.insert(check_state(f));
        for (const auto& t : field(j, "transitions")) {
            Transition tr;
            tr.from = check_state(field(t, "from"));
            tr.to = check_state(field(t, "to"));
            tr.pred = t.contains("pred") ? predicate_from_json(t.at("pred")) : Predicate::always();
            tr.guard = t.contains("guard") ? guard_from_json(t.at("guard")) : Guard::always();
            if (t.contains("label")) tr.label = string_set<VarSet>(t.at("label"), "label");
            if (t.contains("resets")) tr.resets = string_set<ClockSet>(t.at("resets"), "resets");
            a.add(std::move(tr));
        }
        if (j.contains("clocks"))
            for (const auto& z : string_set<ClockSet>(j.at("clocks"), "clocks")) a.clocks.insert(z);
        if (j.contains("vars"))
            for (const auto& v : string_set<VarSet>(j.at("vars"), "vars")) a.vars.insert(v);
        return a;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed automaton: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// ---------------------------------------------------------------------------

Rational parse_timestamp(const Json& j) {
    Rational t = rational_from_json(j, "timestamp");
    if (t < Rational(0)) throw InputError("negative timestamp " + t.decimal());
    return t;
}

TimedEvent parse_event_line(const std::string& line, std::size_t line_no) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    try {
        if (!j.is_object()) throw InputError("expected an object");
        TimedEvent te;
        te.event.type = field(j, "type").get<std::string>();
        if (j.contains("attrs")) {
            const Json& attrs = j.at("attrs");
            if (!attrs.is_object()) throw InputError("'attrs' must be an object");
            for (auto it = attrs.begin(); it != attrs.end(); ++it) te.event.attrs[it.key()] = value_from_json(it.value());
        }
        te.ts = parse_timestamp(field(j, "ts"));
        return te;
    } catch (const InputError& e) {
        throw InputError(e.what(), line_no);
    } catch (const Json::exception& e) {
        throw InputError(e.what(), line_no);
    }
}

std::string event_to_jsonl(const Event& e, const Rational& ts) {
    Json attrs = Json::object();
    for (const auto& [k, v] : e.attrs) {
        if (auto r = std::get_if<Rational>(&v)) {
            if (r->is_integer())
                attrs[k] = r->floor();
            else
                attrs[k] = {{"num", r->decimal()}};
        } else {
            attrs[k] = std::get<std::string>(v);
        }
    }
    Json j = {{"type", e.type}, {"attrs", attrs}, {"ts", ts.decimal()}};
    return j.dump();
}

std::optional<TimedEvent> StreamReader::next() {
    std::string text;
    while (std::getline(in_, text)) {
        ++line_;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        TimedEvent te = parse_event_line(text, line_);
        ++count_;
        if (last_ && !(te.ts > *last_))
            throw InputError("timestamp " + te.ts.decimal() + " of event " + std::to_string(count_) +
                                 " does not exceed the previous timestamp " + last_->decimal(),
                             line_);
        last_ = te.ts;
        return te;
    }
    return std::nullopt;
}

TimedStream read_stream(std::istream& in) {
    StreamReader r(in);
    TimedStream s;
    while (auto te = r.next()) s.push(std::move(te->event), te->ts);
    return s;
}

TimedStream read_stream_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_stream(in);
}

// ---------------------------------------------------------------------------

Json ce_to_json(const ComplexEvent& c, std::size_t pos) {
    Json b = Json::object();
    for (const auto& [v, idx] : c.binding)
        if (!idx.empty()) b[v] = idx;
    return {{"start", c.start}, {"end", c.end}, {"bindings", b}, {"pos", pos}};
}

std::string ce_to_jsonl(const ComplexEvent& c, std::size_t pos) { return ce_to_json(c, pos).dump(); }

namespace {

Predicate ge40(const Predicate& p) {
    switch (p.kind()) {
        case Predicate::Kind::Basic:
            if (p.attr() == "temp" && p.cmp() == Cmp::Gt && p.constant() == Value(Rational(40)))
                return Predicate::basic("temp", Cmp::Ge, Rational(40));
            return p;
        case Predicate::Kind::And: return Predicate::conj(ge40(p.left()), ge40(p.right()));
        case Predicate::Kind::Not: return Predicate::negate(ge40(p.left()));
        default: return p;
    }
}

}  // namespace

Cel with_ge40(const Cel& f) {
    if (!f) return f;
    auto n = std::make_shared<CelNode>(*f);
    n->lhs = with_ge40(f->lhs);
    n->rhs = with_ge40(f->rhs);
    if (n->kind == CelKind::Filter) n->pred = ge40(n->pred);
    return n;
}

TimedCea streaming_automaton(const Cel& f) {
    TimedCea a;
    try {
        a = classify(f).windowed ? compile_windowed(f) : compile(f);
    } catch (const NotWindowed&) {
        a = compile(f);
    }
    drop_dead_resets(a);
    drop_unchecked_clocks(a);
    if (a.clocks.size() > 1)
        throw NotEvaluable("the compiled automaton uses " + std::to_string(a.clocks.size()) +
                           " clocks; streaming supports one");
    TimedCea d;
    try {
        d = determinize(a);
    } catch (const NotSynchronous& e) {
        throw NotEvaluable(std::string("cannot determinize: ") + e.what());
    }
    if (is_monotonic(d) == Monotonicity::No) throw NotEvaluable("the determinized automaton is not monotonic");
    if (auto v = clock_use_violation(d))
        throw NotEvaluable("a guard may read the clock before any reset: " +
                           d.delta[static_cast<std::size_t>(*v)].str());
    return d;
}

}  // namespace tcer
