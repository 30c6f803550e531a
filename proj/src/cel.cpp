#include "tcer/cel.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <vector>

namespace tcer {

const char* cel_kind_name(CelKind k) {
    switch (k) {
        case CelKind::EventType: return "EventType";
        case CelKind::As: return "As";
        case CelKind::Filter: return "Filter";
        case CelKind::Or: return "Or";
        case CelKind::And: return "And";
        case CelKind::Seq: return "Seq";
        case CelKind::ContigSeq: return "ContigSeq";
        case CelKind::Plus: return "Plus";
        case CelKind::ContigPlus: return "ContigPlus";
        case CelKind::Project: return "Project";
        case CelKind::Within: return "Within";
        case CelKind::TimedSeq: return "TimedSeq";
        case CelKind::TimedContigSeq: return "TimedContigSeq";
        case CelKind::TimedIter: return "TimedIter";
        case CelKind::TimedContigIter: return "TimedContigIter";
    }
    return "?";
}

namespace cel {
namespace {
Cel make(CelKind k, Cel a = nullptr, Cel b = nullptr) {
    auto n = std::make_shared<CelNode>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}
Cel make_timed(CelKind k, Cel a, Interval i, Cel b = nullptr) {
    if (!i.valid()) throw std::invalid_argument("interval " + i.str() + " has low > high");
    auto n = std::make_shared<CelNode>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    n->interval = i;
    return n;
}
}  // namespace

Cel event_type(std::string type) {
    auto n = std::make_shared<CelNode>();
    n->kind = CelKind::EventType;
    n->name = std::move(type);
    return n;
}
Cel as(Cel f, std::string var) {
    auto n = std::make_shared<CelNode>();
    n->kind = CelKind::As;
    n->name = std::move(var);
    n->lhs = std::move(f);
    return n;
}
Cel filter(Cel f, std::string var, Predicate p) {
    auto n = std::make_shared<CelNode>();
    n->kind = CelKind::Filter;
    n->name = std::move(var);
    n->pred = std::move(p);
    n->lhs = std::move(f);
    return n;
}
Cel disj(Cel a, Cel b) { return make(CelKind::Or, std::move(a), std::move(b)); }
Cel conj(Cel a, Cel b) { return make(CelKind::And, std::move(a), std::move(b)); }
Cel seq(Cel a, Cel b) { return make(CelKind::Seq, std::move(a), std::move(b)); }
Cel contig(Cel a, Cel b) { return make(CelKind::ContigSeq, std::move(a), std::move(b)); }
Cel plus(Cel f) { return make(CelKind::Plus, std::move(f)); }
Cel contig_plus(Cel f) { return make(CelKind::ContigPlus, std::move(f)); }
Cel project(VarSet vars, Cel f) {
    auto n = std::make_shared<CelNode>();
    n->kind = CelKind::Project;
    n->vars = std::move(vars);
    n->lhs = std::move(f);
    return n;
}
Cel within(Cel f, Interval i) { return make_timed(CelKind::Within, std::move(f), i); }
Cel timed_seq(Cel a, Interval i, Cel b) { return make_timed(CelKind::TimedSeq, std::move(a), i, std::move(b)); }
Cel timed_contig(Cel a, Interval i, Cel b) {
    return make_timed(CelKind::TimedContigSeq, std::move(a), i, std::move(b));
}
Cel timed_iter(Cel f, Interval i) { return make_timed(CelKind::TimedIter, std::move(f), i); }
Cel timed_contig_iter(Cel f, Interval i) { return make_timed(CelKind::TimedContigIter, std::move(f), i); }
}  // namespace cel

namespace {

bool has_interval(CelKind k) {
    return k == CelKind::Within || k == CelKind::TimedSeq || k == CelKind::TimedContigSeq ||
           k == CelKind::TimedIter || k == CelKind::TimedContigIter;
}

}  // namespace

bool cel_equal(const Cel& a, const Cel& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->name != b->name || a->vars != b->vars) return false;
    if (a->kind == CelKind::Filter && !(a->pred == b->pred)) return false;
    if (has_interval(a->kind) && !(a->interval == b->interval)) return false;
    return cel_equal(a->lhs, b->lhs) && cel_equal(a->rhs, b->rhs);
}

std::size_t cel_depth(const Cel& f) {
    if (!f) return 0;
    return 1 + std::max(cel_depth(f->lhs), cel_depth(f->rhs));
}

VarSet cel_variables(const Cel& f) {
    VarSet out;
    std::function<void(const Cel&)> go = [&](const Cel& n) {
        if (!n) return;
        switch (n->kind) {
            case CelKind::EventType:
            case CelKind::As:
            case CelKind::Filter:
                out.insert(n->name);
                break;
            case CelKind::Project:
                out.insert(n->vars.begin(), n->vars.end());
                break;
            default:
                break;
        }
        go(n->lhs);
        go(n->rhs);
    };
    go(f);
    return out;
}

// ---------------------------------------------------------------------------
// Lexer

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
      line(l),
      column(c) {}

namespace {

enum class Tok {
    Ident, Number, String,
    LParen, RParen, LBracket, RBracket, LBrace, RBrace, Comma,
    Semi, Colon, Plus, OPlus, Minus,
    Lt, Le, Eq, Ge, Gt, Ne,
    Not, AndAnd, OrOr,
    Inf, Pi,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
                ++col;
            }
        }
    };
    auto starts = [&](std::string_view p) { return s.compare(i, p.size(), p) == 0; };

    static const std::vector<std::pair<std::string_view, Tok>> symbols = {
        {"(+)", Tok::OPlus}, {"⊕", Tok::OPlus}, {"<=", Tok::Le},     {">=", Tok::Ge},
        {"!=", Tok::Ne},     {"==", Tok::Eq},        {"&&", Tok::AndAnd}, {"||", Tok::OrOr},
        {"≤", Tok::Le}, {"≥", Tok::Ge},    {"≠", Tok::Ne}, {"∞", Tok::Inf},
        {"π", Tok::Pi}, {"∧", Tok::AndAnd}, {"∨", Tok::OrOr}, {"¬", Tok::Not},
        {"(", Tok::LParen},  {")", Tok::RParen},     {"[", Tok::LBracket}, {"]", Tok::RBracket},
        {"{", Tok::LBrace},  {"}", Tok::RBrace},     {",", Tok::Comma},   {";", Tok::Semi},
        {":", Tok::Colon},   {"+", Tok::Plus},       {"-", Tok::Minus},   {"<", Tok::Lt},
        {">", Tok::Gt},      {"=", Tok::Eq},         {"!", Tok::Not},
    };

    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        int l = line, cl = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(c)) {
            std::size_t j = i;
            auto digits = [&] {
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            };
            digits();
            if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                ++j;
                digits();
            } else if (j + 1 < s.size() && s[j] == '/' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                ++j;
                digits();
            }
            out.push_back({Tok::Number, s.substr(i, j - i), l, cl});
            advance(j - i);
            continue;
        }
        if (c == '"' || c == '\'') {
            char q = static_cast<char>(c);
            std::string val;
            advance(1);
            while (true) {
                if (i >= s.size()) throw ParseError("unterminated string", l, cl);
                if (s[i] == q) break;
                if (s[i] == '\\' && i + 1 < s.size()) advance(1);
                val += s[i];
                advance(1);
            }
            advance(1);
            out.push_back({Tok::String, val, l, cl});
            continue;
        }
        bool matched = false;
        for (const auto& [sym, kind] : symbols) {
            if (starts(sym)) {
                out.push_back({kind, std::string(sym), l, cl});
                advance(sym.size());
                matched = true;
                break;
            }
        }
        if (!matched) {
            std::size_t len = 1;
            if (c >= 0xC0) {
                while (i + len < s.size() && (static_cast<unsigned char>(s[i + len]) & 0xC0) == 0x80) ++len;
            }
            throw ParseError("unexpected character '" + s.substr(i, len) + "'", l, cl);
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

bool keyword_is(const Token& t, std::string_view kw) {
    if (t.kind != Tok::Ident || t.text.size() != kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
    return true;
}

bool reserved(const Token& t) {
    for (auto kw : {"AS", "FILTER", "OR", "AND", "WITHIN", "PROJECT"})
        if (keyword_is(t, kw)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    Cel query_eof() {
        Cel f = query();
        expect_end();
        return f;
    }

    Predicate predicate_eof() {
        Predicate p = pred();
        expect_end();
        return p;
    }

    Interval interval_eof() {
        auto i = interval();
        if (!i) fail("expected an interval");
        expect_end();
        return *i;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at(Tok k) const { return peek().kind == k; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + ", got " + got, t.line, t.col);
    }

    void expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        next();
    }

    void expect_end() {
        if (!at(Tok::End)) fail("unexpected trailing input");
    }

    std::string ident(const char* what) {
        if (!at(Tok::Ident) || reserved(peek())) fail(std::string("expected ") + what);
        return next().text;
    }

    Rational number() {
        bool neg = false;
        if (at(Tok::Minus)) {
            next();
            neg = true;
        }
        if (!at(Tok::Number)) fail("expected a number");
        const Token& t = next();
        auto r = Rational::parse(t.text);
        if (!r) throw ParseError("malformed number '" + t.text + "'", t.line, t.col);
        return neg ? -*r : *r;
    }

    static bool cmp_token(Tok k) {
        return k == Tok::Lt || k == Tok::Le || k == Tok::Eq || k == Tok::Ge || k == Tok::Gt || k == Tok::Ne;
    }

    static Cmp to_cmp(Tok k) {
        switch (k) {
            case Tok::Lt: return Cmp::Lt;
            case Tok::Le: return Cmp::Le;
            case Tok::Eq: return Cmp::Eq;
            case Tok::Ge: return Cmp::Ge;
            case Tok::Gt: return Cmp::Gt;
            default: return Cmp::Ne;
        }
    }

    Interval shorthand() {
        const Token& op = next();
        int l = op.line, c = op.col;
        Rational v = number();
        if (v < Rational(0)) throw ParseError("interval bounds must be non-negative", l, c);
        switch (op.kind) {
            case Tok::Le: return Interval::at_most(v);
            case Tok::Lt: return Interval{Rational(0), v, false, true};
            case Tok::Ge: return Interval::at_least(v);
            case Tok::Gt: return Interval{v, std::nullopt, true, true};
            case Tok::Eq: return Interval::closed(v, v);
            default: throw ParseError("'!=' cannot describe an interval", l, c);
        }
    }

    // Returns nullopt when no interval starts here.
    std::optional<Interval> interval() {
        if (cmp_token(peek().kind)) return shorthand();
        bool bracket = at(Tok::LBracket);
        bool paren = at(Tok::LParen) && (peek(1).kind == Tok::Number) && peek(2).kind == Tok::Comma;
        if (bracket && cmp_token(peek(1).kind)) {
            next();
            Interval i = shorthand();
            expect(Tok::RBracket, "']'");
            return i;
        }
        if (!bracket && !paren) return std::nullopt;
        const Token& open = next();
        Interval i;
        i.low_open = open.kind == Tok::LParen;
        i.low = number();
        expect(Tok::Comma, "','");
        if (at(Tok::Inf) || keyword_is(peek(), "INF")) {
            next();
            i.high = std::nullopt;
            i.high_open = true;
            if (!at(Tok::RParen) && !at(Tok::RBracket)) fail("expected ')'");
            next();
        } else {
            i.high = number();
            if (at(Tok::RBracket)) {
                i.high_open = false;
            } else if (at(Tok::RParen)) {
                i.high_open = true;
            } else {
                fail("expected ']' or ')'");
            }
            next();
        }
        if (i.low < Rational(0)) throw ParseError("interval bounds must be non-negative", open.line, open.col);
        if (!i.valid()) throw ParseError("malformed interval: low > high", open.line, open.col);
        return i;
    }

    Interval required_interval() {
        auto i = interval();
        if (!i) fail("expected an interval");
        return *i;
    }

    // query := orExpr (WITHIN interval | FILTER clause | AS X)*
    Cel query() {
        Cel f = or_expr();
        while (true) {
            if (keyword_is(peek(), "WITHIN")) {
                next();
                f = cel::within(f, required_interval());
            } else if (keyword_is(peek(), "FILTER")) {
                next();
                f = filter_clause(f);
            } else if (keyword_is(peek(), "AS")) {
                next();
                f = cel::as(f, ident("a variable name"));
            } else {
                return f;
            }
        }
    }

    Cel or_expr() {
        Cel f = and_expr();
        while (keyword_is(peek(), "OR")) {
            next();
            f = cel::disj(f, and_expr());
        }
        return f;
    }

    Cel and_expr() {
        Cel f = seq_expr();
        while (keyword_is(peek(), "AND")) {
            next();
            f = cel::conj(f, seq_expr());
        }
        return f;
    }

    Cel seq_expr() {
        Cel f = postfix();
        while (at(Tok::Semi) || at(Tok::Colon)) {
            bool contiguous = next().kind == Tok::Colon;
            auto i = interval();
            Cel g = postfix();
            if (i)
                f = contiguous ? cel::timed_contig(f, *i, g) : cel::timed_seq(f, *i, g);
            else
                f = contiguous ? cel::contig(f, g) : cel::seq(f, g);
        }
        return f;
    }

    Cel postfix() {
        Cel f = primary();
        while (true) {
            if (keyword_is(peek(), "AS")) {
                next();
                f = cel::as(f, ident("a variable name"));
            } else if (keyword_is(peek(), "FILTER")) {
                next();
                f = filter_clause(f);
            } else if (at(Tok::Plus)) {
                next();
                auto i = interval();
                f = i ? cel::timed_iter(f, *i) : cel::plus(f);
            } else if (at(Tok::OPlus)) {
                next();
                auto i = interval();
                f = i ? cel::timed_contig_iter(f, *i) : cel::contig_plus(f);
            } else {
                return f;
            }
        }
    }

    Cel primary() {
        if (at(Tok::LParen)) {
            next();
            Cel f = query();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at(Tok::Pi) || keyword_is(peek(), "PROJECT")) {
            next();
            VarSet vars = var_list();
            expect(Tok::LParen, "'(' after the projected variables");
            Cel f = query();
            expect(Tok::RParen, "')'");
            return cel::project(vars, f);
        }
        if (at(Tok::Ident) && !reserved(peek())) return cel::event_type(next().text);
        fail("expected an event type, '(' or PROJECT");
    }

    VarSet var_list() {
        VarSet vars;
        expect(Tok::LBrace, "'{'");
        if (at(Tok::RBrace)) {
            next();
            return vars;
        }
        vars.insert(ident("a variable name"));
        while (at(Tok::Comma)) {
            next();
            vars.insert(ident("a variable name"));
        }
        expect(Tok::RBrace, "'}'");
        return vars;
    }

    Cel filter_atom(Cel f) {
        std::string var = ident("a variable name");
        expect(Tok::LBracket, "'['");
        Predicate p = pred();
        expect(Tok::RBracket, "']'");
        return cel::filter(f, var, p);
    }

    Cel filter_clause(Cel f) {
        if (!at(Tok::LParen)) return filter_atom(f);
        next();
        f = filter_atom(f);
        while (at(Tok::AndAnd) || keyword_is(peek(), "AND")) {
            next();
            f = filter_atom(f);
        }
        expect(Tok::RParen, "')'");
        return f;
    }

    // Predicates: || < && < unary.
    Predicate pred() {
        Predicate p = pred_and();
        while (at(Tok::OrOr)) {
            next();
            p = Predicate::disj(p, pred_and());
        }
        return p;
    }

    Predicate pred_and() {
        Predicate p = pred_unary();
        while (at(Tok::AndAnd)) {
            next();
            p = Predicate::conj(p, pred_unary());
        }
        return p;
    }

    Predicate pred_unary() {
        if (at(Tok::Not)) {
            next();
            return Predicate::negate(pred_unary());
        }
        if (at(Tok::LParen)) {
            next();
            Predicate p = pred();
            expect(Tok::RParen, "')'");
            return p;
        }
        if (keyword_is(peek(), "TRUE")) {
            next();
            return Predicate::always();
        }
        if (keyword_is(peek(), "IS") && peek(1).kind == Tok::Ident) {
            next();
            return Predicate::type_is(next().text);
        }
        if (!at(Tok::Ident)) fail("expected a predicate");
        std::string attr = next().text;
        if (!cmp_token(peek().kind)) fail("expected a comparison operator");
        Cmp cmp = to_cmp(next().kind);
        if (at(Tok::String)) return Predicate::basic(attr, cmp, Value(next().text));
        return Predicate::basic(attr, cmp, Value(number()));
    }
};

}  // namespace

Cel parse_query(const std::string& text) { return Parser(text).query_eof(); }
Predicate parse_predicate(const std::string& text) { return Parser(text).predicate_eof(); }
Interval parse_interval(const std::string& text) { return Parser(text).interval_eof(); }

// ---------------------------------------------------------------------------
// Printer

std::string interval_syntax(const Interval& i) { return i.str(); }

namespace {

// Query syntax for a predicate; not(not a and not b) prints as a || b.
std::string pred_syntax(const Predicate& p) {
    using K = Predicate::Kind;
    switch (p.kind()) {
        case K::True: return "TRUE";
        case K::TypeIs: return "IS " + p.type_name();
        case K::Basic: return p.str();
        case K::And: return "(" + pred_syntax(p.left()) + " && " + pred_syntax(p.right()) + ")";
        case K::Not: {
            const Predicate& a = p.left();
            if (a.kind() == K::And && a.left().kind() == K::Not && a.right().kind() == K::Not)
                return "(" + pred_syntax(a.left().left()) + " || " + pred_syntax(a.right().left()) + ")";
            return "!(" + pred_syntax(a) + ")";
        }
    }
    return "?";
}

}  // namespace

std::string print_query(const Cel& f) {
    switch (f->kind) {
        case CelKind::EventType:
            return f->name;
        case CelKind::As:
            return "(" + print_query(f->lhs) + " AS " + f->name + ")";
        case CelKind::Filter:
            return "(" + print_query(f->lhs) + " FILTER " + f->name + "[" + pred_syntax(f->pred) + "])";
        case CelKind::Or:
            return "(" + print_query(f->lhs) + " OR " + print_query(f->rhs) + ")";
        case CelKind::And:
            return "(" + print_query(f->lhs) + " AND " + print_query(f->rhs) + ")";
        case CelKind::Seq:
            return "(" + print_query(f->lhs) + " ; " + print_query(f->rhs) + ")";
        case CelKind::ContigSeq:
            return "(" + print_query(f->lhs) + " : " + print_query(f->rhs) + ")";
        case CelKind::TimedSeq:
            return "(" + print_query(f->lhs) + " ;" + f->interval.str() + " " + print_query(f->rhs) + ")";
        case CelKind::TimedContigSeq:
            return "(" + print_query(f->lhs) + " :" + f->interval.str() + " " + print_query(f->rhs) + ")";
        case CelKind::Plus:
            return "(" + print_query(f->lhs) + "+)";
        case CelKind::ContigPlus:
            return "(" + print_query(f->lhs) + " (+))";
        case CelKind::TimedIter:
            return "(" + print_query(f->lhs) + "+" + f->interval.str() + ")";
        case CelKind::TimedContigIter:
            return "(" + print_query(f->lhs) + " (+)" + f->interval.str() + ")";
        case CelKind::Within:
            return "(" + print_query(f->lhs) + " WITHIN " + f->interval.str() + ")";
        case CelKind::Project: {
            std::string s = "PROJECT {";
            bool first = true;
            for (const auto& v : f->vars) {
                if (!first) s += ", ";
                first = false;
                s += v;
            }
            return s + "} (" + print_query(f->lhs) + ")";
        }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Classification

const char* cel_class_name(CelClass c) {
    switch (c) {
        case CelClass::Swg: return "swg";
        case CelClass::Simple: return "simple";
        case CelClass::Windowed: return "windowed";
        case CelClass::General: return "general";
    }
    return "?";
}

namespace {

bool any_node(const Cel& f, const std::function<bool(const CelNode&)>& p) {
    if (!f) return false;
    return p(*f) || any_node(f->lhs, p) || any_node(f->rhs, p);
}

bool is_time_op(CelKind k) { return has_interval(k); }

bool windowed_rec(const Cel& f, bool simple, bool standard) {
    if (simple || standard) return true;
    switch (f->kind) {
        case CelKind::As:
        case CelKind::Filter:
        case CelKind::Within: {
            const Cel& g = f->lhs;
            return windowed_rec(g, !any_node(g, [](const CelNode& n) {
                                    return n.kind == CelKind::Project || n.kind == CelKind::Within;
                                }),
                                !any_node(g, [](const CelNode& n) { return is_time_op(n.kind); }));
        }
        case CelKind::Or:
        case CelKind::And: {
            auto sub = [](const Cel& g) {
                return windowed_rec(g, !any_node(g, [](const CelNode& n) {
                                        return n.kind == CelKind::Project || n.kind == CelKind::Within;
                                    }),
                                    !any_node(g, [](const CelNode& n) { return is_time_op(n.kind); }));
            };
            return sub(f->lhs) && sub(f->rhs);
        }
        default:
            return false;
    }
}

bool is_windowed(const Cel& f) {
    bool simple = !any_node(f, [](const CelNode& n) {
        return n.kind == CelKind::Project || n.kind == CelKind::Within;
    });
    bool standard = !any_node(f, [](const CelNode& n) { return is_time_op(n.kind); });
    return windowed_rec(f, simple, standard);
}

bool is_type_union(const Cel& f) {
    if (f->kind == CelKind::EventType) return true;
    return f->kind == CelKind::Or && is_type_union(f->lhs) && is_type_union(f->rhs);
}

// (phi_T AS X) FILTER X[P]
bool is_swg_item(const Cel& f) {
    return f->kind == CelKind::Filter && f->lhs->kind == CelKind::As && f->lhs->name == f->name &&
           is_type_union(f->lhs->lhs);
}

bool is_swg_chain(const Cel& f) {
    if (f->kind == CelKind::TimedSeq) return is_swg_chain(f->lhs) && is_swg_item(f->rhs);
    return is_swg_item(f);
}

}  // namespace

Classification classify(const Cel& f) {
    Classification c;
    c.simple = !any_node(f, [](const CelNode& n) {
        return n.kind == CelKind::Project || n.kind == CelKind::Within;
    });
    c.standard = !any_node(f, [](const CelNode& n) { return is_time_op(n.kind); });
    bool plain = is_windowed(f);
    c.windowed = plain;
    if (!plain && f->kind == CelKind::Project && is_windowed(f->lhs)) {
        c.windowed = true;
        c.outer_projection = true;
    }
    const Interval& w = f->interval;
    c.swg = f->kind == CelKind::Within && w.low == Rational(0) && !w.low_open && (!w.high || !w.high_open) &&
            is_swg_chain(f->lhs);
    if (c.swg)
        c.primary = CelClass::Swg;
    else if (c.simple)
        c.primary = CelClass::Simple;
    else if (c.windowed)
        c.primary = CelClass::Windowed;
    else
        c.primary = CelClass::General;
    return c;
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

class CelOracle {
public:
    CelOracle(const TimedStream& s, const CelOracleOptions& o) : s_(s), opt_(o) {}

    CeSet eval(const Cel& f) {
        CeSet out = eval_node(f);
        if (opt_.max_results && out.size() > opt_.max_results)
            throw OracleLimit("oracle result set exceeds " + std::to_string(opt_.max_results));
        return out;
    }

private:
    const TimedStream& s_;
    const CelOracleOptions& opt_;

    bool gap_ok(const ComplexEvent& c1, const ComplexEvent& c2, bool contiguous, const Interval* gap) const {
        if (contiguous ? c1.end + 1 != c2.start : !(c1.end < c2.start)) return false;
        return !gap || gap->contains(s_.ts(c2.start) - s_.ts(c1.end));
    }

    std::vector<std::vector<const ComplexEvent*>> by_start(const CeSet& set) const {
        std::vector<std::vector<const ComplexEvent*>> idx(s_.size() + 2);
        for (const auto& c : set) idx[c.start].push_back(&c);
        return idx;
    }

    CeSet join(const CeSet& a, const CeSet& b, bool contiguous, const Interval* gap) {
        CeSet out;
        auto idx = by_start(b);
        for (const auto& c1 : a) {
            std::size_t lo = c1.end + 1, hi = contiguous ? c1.end + 1 : s_.size();
            for (std::size_t st = lo; st <= hi && st <= s_.size(); ++st)
                for (const auto* c2 : idx[st])
                    if (gap_ok(c1, *c2, contiguous, gap)) out.insert(union_ce(c1, *c2));
            check(out);
        }
        return out;
    }

    // Least fixed point of R = S u join(S, R), evaluated semi-naively.
    CeSet iterate(const CeSet& base, bool contiguous, const Interval* gap) {
        CeSet all = base;
        CeSet delta = base;
        while (!delta.empty()) {
            CeSet fresh;
            for (const auto& c : join(base, delta, contiguous, gap))
                if (!all.count(c)) fresh.insert(c);
            all.insert(fresh.begin(), fresh.end());
            check(all);
            delta = std::move(fresh);
        }
        return all;
    }

    void check(const CeSet& s) const {
        if (opt_.max_results && s.size() > opt_.max_results)
            throw OracleLimit("oracle result set exceeds " + std::to_string(opt_.max_results));
    }

    CeSet eval_node(const Cel& f) {
        CeSet out;
        switch (f->kind) {
            case CelKind::EventType:
                for (std::size_t k = 1; k <= s_.size(); ++k)
                    if (s_.event(k).type == f->name) out.insert(ComplexEvent{k, k, {{f->name, {k}}}});
                return out;
            case CelKind::As:
                for (auto c : eval(f->lhs)) {
                    std::set<std::size_t> all;
                    for (const auto& [v, idx] : c.binding) all.insert(idx.begin(), idx.end());
                    if (!all.empty()) c.binding[f->name] = all;
                    out.insert(std::move(c));
                }
                return out;
            case CelKind::Filter:
                for (auto& c : eval(f->lhs)) {
                    bool ok = true;
                    for (auto k : c.get(f->name))
                        if (!sat(s_.event(k), f->pred)) {
                            ok = false;
                            break;
                        }
                    if (ok) out.insert(c);
                }
                return out;
            case CelKind::Or: {
                out = eval(f->lhs);
                auto r = eval(f->rhs);
                out.insert(r.begin(), r.end());
                return out;
            }
            case CelKind::And: {
                auto l = eval(f->lhs);
                auto r = eval(f->rhs);
                std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::inserter(out, out.end()));
                return out;
            }
            case CelKind::Seq:
                return join(eval(f->lhs), eval(f->rhs), false, nullptr);
            case CelKind::ContigSeq:
                return join(eval(f->lhs), eval(f->rhs), true, nullptr);
            case CelKind::TimedSeq:
                return join(eval(f->lhs), eval(f->rhs), false, &f->interval);
            case CelKind::TimedContigSeq:
                return join(eval(f->lhs), eval(f->rhs), true, &f->interval);
            case CelKind::Plus:
                return iterate(eval(f->lhs), false, nullptr);
            case CelKind::ContigPlus:
                return iterate(eval(f->lhs), true, nullptr);
            case CelKind::TimedIter:
                return iterate(eval(f->lhs), false, &f->interval);
            case CelKind::TimedContigIter:
                return iterate(eval(f->lhs), true, &f->interval);
            case CelKind::Project:
                for (const auto& c : eval(f->lhs)) out.insert(project_ce(c, f->vars));
                return out;
            case CelKind::Within:
                for (const auto& c : eval(f->lhs))
                    if (f->interval.contains(s_.ts(c.end) - s_.ts(c.start))) out.insert(c);
                return out;
        }
        return out;
    }
};

}  // namespace

CeSet eval_cel_oracle(const Cel& f, const TimedStream& s, const CelOracleOptions& opt) {
    if (s.size() > opt.max_stream)
        throw OracleLimit("stream of length " + std::to_string(s.size()) + " exceeds the oracle cap of " +
                          std::to_string(opt.max_stream));
    return CelOracle(s, opt).eval(f);
}

}  // namespace tcer
