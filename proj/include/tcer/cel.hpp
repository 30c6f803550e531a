#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "tcer/model.hpp"

namespace tcer {

enum class CelKind {
    EventType,
    As,
    Filter,
    Or,
    And,
    Seq,
    ContigSeq,
    Plus,
    ContigPlus,
    Project,
    Within,
    TimedSeq,
    TimedContigSeq,
    TimedIter,
    TimedContigIter,
};

const char* cel_kind_name(CelKind k);

struct CelNode;
using Cel = std::shared_ptr<const CelNode>;

struct CelNode {
    CelKind kind = CelKind::EventType;
    std::string name;    // EventType: type; As, Filter: variable
    Predicate pred;      // Filter
    VarSet vars;         // Project
    Interval interval;   // Within and the timed operators
    Cel lhs, rhs;
};

namespace cel {
Cel event_type(std::string type);
Cel as(Cel f, std::string var);
Cel filter(Cel f, std::string var, Predicate p);
Cel disj(Cel a, Cel b);
Cel conj(Cel a, Cel b);
Cel seq(Cel a, Cel b);
Cel contig(Cel a, Cel b);
Cel plus(Cel f);
Cel contig_plus(Cel f);
Cel project(VarSet vars, Cel f);
Cel within(Cel f, Interval i);
Cel timed_seq(Cel a, Interval i, Cel b);
Cel timed_contig(Cel a, Interval i, Cel b);
Cel timed_iter(Cel f, Interval i);
Cel timed_contig_iter(Cel f, Interval i);
}  // namespace cel

bool cel_equal(const Cel& a, const Cel& b);
std::size_t cel_depth(const Cel& f);
// Event types and variables mentioned anywhere in the formula.
VarSet cel_variables(const Cel& f);

// ---------------------------------------------------------------------------
// Text syntax

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string& msg, int line, int column);
};

Cel parse_query(const std::string& text);
Predicate parse_predicate(const std::string& text);
Interval parse_interval(const std::string& text);

// Canonical, fully parenthesized rendering; parse_query(print_query(f)) == f.
std::string print_query(const Cel& f);
std::string interval_syntax(const Interval& i);

// ---------------------------------------------------------------------------
// Fragments

enum class CelClass { Swg, Simple, Windowed, General };
const char* cel_class_name(CelClass c);

struct Classification {
    bool simple = false;    // no Project, no Within
    bool standard = false;  // no time operator
    bool windowed = false;  // two-level grammar, optionally under one outermost Project
    bool outer_projection = false;  // windowed only thanks to the outermost Project
    bool swg = false;
    CelClass primary = CelClass::General;
};

Classification classify(const Cel& f);

// ---------------------------------------------------------------------------
// Reference semantics

struct OracleLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CelOracleOptions {
    std::size_t max_stream = 14;
    std::size_t max_results = 2'000'000;  // per sub-formula; 0 disables
};

CeSet eval_cel_oracle(const Cel& f, const TimedStream& s, const CelOracleOptions& opt = {});

}  // namespace tcer
