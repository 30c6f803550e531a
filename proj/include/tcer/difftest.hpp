#pragma once

#include <functional>
#include <optional>
#include <string>

#include "tcer/cel.hpp"
#include "tcer/generate.hpp"

namespace tcer {

enum class Engine { CelOracle, Automaton, Streaming };
const char* engine_name(Engine e);

struct Mismatch {
    Cel formula;
    TimedStream stream;
    Engine engine;          // the engine that disagrees with the CEL oracle
    std::size_t position;   // first end position with different outputs
    CeSet expected, got;
};

// Compares the compiled automaton and, when the formula compiles to a
// streamable automaton, the streaming engine against the CEL oracle.
// Throws OracleLimit when the oracle refuses the input.
std::optional<Mismatch> diff_case(const Cel& f, const TimedStream& s, bool* streamed = nullptr,
                                  std::size_t* outputs = nullptr);

// Greedy shrink: drops events and replaces sub-formulas by their children
// while the disagreement persists.
Mismatch minimize(Mismatch m);

struct DiffOptions {
    std::uint64_t seed = 1;
    std::size_t cases = 200;
    int max_depth = 4;
    std::size_t max_stream = 10;
};

struct DiffReport {
    std::size_t cases = 0;
    std::size_t streamed = 0;   // cases that also ran the streaming engine
    std::size_t redrawn = 0;    // inputs the oracle refused
    std::size_t outputs = 0;    // complex events produced by the oracle
    std::size_t nonempty = 0;   // cases with at least one output
    std::set<CelKind> kinds;    // operators that occurred
    std::optional<Mismatch> mismatch;
};

DiffReport run_diff_test(const DiffOptions& opt);

// Mismatch as JSON text: formula, stream lines, engine, position, both output sets.
std::string mismatch_report(const Mismatch& m);

}  // namespace tcer
