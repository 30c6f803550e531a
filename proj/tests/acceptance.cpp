// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "tcer/bench.hpp"
#include "tcer/compiler.hpp"
#include "tcer/determinizer.hpp"
#include "tcer/difftest.hpp"
#include "tcer/fixtures.hpp"
#include "tcer/generate.hpp"
#include "tcer/io.hpp"
#include "tcer/streaming.hpp"

using namespace tcer;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int prec = 3) {
    std::ostringstream o;
    o.precision(prec);
    o << x;
    return o.str();
}

std::vector<CeSet> cel_by_end(const Cel& f, const TimedStream& s) {
    std::vector<CeSet> out(s.size() + 1);
    for (const auto& c : eval_cel_oracle(f, s)) out[c.end].insert(c);
    return out;
}

// 1. The humidity-run query on the example stream, three engines.
Outcome example_reproduction() {
    auto t0 = Clock::now();
    TimedStream s = sensor_example_stream();
    Cel f = parse_query(kQueryHumRun);
    auto oracle = cel_by_end(f, s);
    auto automaton = eval_cea_by_end(compile(f), s);
    auto streaming = evaluate_stream(streaming_automaton(f), s);
    double secs = seconds_since(t0);
    Outcome r;
    std::size_t total = 0;
    for (std::size_t j = 1; j <= s.size(); ++j) {
        total += oracle[j].size();
        if (oracle[j] != automaton[j] || oracle[j] != streaming[j]) {
            r.ok = false;
            r.detail = "engines differ at position " + std::to_string(j);
            return r;
        }
    }
    ComplexEvent want{4, 8, {{"X", {4}}, {"Y", {8}}, {"T", {5, 6, 7}}}};
    bool found = streaming[8].count(want) == 1;
    r.ok = found && secs < 1.0;
    r.detail = std::to_string(total) + " outputs, identical at all 9 positions, (4,8,{X:{4},Y:{8},T:{5,6,7}}) " +
               (found ? "present" : "MISSING") + ", " + fmt(secs) + " s";
    return r;
}

// 2. Compilation soundness on random formulas.
Outcome compilation_soundness() {
    auto t0 = Clock::now();
    DiffOptions opt;
    opt.seed = 2024;
    opt.cases = 200;
    opt.max_depth = 4;
    opt.max_stream = 10;
    DiffReport rep = run_diff_test(opt);
    double secs = seconds_since(t0);
    Outcome r;
    r.ok = !rep.mismatch && rep.cases == 200 && rep.kinds.size() == 15 && secs < 300;
    r.detail = std::to_string(rep.cases) + " formulas, " + std::to_string(rep.kinds.size()) + "/15 operators, " +
               std::to_string(rep.nonempty) + " with output (" + std::to_string(rep.outputs) + " events), " +
               std::to_string(rep.redrawn) + " redrawn, " + fmt(secs) + " s";
    if (rep.mismatch) r.detail += "; mismatch: " + mismatch_report(*rep.mismatch);
    return r;
}

// 3 and 4 share the determinized automata.
std::vector<TimedCea> g_determinized;

Outcome determinization_soundness() {
    auto t0 = Clock::now();
    Rng rng(3);
    Outcome r;
    std::size_t automata = 0, streams = 0, violations = 0;
    long double worst = 0;
    while (automata < 50) {
        CeaShape shape;
        shape.synchronous = true;
        shape.max_states = 4;
        shape.max_clocks = 2;
        TimedCea a = random_cea(rng, shape);
        if (a.clocks.empty() || check_sync(a).verdict != SyncVerdict::Yes) continue;
        TimedCea d = determinize(a);
        ++automata;
        if (!is_deterministic(d)) ++violations;
        long double bound = determinization_size_bound(a);
        worst = std::max(worst, static_cast<long double>(d.size()) / bound);
        if (static_cast<long double>(d.size()) > bound) ++violations;
        for (int k = 0; k < 10; ++k) {
            std::size_t n = 1 + rng() % 8;
            TimedStream s = random_stream(rng, n);
            if (eval_cea_oracle(d, s) != eval_cea_oracle(a, s)) ++violations;
            ++streams;
        }
        g_determinized.push_back(std::move(d));
    }
    double secs = seconds_since(t0);
    r.ok = violations == 0 && secs < 300;
    r.detail = std::to_string(automata) + " automata x " + std::to_string(streams / automata) +
               " streams, " + std::to_string(violations) + " violations, max size/bound " +
               fmt(static_cast<double>(worst), 2) + ", " + fmt(secs) + " s";
    return r;
}

Outcome sync_decision() {
    Outcome r;
    std::size_t yes = 0, no = 0, bad = 0;
    for (const TimedCea& a : {temp_hum_one_clock(), temp_hum_two_clocks()}) {
        if (check_sync(a).verdict == SyncVerdict::Yes) ++yes;
        else ++bad;
    }
    for (const TimedCea& d : g_determinized) {
        if (check_sync(d).verdict == SyncVerdict::Yes) ++yes;
        else ++bad;
    }
    Rng rng(4);
    for (int k = 0; k < 50; ++k) {
        TimedCea a = conflicting_cea(rng);
        SyncResult res = check_sync(a);
        if (res.verdict == SyncVerdict::No && res.witness && verify_sync_witness(a, *res.witness))
            ++no;
        else
            ++bad;
    }
    r.ok = bad == 0 && !g_determinized.empty();
    r.detail = std::to_string(yes) + " yes (T1, T2, " + std::to_string(g_determinized.size()) +
               " determinized), " + std::to_string(no) + " no with verified witness, " + std::to_string(bad) +
               " wrong";
    return r;
}

// 5. Streaming correctness with per-step invariant checks.
Outcome streaming_correctness() {
    auto t0 = Clock::now();
    Rng rng(5);
    Outcome r;
    std::size_t automata = 0, positions = 0, outputs = 0, violations = 0, redrawn = 0, max_ul = 0;
    int max_odepth = 0;
    while (automata < 100) {
        TimedCea a = random_streamable_cea(rng);
        TimedStream s = random_stream(rng, 1 + rng() % 30);
        std::vector<CeSet> want;
        try {
            CeaOracleOptions opt;
            opt.max_stream = 30;
            opt.max_results = 20'000;
            want = eval_cea_by_end(a, s, opt);
        } catch (const OracleLimit&) {
            ++redrawn;
            continue;
        }
        ++automata;
        StreamingEvaluator ev(a);
        for (std::size_t j = 1; j <= s.size(); ++j) {
            ev.push(s.event(j), s.ts(j));
            ++positions;
            for (const auto& [q, ul] : ev.table()) {
                max_ul = std::max(max_ul, ul.size());
                if (ul.size() > static_cast<std::size_t>(a.num_states) + 2) ++violations;
                for (NodeId n : ul)
                    if (ev.caecs().check_invariants(n, 11)) ++violations;
            }
            auto got = ev.results();
            CeSet set(got.begin(), got.end());
            if (set.size() != got.size() || set != want[j]) ++violations;
            outputs += got.size();
        }
        max_odepth = std::max(max_odepth, ev.stats().max_odepth);
    }
    if (max_odepth > 11) ++violations;
    r.ok = violations == 0;
    r.detail = std::to_string(automata) + " automata, " + std::to_string(positions) + " positions, " +
               std::to_string(outputs) + " outputs, " + std::to_string(violations) +
               " violations, max union-list " + std::to_string(max_ul) + ", max odepth " +
               std::to_string(max_odepth) + ", " + std::to_string(redrawn) + " redrawn, " + fmt(seconds_since(t0)) +
               " s";
    return r;
}

// 6. Amortized constant update time. Each decile keeps its fastest of three runs.
Outcome constant_update() {
    auto t0 = Clock::now();
    Rng rng(6);
    TimedStream s = sensor_stream(rng, 100'000);
    TimedCea a = streaming_automaton(parse_query(kQueryHumRun));
    std::vector<double> best(10, 1e300);
    std::size_t outputs = 0;
    for (int rep = 0; rep < 3; ++rep) {
        BenchReport b = run_bench(a, s, false);
        for (int d = 0; d < 10; ++d) best[d] = std::min(best[d], b.decile_update_ns[d]);
        outputs = b.outputs;
    }
    (void)outputs;
    double ratio = best[9] / best[0];
    double secs = seconds_since(t0);
    Outcome r;
    r.ok = ratio <= 2.0 && secs < 120;
    r.detail = "100000 events, first decile " + fmt(best[0]) + " ns, last decile " + fmt(best[9]) +
               " ns, ratio " + fmt(ratio) + ", " + fmt(secs) + " s";
    return r;
}

// 7. Output-linear delay on a query with thousands of matches per position.
Outcome output_linear_delay() {
    auto t0 = Clock::now();
    Rng rng(7);
    TimedStream s = sensor_stream(rng, 10'000);
    TimedCea a = streaming_automaton(parse_query("(H AS X ; (T AS Y)+ ; H AS Z) WITHIN [<=6]"));
    BenchReport b = run_bench(a, s, true);
    Outcome r;
    r.ok = b.max_outputs_per_position >= 1000 && b.delay_growth > 0 && b.delay_growth <= 2.0;
    r.detail = std::to_string(b.outputs) + " outputs, max " + std::to_string(b.max_outputs_per_position) +
               " per position, fitted constant (max delay / output size) " + fmt(b.max_delay_ratio) +
               ", last/first decile " + fmt(b.delay_growth) + ", " + fmt(seconds_since(t0)) + " s";
    return r;
}

// 8. merge_gadgets against composing the two gadgets on sampled reset times.
Outcome gadget_algebra() {
    const std::vector<Rational> grid{Rational(0),    Rational(1, 2), Rational(1), Rational(3, 2), Rational(2),
                                     Rational(5, 2), Rational(3),    Rational(4), Rational(5),    Rational(7)};
    // Gadget shapes: reset, check, reset above check.
    auto make = [](int shape, const Rational& t, const Rational& c) {
        Gadget g;
        if (shape != 1) g.ops.push_back(GadgetOp::reset(t));
        if (shape != 0) g.ops.push_back(GadgetOp::check(t, c));
        return g;
    };
    std::size_t combos = 0, samples = 0, mismatches = 0;
    for (Direction dir : {Direction::Le, Direction::Ge})
        for (int s1 = 0; s1 < 3; ++s1)
            for (int s2 = 0; s2 < 3; ++s2)
                for (const auto& t2 : grid)
                    for (const auto& dt : grid)
                        for (const auto& c1 : grid)
                            for (const auto& c2 : grid) {
                                Rational t1 = t2 + dt;  // g1 sits above g2, so it is not older
                                Gadget g1 = make(s1, t1, c1), g2 = make(s2, t2, c2);
                                Gadget m = merge_gadgets(g1, g2, dir);
                                ++combos;
                                if (m.ops.size() > 2) ++mismatches;
                                for (Rational r = Rational(0); r <= t2; r += Rational(1, 4)) {
                                    auto inner = apply_gadget(g2, r, dir);
                                    auto both = inner ? apply_gadget(g1, *inner, dir) : std::nullopt;
                                    if (both != apply_gadget(m, r, dir)) ++mismatches;
                                    ++samples;
                                }
                            }
    Outcome r;
    r.ok = mismatches == 0 && combos >= 10'000;
    r.detail = std::to_string(combos) + " (t1, t2, c1, c2) combinations over 9 shape pairs and both directions, " +
               std::to_string(samples) + " sampled reset times, " + std::to_string(mismatches) + " mismatches";
    return r;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"example stream: three engines agree on the humidity-run query", example_reproduction},
        {"compilation soundness on random formulas", compilation_soundness},
        {"determinization soundness and size bound", determinization_soundness},
        {"synchronous-reset decision", sync_decision},
        {"streaming correctness with invariants", streaming_correctness},
        {"constant update time", constant_update},
        {"output-linear delay", output_linear_delay},
        {"gadget algebra", gadget_algebra},
    };
    int failed = 0, k = 0;
    for (const auto& [name, run] : criteria) {
        ++k;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", k, name, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.ok;
    }
    return failed == 0 ? 0 : 1;
}
