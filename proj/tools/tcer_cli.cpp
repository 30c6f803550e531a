#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

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

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kInput = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A query argument is a file path when such a file exists, query text otherwise.
Cel load_query(const std::string& arg, bool ge40) {
    std::string text = std::filesystem::is_regular_file(arg) ? read_file(arg) : arg;
    Cel f = parse_query(text);
    return ge40 ? with_ge40(f) : f;
}

TimedCea load_automaton(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return automaton_from_json(j);
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        out << text << '\n';
    else
        write_file(path, text + "\n");
}

struct StreamSource {
    std::ifstream file;
    std::istream* in = &std::cin;
    explicit StreamSource(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path);
        if (!file) throw InputError("cannot open " + path);
        in = &file;
    }
};

// Prepares an automaton for the streaming engine; a nondeterministic one is
// determinized first. Throws UsageError when it is outside the class.
TimedCea streaming_from_file(const TimedCea& a) {
    TimedCea d = a;
    if (!is_deterministic(d)) {
        if (d.clocks.size() > 1)
            throw UsageError("--engine streaming needs a single-clock automaton; this one has " +
                             std::to_string(d.clocks.size()) + " clocks");
        try {
            d = determinize(d);
        } catch (const NotSynchronous& e) {
            throw UsageError(std::string("--engine streaming: ") + e.what());
        }
    }
    try {
        StreamingEvaluator probe(d);
    } catch (const NotEvaluable& e) {
        throw UsageError(std::string("--engine streaming: ") + e.what());
    }
    return d;
}

int cmd_run(const std::string& query, const std::string& automaton, const std::string& stream_path,
            const std::string& engine, bool ge40, std::ostream& out) {
    if (query.empty() == automaton.empty()) throw UsageError("give exactly one of --query and --automaton");
    if (engine == "oracle" && query.empty()) throw UsageError("--engine oracle needs --query");

    // Everything that can reject the engine/query pair happens before the stream is read.
    Cel f;
    TimedCea a;
    if (!query.empty()) f = load_query(query, ge40);
    if (engine == "streaming") {
        try {
            a = query.empty() ? streaming_from_file(load_automaton(automaton)) : streaming_automaton(f);
        } catch (const NotEvaluable& e) {
            throw UsageError(std::string("--engine streaming: ") + e.what());
        }
    } else if (engine == "automaton") {
        a = query.empty() ? load_automaton(automaton) : compile(f);
    }

    StreamSource src(stream_path);
    if (engine == "streaming") {
        StreamingEvaluator ev(a);
        StreamReader reader(*src.in);
        while (auto te = reader.next()) {
            ev.push(te->event, te->ts);
            ev.enumerate([&](const ComplexEvent& c) { out << ce_to_jsonl(c, ev.position()) << '\n'; });
        }
        return kOk;
    }

    TimedStream s = read_stream(*src.in);
    std::vector<CeSet> by_end(s.size() + 1);
    try {
        if (engine == "automaton") {
            CeaOracleOptions opt;
            opt.max_stream = s.size();
            by_end = eval_cea_by_end(a, s, opt);
        } else {
            CelOracleOptions opt;
            opt.max_stream = s.size();
            for (const auto& c : eval_cel_oracle(f, s, opt)) by_end[c.end].insert(c);
        }
    } catch (const OracleLimit& e) {
        throw UsageError(std::string("input too large for --engine ") + engine + ": " + e.what());
    }
    for (std::size_t j = 1; j <= s.size(); ++j)
        for (const auto& c : by_end[j]) out << ce_to_jsonl(c, j) << '\n';
    return kOk;
}

int cmd_check_sync(const std::string& path, std::size_t cap, std::ostream& out) {
    TimedCea a = load_automaton(path);
    SyncResult r = check_sync(a, cap);
    Json j = {{"verdict", sync_verdict_name(r.verdict)}, {"explored", r.explored}};
    if (r.witness) {
        Json stream = Json::array();
        for (std::size_t k = 1; k <= r.witness->stream.size(); ++k)
            stream.push_back(Json::parse(event_to_jsonl(r.witness->stream.event(k), r.witness->stream.ts(k))));
        j["witness"] = {{"run1", r.witness->run1},
                        {"run2", r.witness->run2},
                        {"stream", stream},
                        {"verified", verify_sync_witness(a, *r.witness)}};
    }
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_bench(const std::string& query, std::size_t events, std::uint64_t seed, bool ge40, bool no_enum,
              std::ostream& out) {
    Cel f = load_query(query.empty() ? kQueryHumRun : query, ge40);
    TimedCea a;
    try {
        a = streaming_automaton(f);
    } catch (const NotEvaluable& e) {
        throw UsageError(std::string("bench needs a streamable query: ") + e.what());
    }
    Rng rng(seed);
    TimedStream s = sensor_stream(rng, events);
    Json j = bench_to_json(run_bench(a, s, !no_enum));
    j["query"] = print_query(f);
    j["seed"] = seed;
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_diff_test(const DiffOptions& opt, std::ostream& out) {
    DiffReport rep = run_diff_test(opt);
    Json j = {{"seed", opt.seed},
              {"cases", rep.cases},
              {"streamed", rep.streamed},
              {"redrawn", rep.redrawn},
              {"outputs", rep.outputs},
              {"nonempty_cases", rep.nonempty},
              {"operator_kinds", rep.kinds.size()},
              {"ok", !rep.mismatch}};
    out << j.dump() << '\n';
    if (rep.mismatch) {
        std::cerr << "mismatch, minimized reproduction:\n" << mismatch_report(*rep.mismatch) << '\n';
        return kMismatch;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timed complex event recognition"};
    app.require_subcommand(1);

    std::string query, automaton, stream, engine = "streaming", output;
    bool ge40 = false, windowed = false, no_normalize = false, no_enum = false;
    std::size_t cap = 1'000'000, events = 100'000;
    std::uint64_t seed = 1;
    DiffOptions diff;

    auto* run = app.add_subcommand("run", "Evaluate a query over a JSON Lines stream");
    run->add_option("--query,-q", query, "query file or text");
    run->add_option("--automaton,-a", automaton, "automaton JSON (instead of a query)");
    run->add_option("--stream,-s", stream, "JSON Lines stream, - for stdin");
    run->add_option("--engine,-e", engine)->check(CLI::IsMember({"oracle", "automaton", "streaming"}));
    run->add_flag("--fixture-ge40", ge40, "read temp > 40 as temp >= 40");

    auto* comp = app.add_subcommand("compile", "Compile a query to an automaton");
    comp->add_option("--query,-q", query)->required();
    comp->add_flag("--windowed", windowed, "two-clock construction for windowed queries");
    comp->add_flag("--fixture-ge40", ge40);
    comp->add_option("-o,--output", output);

    auto* det = app.add_subcommand("determinize", "Determinize a synchronous-reset automaton");
    det->add_option("--automaton,-a", automaton)->required();
    det->add_flag("--no-normalize", no_normalize, "skip the single-clock normalization");
    det->add_option("-o,--output", output);

    auto* sync = app.add_subcommand("check-sync", "Decide whether an automaton has synchronous resets");
    sync->add_option("--automaton,-a", automaton)->required();
    sync->add_option("--cap", cap, "exploration cap; above it the verdict is unknown");

    auto* bench = app.add_subcommand("bench", "Update latency and enumeration delay report");
    bench->add_option("--query,-q", query, "streamable query (default: the humidity run query)");
    bench->add_option("--events,-n", events);
    bench->add_option("--seed", seed);
    bench->add_flag("--fixture-ge40", ge40);
    bench->add_flag("--no-enumerate", no_enum, "time updates only");

    auto* dt = app.add_subcommand("diff-test", "Randomized oracle vs compiled vs streaming comparison");
    dt->add_option("--seed", diff.seed);
    dt->add_option("--cases", diff.cases);
    dt->add_option("--max-depth", diff.max_depth);
    dt->add_option("--max-stream", diff.max_stream);

    std::string fixture;
    auto* fix = app.add_subcommand("fixture", "Print a built-in example automaton or stream");
    fix->add_option("name", fixture)->required()->check(CLI::IsMember({"t1", "t2", "s0", "sensor"}));
    fix->add_flag("--fixture-ge40", ge40);
    fix->add_option("--events,-n", events, "sensor: stream length");
    fix->add_option("--seed", seed, "sensor: generator seed");
    fix->add_option("-o,--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    std::ios::sync_with_stdio(false);
    try {
        if (*run) return cmd_run(query, automaton, stream, engine, ge40, std::cout);
        if (*comp) {
            Cel f = load_query(query, ge40);
            TimedCea a;
            try {
                a = windowed ? compile_windowed(f) : compile(f);
            } catch (const NotWindowed& e) {
                throw UsageError(std::string("--windowed: ") + e.what());
            }
            emit(std::cout, output, automaton_to_json(a).dump(2));
            return kOk;
        }
        if (*det) {
            DeterminizeOptions opt;
            opt.normalize = !no_normalize;
            TimedCea d;
            try {
                d = determinize(load_automaton(automaton), opt);
            } catch (const NotSynchronous& e) {
                std::cerr << "error: " << e.what() << '\n';
                return kMismatch;
            }
            emit(std::cout, output, automaton_to_json(d).dump(2));
            return kOk;
        }
        if (*fix) {
            Cmp cmp = ge40 ? Cmp::Ge : Cmp::Gt;
            if (fixture == "s0" || fixture == "sensor") {
                Rng rng(seed);
                TimedStream s = fixture == "s0" ? sensor_example_stream() : sensor_stream(rng, events);
                std::string text;
                for (std::size_t k = 1; k <= s.size(); ++k) text += event_to_jsonl(s.event(k), s.ts(k)) + (k < s.size() ? "\n" : "");
                emit(std::cout, output, text);
            } else {
                TimedCea a = fixture == "t1" ? temp_hum_one_clock(cmp) : temp_hum_two_clocks(cmp);
                emit(std::cout, output, automaton_to_json(a).dump(2));
            }
            return kOk;
        }
        if (*sync) return cmd_check_sync(automaton, cap, std::cout);
        if (*bench) return cmd_bench(query, events, seed, ge40, no_enum, std::cout);
        if (*dt) return cmd_diff_test(diff, std::cout);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InputError& e) {
        std::cerr << "input error";
        if (e.line) std::cerr << " (line " << e.line << ")";
        std::cerr << ": " << e.what() << '\n';
        return kInput;
    } catch (const ParseError& e) {
        std::cerr << "query error (line " << e.line << ", column " << e.column << "): " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
    return kUsage;
}
