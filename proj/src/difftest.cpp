#include "tcer/difftest.hpp"

#include "tcer/compiler.hpp"
#include "tcer/io.hpp"
#include "tcer/streaming.hpp"

namespace tcer {

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::CelOracle: return "oracle";
        case Engine::Automaton: return "automaton";
        case Engine::Streaming: return "streaming";
    }
    return "?";
}

namespace {

std::vector<CeSet> by_end(const CeSet& all, std::size_t n) {
    std::vector<CeSet> out(n + 1);
    for (const auto& c : all) out[c.end].insert(c);
    return out;
}

std::optional<Mismatch> compare(const Cel& f, const TimedStream& s, Engine e, const std::vector<CeSet>& want,
                                const std::vector<CeSet>& got) {
    for (std::size_t j = 1; j <= s.size(); ++j)
        if (want[j] != got[j]) return Mismatch{f, s, e, j, want[j], got[j]};
    return std::nullopt;
}

void collect_kinds(const Cel& f, std::set<CelKind>& out) {
    if (!f) return;
    out.insert(f->kind);
    collect_kinds(f->lhs, out);
    collect_kinds(f->rhs, out);
}

std::vector<Cel> children(const Cel& f) {
    std::vector<Cel> out;
    if (f->lhs) out.push_back(f->lhs);
    if (f->rhs) out.push_back(f->rhs);
    return out;
}

// Every formula obtained by replacing one sub-formula with one of its children.
std::vector<Cel> shrinks(const Cel& f) {
    std::vector<Cel> out = children(f);
    for (int side = 0; side < 2; ++side) {
        const Cel& c = side == 0 ? f->lhs : f->rhs;
        if (!c) continue;
        for (const Cel& r : shrinks(c)) {
            auto n = std::make_shared<CelNode>(*f);
            (side == 0 ? n->lhs : n->rhs) = r;
            out.push_back(n);
        }
    }
    return out;
}

TimedStream without(const TimedStream& s, std::size_t pos) {
    TimedStream out;
    for (std::size_t k = 1; k <= s.size(); ++k)
        if (k != pos) out.push(s.event(k), s.ts(k));
    return out;
}

bool still_fails(const Cel& f, const TimedStream& s, Mismatch& m) {
    try {
        if (auto r = diff_case(f, s)) {
            m = *r;
            return true;
        }
    } catch (const std::exception&) {
    }
    return false;
}

}  // namespace

std::optional<Mismatch> diff_case(const Cel& f, const TimedStream& s, bool* streamed, std::size_t* outputs) {
    if (streamed) *streamed = false;
    CeSet all = eval_cel_oracle(f, s);
    if (outputs) *outputs = all.size();
    auto want = by_end(all, s.size());
    CeaOracleOptions opt;
    opt.max_stream = std::max<std::size_t>(opt.max_stream, s.size());
    auto got = eval_cea_by_end(compile(f), s, opt);
    if (auto m = compare(f, s, Engine::Automaton, want, got)) return m;
    TimedCea a;
    try {
        a = streaming_automaton(f);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (streamed) *streamed = true;
    return compare(f, s, Engine::Streaming, want, evaluate_stream(a, s));
}

Mismatch minimize(Mismatch m) {
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t k = m.stream.size(); k >= 1 && !progress; --k)
            progress = still_fails(m.formula, without(m.stream, k), m);
        if (progress) continue;
        for (const Cel& g : shrinks(m.formula)) {
            if (still_fails(g, m.stream, m)) {
                progress = true;
                break;
            }
        }
    }
    return m;
}

DiffReport run_diff_test(const DiffOptions& opt) {
    DiffReport rep;
    Rng rng(opt.seed);
    while (rep.cases < opt.cases) {
        Cel f = random_formula(rng, opt.max_depth);
        std::uniform_int_distribution<std::size_t> len(1, opt.max_stream);
        TimedStream s = random_stream(rng, len(rng));
        bool streamed = false;
        std::size_t outputs = 0;
        std::optional<Mismatch> m;
        try {
            m = diff_case(f, s, &streamed, &outputs);
        } catch (const OracleLimit&) {
            ++rep.redrawn;
            continue;
        }
        ++rep.cases;
        rep.streamed += streamed;
        rep.outputs += outputs;
        rep.nonempty += outputs > 0;
        collect_kinds(f, rep.kinds);
        if (m) {
            rep.mismatch = minimize(*m);
            break;
        }
    }
    return rep;
}

std::string mismatch_report(const Mismatch& m) {
    Json stream = Json::array();
    for (std::size_t k = 1; k <= m.stream.size(); ++k)
        stream.push_back(Json::parse(event_to_jsonl(m.stream.event(k), m.stream.ts(k))));
    auto set_json = [&](const CeSet& cs) {
        Json a = Json::array();
        for (const auto& c : cs) a.push_back(ce_to_json(c, m.position));
        return a;
    };
    Json j = {{"formula", print_query(m.formula)},
              {"engine", engine_name(m.engine)},
              {"position", m.position},
              {"stream", stream},
              {"expected", set_json(m.expected)},
              {"got", set_json(m.got)}};
    return j.dump(2);
}

}  // namespace tcer
