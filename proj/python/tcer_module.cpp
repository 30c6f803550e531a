#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tcer/compiler.hpp"
#include "tcer/determinizer.hpp"
#include "tcer/io.hpp"
#include "tcer/streaming.hpp"

namespace py = pybind11;
using namespace tcer;

namespace {

Cel query(const std::string& text, bool ge40) {
    Cel f = parse_query(text);
    return ge40 ? with_ge40(f) : f;
}

std::vector<std::string> lines(const std::vector<CeSet>& by_end) {
    std::vector<std::string> out;
    for (std::size_t j = 1; j < by_end.size(); ++j)
        for (const auto& c : by_end[j]) out.push_back(ce_to_jsonl(c, j));
    return out;
}

// Engine "oracle", "automaton" or "streaming" over a JSON Lines stream.
std::vector<std::string> evaluate(const std::string& text, const std::string& stream, const std::string& engine,
                                  bool ge40) {
    Cel f = query(text, ge40);
    std::istringstream in(stream);
    TimedStream s = read_stream(in);
    if (engine == "streaming") {
        StreamingEvaluator ev(streaming_automaton(f));
        std::vector<std::string> out;
        for (std::size_t j = 1; j <= s.size(); ++j) {
            ev.push(s.event(j), s.ts(j));
            ev.enumerate([&](const ComplexEvent& c) { out.push_back(ce_to_jsonl(c, j)); });
        }
        return out;
    }
    if (engine == "automaton") {
        CeaOracleOptions opt;
        opt.max_stream = s.size();
        return lines(eval_cea_by_end(compile(f), s, opt));
    }
    if (engine != "oracle") throw py::value_error("engine must be oracle, automaton or streaming");
    CelOracleOptions opt;
    opt.max_stream = s.size();
    std::vector<CeSet> by_end(s.size() + 1);
    for (const auto& c : eval_cel_oracle(f, s, opt)) by_end[c.end].insert(c);
    return lines(by_end);
}

TimedCea automaton(const std::string& json) { return automaton_from_json(Json::parse(json)); }

class PyEvaluator {
public:
    explicit PyEvaluator(const TimedCea& a) : ev_(a) {}
    void push(const std::string& line) {
        TimedEvent te = parse_event_line(line, ev_.position() + 1);
        ev_.push(te.event, te.ts);
    }
    std::vector<std::string> results() {
        std::vector<std::string> out;
        ev_.enumerate([&](const ComplexEvent& c) { out.push_back(ce_to_jsonl(c, ev_.position())); });
        return out;
    }
    std::size_t position() const { return ev_.position(); }
    py::dict stats() const {
        py::dict d;
        d["events"] = ev_.stats().events;
        d["max_union_list"] = ev_.stats().max_union_list;
        d["max_odepth"] = ev_.stats().max_odepth;
        d["nodes"] = ev_.stats().nodes;
        return d;
    }

private:
    StreamingEvaluator ev_;
};

}  // namespace

PYBIND11_MODULE(_tcer, m) {
    m.doc() = "Timed complex event recognition engine";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NotEvaluable>(m, "NotEvaluable", PyExc_ValueError);
    py::register_exception<OracleLimit>(m, "OracleLimit", PyExc_RuntimeError);

    m.def("canonical_query", [](const std::string& text) { return print_query(parse_query(text)); });
    m.def("classify", [](const std::string& text) {
        Classification c = classify(parse_query(text));
        py::dict d;
        d["class"] = cel_class_name(c.primary);
        d["simple"] = c.simple;
        d["windowed"] = c.windowed;
        d["swg"] = c.swg;
        return d;
    });
    m.def("evaluate", &evaluate, py::arg("query"), py::arg("stream"), py::arg("engine") = "streaming",
          py::arg("ge40") = false, "Matches as JSON lines, ordered by end position.");
    m.def(
        "compile",
        [](const std::string& text, bool windowed, bool ge40) {
            Cel f = query(text, ge40);
            return automaton_to_json(windowed ? compile_windowed(f) : compile(f)).dump();
        },
        py::arg("query"), py::arg("windowed") = false, py::arg("ge40") = false);
    m.def("determinize", [](const std::string& json) { return automaton_to_json(determinize(automaton(json))).dump(); });
    m.def(
        "check_sync",
        [](const std::string& json, std::size_t cap) {
            TimedCea a = automaton(json);
            SyncResult r = check_sync(a, cap);
            py::dict d;
            d["verdict"] = sync_verdict_name(r.verdict);
            d["explored"] = r.explored;
            if (r.witness) d["witness_verified"] = verify_sync_witness(a, *r.witness);
            return d;
        },
        py::arg("automaton"), py::arg("cap") = 1'000'000);

    py::class_<PyEvaluator>(m, "Evaluator")
        .def(py::init([](const std::string& text, bool ge40) {
                 return PyEvaluator(streaming_automaton(query(text, ge40)));
             }),
             py::arg("query"), py::arg("ge40") = false)
        .def_static("from_automaton", [](const std::string& json) { return PyEvaluator(automaton(json)); })
        .def("push", &PyEvaluator::push, "Reads one JSON event line.")
        .def("results", &PyEvaluator::results, "Matches ending at the current position, as JSON lines.")
        .def_property_readonly("position", &PyEvaluator::position)
        .def("stats", &PyEvaluator::stats);
}
