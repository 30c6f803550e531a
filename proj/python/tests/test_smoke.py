import json
from pathlib import Path

import pytest

import tcer

DATA = Path(__file__).resolve().parents[2] / "data"
PHI2 = (DATA / "phi2.tcel").read_text()
PHI1P = (DATA / "phi1p.tcel").read_text()
S0 = (DATA / "s0.jsonl").read_text()


def test_humidity_run_on_example_stream():
    out = tcer.evaluate(PHI2, S0)
    assert {"start": 4, "end": 8, "pos": 8, "bindings": {"X": [4], "Y": [8], "T": [5, 6, 7]}} in out


def test_engines_agree():
    key = lambda c: json.dumps(c, sort_keys=True)
    runs = [sorted(map(key, tcer.evaluate(PHI2, S0, engine=e))) for e in ("oracle", "automaton", "streaming")]
    assert runs[0] == runs[1] == runs[2]


def test_non_strict_fixture():
    assert tcer.evaluate(PHI1P, S0, engine="oracle") == []
    assert tcer.evaluate(PHI1P, S0, engine="oracle", ge40=True) == [
        {"start": 5, "end": 9, "pos": 9, "bindings": {"X": [5], "Y": [9]}}
    ]


def test_incremental_evaluator():
    ev = tcer.Evaluator(PHI2)
    seen = []
    for line in S0.splitlines():
        e = json.loads(line)
        ev.push(e["type"], e["attrs"], e["ts"])
        seen += ev.results()
    assert ev.position == 9
    assert [c["end"] for c in seen] == [8]
    assert ev.stats()["max_union_list"] >= 1


def test_automata_round_trip():
    a = tcer.compile_query(PHI1P, windowed=True, ge40=True)
    assert len(a["clocks"]) == 2
    assert tcer.check_sync(a)["verdict"] == "yes"
    d = tcer.determinize(a)
    assert tcer.check_sync(d)["verdict"] == "yes"


def test_errors():
    with pytest.raises(ValueError):
        tcer.canonical_query("(A")
    with pytest.raises(tcer.NotEvaluable):
        tcer.Evaluator(PHI1P)
    ev = tcer.Evaluator(PHI2)
    ev.push("H", {"hum": 20}, "1.5")
    with pytest.raises(ValueError):
        ev.push("H", {"hum": 20}, "1.5")
    assert tcer.classify("T")["simple"]
