"""Timed complex event recognition: queries, automata and a streaming evaluator."""

import json
from decimal import Decimal
from fractions import Fraction

from . import _tcer
from ._tcer import InputError, NotEvaluable, OracleLimit, ParseError, canonical_query, classify

__all__ = [
    "Evaluator",
    "InputError",
    "NotEvaluable",
    "OracleLimit",
    "ParseError",
    "canonical_query",
    "check_sync",
    "classify",
    "compile_query",
    "determinize",
    "evaluate",
    "event_line",
]


def _ts_text(ts):
    if isinstance(ts, str):
        return ts
    if isinstance(ts, Fraction):
        return str(Decimal(ts.numerator) / Decimal(ts.denominator))
    return str(Decimal(str(ts)))


def event_line(type_, attrs, ts):
    """One JSON Lines record for the stream format."""
    return json.dumps({"type": type_, "attrs": attrs, "ts": _ts_text(ts)})


def _stream_text(events):
    if isinstance(events, str):
        return events
    return "\n".join(e if isinstance(e, str) else event_line(e["type"], e.get("attrs", {}), e["ts"]) for e in events)


def evaluate(query, events, engine="streaming", ge40=False):
    """All matches of query over events (JSON Lines text or a list of dicts)."""
    return [json.loads(line) for line in _tcer.evaluate(query, _stream_text(events), engine, ge40)]


def compile_query(query, windowed=False, ge40=False):
    return json.loads(_tcer.compile(query, windowed, ge40))


def determinize(automaton):
    return json.loads(_tcer.determinize(json.dumps(automaton)))


def check_sync(automaton, cap=1_000_000):
    return _tcer.check_sync(json.dumps(automaton), cap)


class Evaluator:
    """Push events one at a time; results() lists the matches ending at the last one."""

    def __init__(self, query=None, automaton=None, ge40=False):
        if (query is None) == (automaton is None):
            raise ValueError("give exactly one of query and automaton")
        if query is not None:
            self._ev = _tcer.Evaluator(query, ge40)
        else:
            self._ev = _tcer.Evaluator.from_automaton(json.dumps(automaton))

    def push(self, type_, attrs, ts):
        self._ev.push(event_line(type_, attrs, ts))

    def results(self):
        return [json.loads(line) for line in self._ev.results()]

    @property
    def position(self):
        return self._ev.position

    def stats(self):
        return self._ev.stats()
