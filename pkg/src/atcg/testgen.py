"""Scenario extraction from a test tree and model-level test formatting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .exprs import Atom, format_atom
from .petri import (TestTree, TreeVertex, call_args, canonical, reach_graph)


@dataclass(frozen=True)
class FiringRecord:
    transition_name: str
    args: Tuple[Atom, ...]
    silent: bool
    annotation: Optional[str] = None


@dataclass
class Scenario:
    records: Tuple[FiringRecord, ...]
    trace: str  # e.g. "m0->T1->m1"


@dataclass
class TestSuite:
    net_id: str
    scenarios: List[Scenario] = field(default_factory=list)


def scenarios(tree: TestTree) -> TestSuite:
    """One scenario per non-root vertex, in depth-first preorder: the firing
    sequence along the root path, with a state-label trace taken from the
    reachability graph's breadth-first numbering (m0, m1, ...)."""
    net = tree.net
    graph = reach_graph(net, tree.bounds)
    label = {canonical(m): "m%d" % i for i, m in enumerate(graph.states)}
    by_id = {t.id: t for t in net.transitions}

    suite = TestSuite(net_id=net.id)

    def descend(vertex: TreeVertex, records, trace_parts):
        for child in vertex.children:
            t = by_id[child.transition]
            rec = FiringRecord(
                transition_name=t.name,
                args=call_args(net, child.transition, child.binding),
                silent=t.silent,
                annotation=t.annotation,
            )
            child_records = records + (rec,)
            child_trace = trace_parts + [t.name, label[canonical(child.marking)]]
            suite.scenarios.append(Scenario(records=child_records,
                                            trace="->".join(child_trace)))
            descend(child, child_records, child_trace)

    descend(tree.root, (), [label[canonical(tree.root.marking)]])
    return suite


def _is_strict_prefix(a: Scenario, b: Scenario) -> bool:
    return (len(a.records) < len(b.records)
            and b.records[: len(a.records)] == a.records)


def format_call(name: str, args: Tuple[Atom, ...]) -> str:
    return "%s(%s)" % (name, ", ".join(format_atom(a) for a in args))


def maximal_scenarios(suite: TestSuite) -> TestSuite:
    """Drop every scenario that is a strict prefix of another scenario."""
    kept = [s for s in suite.scenarios
            if not any(_is_strict_prefix(s, other)
                       for other in suite.scenarios)]
    return TestSuite(net_id=suite.net_id, scenarios=kept)


def format_model_tests(suite: TestSuite, maximal_only: bool) -> str:
    """Render the numbered call lists; silent firings are omitted from the
    printed calls. With maximal_only, scenarios that are strict prefixes of
    another scenario are dropped."""
    chosen = (maximal_scenarios(suite) if maximal_only else suite).scenarios
    lines = ["Model-Level Tests"]
    for i, s in enumerate(chosen, start=1):
        calls = [format_call(r.transition_name, r.args)
                 for r in s.records if not r.silent]
        lines.append("%d. %s" % (i, ", ".join(calls)))
    return "\n".join(lines) + "\n"
