"""Predicate/transition net value types, firing semantics, bounded
reachability graph, and round-trip test-tree construction.

A marking maps place ids to token multisets; tokens are tuples of atoms and
the empty tuple is the Default (control) token. Arc inscriptions are tuples
mixing variable names (plain strings) with constant atoms; an empty
inscription stands for one Default token.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .exprs import (Atom, EvalError, Expr, Token, atom_key, eval_expr,
                    format_atom, free_vars, token_key)
from .model import ValidationReport

Binding = Dict[str, Atom]
Marking = Dict[str, Counter]

InscriptionItem = Union[str, Atom]  # plain str = variable name


class FireError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__("%s: %s" % (code, message))
        self.code = code


@dataclass(frozen=True)
class Place:
    id: str
    name: str
    capacity: int = 0  # 0 = unbounded
    position: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Transition:
    id: str
    name: str
    guard: Optional[Expr] = None
    silent: bool = False
    position: Tuple[int, int] = (0, 0)
    annotation: Optional[str] = None  # post-condition text carried to codegen


@dataclass(frozen=True)
class Arc:
    id: str
    source: str
    target: str
    inscription: Tuple[InscriptionItem, ...] = ()


@dataclass
class PrTNet:
    id: str
    places: List[Place] = field(default_factory=list)
    transitions: List[Transition] = field(default_factory=list)
    arcs: List[Arc] = field(default_factory=list)
    init_decl: List[Tuple[str, Token]] = field(default_factory=list)

    def place(self, pid: str) -> Optional[Place]:
        for p in self.places:
            if p.id == pid:
                return p
        return None

    def transition(self, tid: str) -> Optional[Transition]:
        for t in self.transitions:
            if t.id == tid:
                return t
        return None

    def input_arcs(self, tid: str) -> List[Arc]:
        return sorted((a for a in self.arcs if a.target == tid),
                      key=lambda a: natural_key(a.id))

    def output_arcs(self, tid: str) -> List[Arc]:
        return sorted((a for a in self.arcs if a.source == tid),
                      key=lambda a: natural_key(a.id))

    def initial_marking(self) -> Marking:
        m: Marking = {}
        for pid, token in self.init_decl:
            m.setdefault(pid, Counter())[token] += 1
        return m


@dataclass
class Bounds:
    max_depth: int = 20
    max_states: int = 10000
    loop_unroll: Optional[int] = None

    def __post_init__(self):
        if self.max_depth <= 0 or self.max_states <= 0:
            raise ValueError("bounds must be positive")


@dataclass
class ReachGraph:
    states: List[Marking]
    edges: List[Tuple[int, str, Binding, int]]
    initial: int = 0
    truncated: bool = False


@dataclass
class TreeVertex:
    transition: Optional[str]  # None at the root
    binding: Binding
    marking: Marking
    children: List["TreeVertex"] = field(default_factory=list)
    leaf_reason: Optional[str] = None  # round-trip | dead | depth


@dataclass
class TestTree:
    root: TreeVertex
    net: PrTNet
    bounds: Bounds
    truncated: bool = False


_NAT_RE = re.compile(r"(\d+)")


def natural_key(s: str):
    """Sort key treating digit runs numerically, so A2 < A10."""
    return tuple(int(part) if part.isdigit() else part
                 for part in _NAT_RE.split(s))


def binding_key(b: Binding):
    return tuple((name, atom_key(b[name])) for name in sorted(b))


def format_binding(b: Binding) -> str:
    return "{%s}" % ", ".join("%s=%s" % (k, format_atom(b[k]))
                              for k in sorted(b))


def canonical(m: Marking):
    """Canonical key: empty places elided, places sorted by id, tokens in a
    place sorted by atom sequence."""
    out = []
    for pid in sorted(m):
        bag = m[pid]
        tokens = []
        for token, count in bag.items():
            if count > 0:
                tokens.extend([token] * count)
        if tokens:
            tokens.sort(key=token_key)
            out.append((pid, tuple(tokens)))
    return tuple(out)


def copy_marking(m: Marking) -> Marking:
    return {pid: Counter(bag) for pid, bag in m.items() if bag}


def format_marking(m: Marking) -> str:
    parts = []
    for pid, tokens in canonical(m):
        rendered = []
        for t in tokens:
            rendered.append("Default" if not t
                            else "(%s)" % ",".join(format_atom(a) for a in t))
        parts.append("%s{%s}" % (pid, ",".join(rendered)))
    return " ".join(parts) if parts else "-"


# ---------------------------------------------------------------------------
# Static checks


def compile_net(net: PrTNet) -> ValidationReport:
    """Syntax check: id uniqueness, bipartite arcs, dangling endpoints,
    guard-variable closure, and capacity violations in the initial marking."""
    report = ValidationReport()
    place_ids = {p.id for p in net.places}
    trans_ids = {t.id for t in net.transitions}

    for kind, ids in (("place", [p.id for p in net.places]),
                      ("transition", [t.id for t in net.transitions]),
                      ("arc", [a.id for a in net.arcs])):
        seen = set()
        for i in ids:
            if i in seen:
                report.error("duplicate-id", "%s %s" % (kind, i),
                             "duplicate %s id" % kind)
            seen.add(i)

    for arc in net.arcs:
        loc = "arc %s" % arc.id
        src_place = arc.source in place_ids
        src_trans = arc.source in trans_ids
        tgt_place = arc.target in place_ids
        tgt_trans = arc.target in trans_ids
        if not (src_place or src_trans):
            report.error("dangling-arc", loc,
                         "source %r does not exist" % arc.source)
        if not (tgt_place or tgt_trans):
            report.error("dangling-arc", loc,
                         "target %r does not exist" % arc.target)
        if (src_place and tgt_place) or (src_trans and tgt_trans):
            report.error("nonbipartite-arc", loc,
                         "arc must connect a place with a transition")

    for t in net.transitions:
        if t.guard is None:
            continue
        inscribed = set()
        for arc in net.arcs:
            if arc.target == t.id:
                inscribed |= {x for x in arc.inscription if isinstance(x, str)}
        loose = free_vars(t.guard) - inscribed
        if loose:
            report.error("unbound-guard-variable", "transition %s" % t.id,
                         "guard references %s not bound by input arcs"
                         % ", ".join(sorted(loose)))

    counts = Counter()
    for pid, token in net.init_decl:
        if pid not in place_ids:
            report.error("unknown-place", "init %s" % pid,
                         "initial token in nonexistent place")
            continue
        counts[pid] += 1
    for p in net.places:
        if p.capacity > 0 and counts[p.id] > p.capacity:
            report.error("capacity-exceeded", "place %s" % p.id,
                         "initial marking holds %d tokens, capacity %d"
                         % (counts[p.id], p.capacity))
    return report


# ---------------------------------------------------------------------------
# Token game


def _unify(inscription, token: Token, binding: Binding) -> Optional[Binding]:
    if len(inscription) != len(token):
        return None
    b = dict(binding)
    for item, atom in zip(inscription, token):
        if isinstance(item, str):
            if item in b:
                if atom_key(b[item]) != atom_key(atom):
                    return None
            else:
                b[item] = atom
        elif atom_key(item) != atom_key(atom):
            return None
    return b


def _instantiate(inscription, binding: Binding) -> Token:
    out = []
    for item in inscription:
        if isinstance(item, str):
            if item not in binding:
                raise FireError("unbound-variable",
                                "inscription variable %r unbound" % item)
            out.append(binding[item])
        else:
            out.append(item)
    return tuple(out)


def _guard_holds(t: Transition, binding: Binding) -> bool:
    if t.guard is None:
        return True
    try:
        return eval_expr(t.guard, binding)
    except EvalError:
        # A guard that cannot evaluate under this binding never enables.
        return False


def enabled(net: PrTNet, m: Marking) -> List[Tuple[str, Binding]]:
    """All (transition id, binding) pairs fireable in marking ``m``, sorted
    by transition id then by binding, for deterministic exploration.

    Binding enumeration takes each distinct token value at most once per
    arc, with multiset feasibility checked across arcs of the same place.
    """
    result = []
    for t in sorted(net.transitions, key=lambda t: natural_key(t.id)):
        in_arcs = net.input_arcs(t.id)
        found: List[Binding] = []

        def search(i: int, binding: Binding, taken: Counter):
            if i == len(in_arcs):
                if _guard_holds(t, binding):
                    found.append(binding)
                return
            arc = in_arcs[i]
            bag = m.get(arc.source, Counter())
            values = sorted({tok for tok, n in bag.items() if n > 0},
                            key=token_key)
            for token in values:
                key = (arc.source, token)
                if taken[key] + 1 > bag[token]:
                    continue
                b2 = _unify(arc.inscription, token, binding)
                if b2 is None:
                    continue
                taken[key] += 1
                search(i + 1, b2, taken)
                taken[key] -= 1

        search(0, {}, Counter())
        seen = set()
        for b in sorted(found, key=binding_key):
            k = binding_key(b)
            if k not in seen:
                seen.add(k)
                result.append((t.id, b))
    return result


def fire(net: PrTNet, m: Marking, tid: str, binding: Binding) -> Marking:
    """Fire ``tid`` under ``binding``; returns the successor marking."""
    t = net.transition(tid)
    if t is None:
        raise FireError("not-enabled", "no transition %r" % tid)
    if not _guard_holds(t, binding):
        raise FireError("not-enabled", "guard of %s fails" % tid)

    out = copy_marking(m)
    for arc in net.input_arcs(tid):
        token = _instantiate(arc.inscription, binding)
        bag = out.get(arc.source, Counter())
        if bag[token] <= 0:
            raise FireError("not-enabled",
                            "no token %r in place %s" % (token, arc.source))
        bag[token] -= 1
        if bag[token] == 0:
            del bag[token]
        out[arc.source] = bag
    for arc in net.output_arcs(tid):
        token = _instantiate(arc.inscription, binding)
        bag = out.setdefault(arc.target, Counter())
        bag[token] += 1
        place = net.place(arc.target)
        if place is not None and place.capacity > 0:
            if sum(bag.values()) > place.capacity:
                raise FireError("capacity-exceeded",
                                "place %s over capacity %d"
                                % (arc.target, place.capacity))
    return {pid: bag for pid, bag in out.items() if bag}


# ---------------------------------------------------------------------------
# Exploration


def reach_graph(net: PrTNet, bounds: Bounds = None) -> ReachGraph:
    """Breadth-first closure of the marking space, deduplicated by canonical
    form; expansion stops past max_depth/max_states (flagged, not fatal)."""
    bounds = bounds or Bounds()
    init = net.initial_marking()
    states: List[Marking] = [init]
    index = {canonical(init): 0}
    edges = []
    truncated = False
    queue = deque([(0, 0)])  # (state index, depth)
    while queue:
        si, depth = queue.popleft()
        moves = enabled(net, states[si])
        if depth >= bounds.max_depth:
            if moves:
                truncated = True
            continue
        for tid, binding in moves:
            succ = fire(net, states[si], tid, binding)
            key = canonical(succ)
            if key in index:
                ti = index[key]
            else:
                if len(states) >= bounds.max_states:
                    truncated = True
                    continue
                ti = len(states)
                index[key] = ti
                states.append(succ)
                queue.append((ti, depth + 1))
            edges.append((si, tid, binding, ti))
    return ReachGraph(states=states, edges=edges, initial=0,
                      truncated=truncated)


def test_tree(net: PrTNet, bounds: Bounds = None) -> TestTree:
    """Depth-first unfolding from the initial marking. A vertex becomes a
    leaf when its marking repeats an ancestor on its own path (round-trip),
    when nothing is enabled, or at the depth bound (flagged)."""
    bounds = bounds or Bounds()
    init = net.initial_marking()
    root = TreeVertex(transition=None, binding={}, marking=init)
    state = {"count": 1, "truncated": False}

    def expand(vertex: TreeVertex, path_keys, depth: int):
        moves = enabled(net, vertex.marking)
        if not moves:
            vertex.leaf_reason = "dead" if vertex.transition is not None else None
            return
        if depth >= bounds.max_depth:
            vertex.leaf_reason = "depth"
            state["truncated"] = True
            return
        for tid, binding in moves:
            if state["count"] >= bounds.max_states:
                state["truncated"] = True
                return
            succ = fire(net, vertex.marking, tid, binding)
            child = TreeVertex(transition=tid, binding=binding, marking=succ)
            vertex.children.append(child)
            state["count"] += 1
            key = canonical(succ)
            if key in path_keys:
                child.leaf_reason = "round-trip"
                continue
            expand(child, path_keys | {key}, depth + 1)

    expand(root, frozenset({canonical(init)}), 0)
    return TestTree(root=root, net=net, bounds=bounds,
                    truncated=state["truncated"])


def call_args(net: PrTNet, tid: str, binding: Binding) -> Tuple[Atom, ...]:
    """Data arguments of a firing: instantiated non-empty input-arc
    inscriptions in arc order (one argument per data arc)."""
    args = []
    for arc in net.input_arcs(tid):
        if arc.inscription:
            args.extend(_instantiate(arc.inscription, binding))
    return tuple(args)
