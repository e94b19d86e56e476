"""Shared test helpers: fixture loading, a seeded random-net generator, and
an independent brute-force reachability enumerator used as an oracle.

The brute-force enumerator deliberately reimplements the token game from
scratch (its own unification, its own guard evaluation, its own canonical
key) so that agreement with atcg.petri is meaningful.
"""

from __future__ import annotations

import itertools
import os
import random
from collections import Counter

from atcg import ingest, netgen
from atcg.exprs import And, Bool, Cmp, Int, Lit, Not, Or, Sym, Text, Var
from atcg.petri import Arc, Place, PrTNet, Transition

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                        os.pardir, "src", "atcg", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def fixture_bytes(name: str) -> bytes:
    with open(fixture_path(name), "rb") as fh:
        return fh.read()


def load_model(name: str):
    return ingest.parse_model_xml(fixture_bytes(name))


def build_fixture_net(name: str) -> PrTNet:
    data = fixture_bytes(name)
    cm, sm = ingest.parse_model_xml(data)
    return netgen.build_net(cm, sm, ingest.model_name(data))


# ---------------------------------------------------------------------------
# Acceptance reporting: one PASS/FAIL line per criterion, echoed after the
# run so they are visible in the terminal output.

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# ---------------------------------------------------------------------------
# Seeded random net generator (compile-clean by construction)

_ATOMS = [Sym("a"), Sym("b"), Int(1), Int(2)]
# Inscription constants exclude Sym: a bare identifier in an inscription
# denotes a variable, so a Sym constant would not survive a PNML round trip.
_INSC_ATOMS = [Int(1), Int(2), Text("a")]
_VARS = ["x", "y"]


def random_net(rng: random.Random, lively: bool = False) -> PrTNet:
    """A small random PrT net: <= 6 places, <= 6 transitions, <= 3 initial
    tokens, capacity 0 everywhere, output-arc variables bound by input arcs,
    guards only over input-arc variables.

    With lively=True, inscriptions are mostly empty (Default tokens) and the
    initial marking is Default-heavy, so most transitions can actually fire;
    used for replay-property runs that need many scenarios."""
    n_places = rng.randint(1, 6)
    places = [Place(id="p%d" % i, name="p%d" % i)
              for i in range(1, n_places + 1)]
    pids = [p.id for p in places]

    transitions = []
    arcs = []
    aid = 0
    for k in range(1, rng.randint(1, 6) + 1):
        tid = "t%d" % k
        n_in = rng.randint(1, 2)
        # Bias toward token-conserving transitions to keep state spaces small.
        n_out = rng.randint(0, n_in) if rng.random() < 0.8 else n_in + 1
        data_p = 0.3 if lively else 0.7
        in_vars = []
        for _ in range(n_in):
            aid += 1
            insc = []
            if rng.random() < data_p:  # arity 1, else the Default token
                if rng.random() < 0.6:
                    v = rng.choice(_VARS)
                    insc.append(v)
                    in_vars.append(v)
                else:
                    insc.append(rng.choice(_INSC_ATOMS))
            arcs.append(Arc(id="a%d" % aid, source=rng.choice(pids),
                            target=tid, inscription=tuple(insc)))
        for _ in range(n_out):
            aid += 1
            insc = []
            if rng.random() < data_p:
                if in_vars and rng.random() < 0.5:
                    insc.append(rng.choice(in_vars))
                else:
                    insc.append(rng.choice(_INSC_ATOMS))
            arcs.append(Arc(id="a%d" % aid, source=tid,
                            target=rng.choice(pids), inscription=tuple(insc)))
        guard = None
        if in_vars and rng.random() < 0.3:
            v = rng.choice(in_vars)
            # Text "a" equals Sym a under the cross-kind equality rule, so
            # this guard still matches Symbol tokens; Lit(Sym) is avoided
            # because its printed form would re-parse as a variable.
            guard = rng.choice([Cmp(">", Var(v), Lit(Int(0))),
                                Cmp("=", Var(v), Lit(Text("a")))])
        transitions.append(Transition(id=tid, name="T%d" % k, guard=guard))

    init = []
    for _ in range(rng.randint(1, 3)):
        arity = rng.choice([0, 0, 1] if lively else [0, 1, 1, 2])
        token = tuple(rng.choice(_ATOMS) for _ in range(arity))
        init.append((rng.choice(pids), token))
    return PrTNet(id="rnd", places=places, transitions=transitions,
                  arcs=arcs, init_decl=init)


# ---------------------------------------------------------------------------
# Independent brute-force reachability oracle

def bf_key(m: dict):
    """Canonical key over a dict place-id -> list of tokens."""
    return tuple(sorted((pid, tuple(sorted(toks, key=repr)))
                        for pid, toks in m.items() if toks))


def petri_state_key(marking) -> tuple:
    """Convert an atcg.petri Marking (place -> Counter) to bf_key form."""
    return bf_key({pid: list(bag.elements()) for pid, bag in marking.items()})


def _bf_eval(e, binding):
    """Independent guard evaluator. Raises ValueError on type errors (the
    token game treats that as guard-false)."""
    if isinstance(e, And):
        return _bf_eval(e.left, binding) and _bf_eval(e.right, binding)
    if isinstance(e, Or):
        return _bf_eval(e.left, binding) or _bf_eval(e.right, binding)
    if isinstance(e, Not):
        return not _bf_eval(e.operand, binding)
    if isinstance(e, Cmp):
        lhs = _bf_value(e.left, binding)
        rhs = _bf_value(e.right, binding)
        if e.op in ("=", "<>"):
            eq = _bf_equal(lhs, rhs)
            return eq if e.op == "=" else not eq
        if not (isinstance(lhs, Int) and isinstance(rhs, Int)):
            raise ValueError("ordering on non-integers")
        return {"<": lhs.value < rhs.value, "<=": lhs.value <= rhs.value,
                ">": lhs.value > rhs.value, ">=": lhs.value >= rhs.value}[e.op]
    if isinstance(e, Lit) and isinstance(e.atom, Bool):
        return e.atom.value
    raise ValueError("not a boolean expression")


def _bf_value(e, binding):
    if isinstance(e, Lit):
        return e.atom
    if isinstance(e, Var):
        if e.name not in binding:
            raise ValueError("unbound %s" % e.name)
        return binding[e.name]
    raise ValueError("not a term")


def _bf_equal(x, y):
    if isinstance(x, (Sym, Text)) and isinstance(y, (Sym, Text)):
        return (x.name if isinstance(x, Sym) else x.value) == \
               (y.name if isinstance(y, Sym) else y.value)
    return x == y


def _bf_successors(net: PrTNet, m: dict):
    succs = []
    for t in net.transitions:
        ins = [a for a in net.arcs if a.target == t.id]
        outs = [a for a in net.arcs if a.source == t.id]
        pools = [sorted(set(m.get(a.source, [])), key=repr) for a in ins]
        for combo in itertools.product(*pools):
            need = Counter(zip((a.source for a in ins), combo))
            if any(m.get(pid, []).count(tok) < cnt
                   for (pid, tok), cnt in need.items()):
                continue
            binding = {}
            ok = True
            for a, tok in zip(ins, combo):
                if len(a.inscription) != len(tok):
                    ok = False
                    break
                for item, val in zip(a.inscription, tok):
                    if isinstance(item, str):
                        if item in binding and binding[item] != val:
                            ok = False
                            break
                        binding[item] = val
                    elif item != val:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            if t.guard is not None:
                try:
                    if not _bf_eval(t.guard, binding):
                        continue
                except ValueError:
                    continue
            m2 = {pid: list(toks) for pid, toks in m.items()}
            for a, tok in zip(ins, combo):
                m2[a.source].remove(tok)
            for a in outs:
                out_tok = tuple(binding[i] if isinstance(i, str) else i
                                for i in a.inscription)
                m2.setdefault(a.target, []).append(out_tok)
            succs.append(m2)
    return succs


def brute_force_states(net: PrTNet, max_depth: int) -> set:
    """All canonical states reachable within max_depth firings, by recursive
    enumeration with a best-depth memo (re-expands on shorter rediscovery)."""
    init: dict = {}
    for pid, token in net.init_decl:
        init.setdefault(pid, []).append(token)
    best: dict = {}

    def go(m, depth):
        k = bf_key(m)
        if k in best and best[k] <= depth:
            return
        best[k] = depth
        if depth >= max_depth:
            return
        for succ in _bf_successors(net, m):
            go(succ, depth + 1)

    go(init, 0)
    return set(best)
