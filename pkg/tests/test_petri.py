"""Token-game semantics, reachability, and the round-trip test tree."""

import random

import pytest

from conftest import (brute_force_states, build_fixture_net, fixture_bytes,
                      petri_state_key, random_net)

from atcg import pnml
from atcg.exprs import Int, Sym, parse_expr
from atcg.petri import (Arc, Bounds, FireError, Place, PrTNet, Transition,
                        canonical, compile_net, enabled, fire, reach_graph)
from atcg.petri import test_tree as build_tree  # avoid pytest collection


def _coffee_net():
    return pnml.read_pnml(fixture_bytes("coffee-net.xml"))


# ---------------------------------------------------------------------------
# compile_net

def test_login_net_compiles_clean():
    assert compile_net(build_fixture_net("login.xml")).errors == []


def test_nonbipartite_arc():
    net = PrTNet(id="n", places=[Place("p", "p"), Place("q", "q")],
                 arcs=[Arc("a1", "p", "q")])
    codes = [f.code for f in compile_net(net).errors]
    assert codes == ["nonbipartite-arc"]


def test_unbound_guard_variable():
    net = PrTNet(id="n", places=[Place("p", "p")],
                 transitions=[Transition("t", "t",
                                         guard=parse_expr("z > 0"))],
                 arcs=[Arc("a1", "p", "t")])
    codes = [f.code for f in compile_net(net).errors]
    assert codes == ["unbound-guard-variable"]


def test_duplicate_and_dangling():
    net = PrTNet(id="n", places=[Place("p", "p"), Place("p", "p")],
                 transitions=[Transition("t", "t")],
                 arcs=[Arc("a1", "p", "ghost")])
    codes = sorted(f.code for f in compile_net(net).errors)
    assert codes == ["dangling-arc", "duplicate-id"]


def test_capacity_violation_in_init():
    net = PrTNet(id="n", places=[Place("p", "p", capacity=1)],
                 init_decl=[("p", ()), ("p", ())])
    codes = [f.code for f in compile_net(net).errors]
    assert codes == ["capacity-exceeded"]


# ---------------------------------------------------------------------------
# enabled

def test_login_initial_enabled():
    net = build_fixture_net("login.xml")
    assert enabled(net, net.initial_marking()) == \
        [("T1", {"name": Sym("UID")})]


def test_empty_marking_nothing_enabled():
    net = build_fixture_net("login.xml")
    assert enabled(net, {}) == []


def test_guard_filters_bindings():
    net = PrTNet(id="n", places=[Place("p", "p")],
                 transitions=[Transition("t", "t",
                                         guard=parse_expr("x > 1"))],
                 arcs=[Arc("a1", "p", "t", inscription=("x",))],
                 init_decl=[("p", (Int(1),)), ("p", (Int(2),))])
    assert enabled(net, net.initial_marking()) == [("t", {"x": Int(2)})]


def test_enabled_ordering_deterministic():
    net = _coffee_net()
    m = net.initial_marking()
    moves = enabled(net, m)
    assert moves == [("T1", {}), ("T3", {})]


# ---------------------------------------------------------------------------
# fire

def test_fire_read_arc_conserves_data_places():
    net = build_fixture_net("login.xml")
    m0 = net.initial_marking()
    m1 = fire(net, m0, "T1", {"name": Sym("UID")})
    # control advanced, data place restored
    assert m1["name"][(Sym("UID"),)] == 1
    assert "P1" not in m1 or not m1["P1"]
    assert m1["P2"][()] == 1


def test_fire_zero_arity():
    net = _coffee_net()
    m1 = fire(net, net.initial_marking(), "T1", {})
    assert canonical(m1) == (("j", ((),)),)


def test_fire_disabled_raises():
    net = _coffee_net()
    with pytest.raises(FireError) as exc:
        fire(net, net.initial_marking(), "T4", {})
    assert exc.value.code == "not-enabled"


def test_fire_capacity_exceeded():
    net = PrTNet(id="n",
                 places=[Place("p", "p"), Place("q", "q", capacity=1)],
                 transitions=[Transition("t", "t")],
                 arcs=[Arc("a1", "p", "t"), Arc("a2", "t", "q")],
                 init_decl=[("p", ()), ("p", ()), ("q", ())])
    with pytest.raises(FireError) as exc:
        fire(net, net.initial_marking(), "t", {})
    assert exc.value.code == "capacity-exceeded"


# ---------------------------------------------------------------------------
# canonical

def test_canonical_multiset_order_independent():
    from collections import Counter
    a = {"p": Counter({(Int(2),): 1, (Int(1),): 1})}
    b = {"p": Counter({(Int(1),): 1, (Int(2),): 1})}
    assert canonical(a) == canonical(b)


def test_canonical_elides_empty_places():
    from collections import Counter
    assert canonical({}) == canonical({"p": Counter()})


# ---------------------------------------------------------------------------
# reach_graph

def test_coffee_reach():
    g = reach_graph(_coffee_net(), Bounds())
    assert len(g.states) == 9
    assert len(g.edges) == 11
    assert not g.truncated


def test_dead_net_single_state():
    net = PrTNet(id="n", places=[Place("p", "p")],
                 transitions=[Transition("t", "t")],
                 arcs=[Arc("a1", "p", "t")])
    g = reach_graph(net, Bounds())
    assert len(g.states) == 1 and g.edges == []


def test_two_independent_transitions_four_states():
    net = PrTNet(id="n",
                 places=[Place(p, p) for p in ("p1", "p2", "q1", "q2")],
                 transitions=[Transition("t1", "t1"), Transition("t2", "t2")],
                 arcs=[Arc("a1", "p1", "t1"), Arc("a2", "t1", "q1"),
                       Arc("a3", "p2", "t2"), Arc("a4", "t2", "q2")],
                 init_decl=[("p1", ()), ("p2", ())])
    g = reach_graph(net, Bounds())
    assert len(g.states) == 4
    # Agrees with the independent brute-force enumerator.
    assert {petri_state_key(m) for m in g.states} == \
        brute_force_states(net, 20)


def test_reach_edges_replay():
    g = reach_graph(_coffee_net(), Bounds())
    net = _coffee_net()
    for si, tid, binding, ti in g.edges:
        assert canonical(fire(net, g.states[si], tid, binding)) == \
            canonical(g.states[ti])


def test_bounds_truncation_flag():
    # T1/T2 ping-pong net explored with depth 1 leaves moves unexpanded.
    g = reach_graph(_coffee_net(), Bounds(max_depth=1))
    assert g.truncated


def test_random_nets_against_brute_force():
    for seed in range(30):
        net = random_net(random.Random(7000 + seed))
        g = reach_graph(net, Bounds(max_depth=8, max_states=100000))
        assert {petri_state_key(m) for m in g.states} == \
            brute_force_states(net, 8), "seed %d" % seed


# ---------------------------------------------------------------------------
# test_tree

def test_coffee_tree_eleven_vertices():
    tree = build_tree(_coffee_net(), Bounds())

    def count(v):
        return sum(1 + count(c) for c in v.children)

    assert count(tree.root) == 11


def test_login_tree_single_chain():
    tree = build_tree(build_fixture_net("login.xml"), Bounds())
    depth = 0
    v = tree.root
    while v.children:
        assert len(v.children) == 1
        v = v.children[0]
        depth += 1
    assert depth == 3
    assert v.leaf_reason == "dead"


def test_self_loop_round_trip_leaf():
    net = PrTNet(id="n", places=[Place("p", "p")],
                 transitions=[Transition("t", "t")],
                 arcs=[Arc("a1", "p", "t"), Arc("a2", "t", "p")],
                 init_decl=[("p", ())])
    tree = build_tree(net, Bounds())
    assert len(tree.root.children) == 1
    child = tree.root.children[0]
    assert child.leaf_reason == "round-trip"
    assert child.children == []


def test_tree_markings_subset_of_reach_states():
    net = _coffee_net()
    states = {canonical(m) for m in reach_graph(net, Bounds()).states}
    tree = build_tree(net, Bounds())

    def walk(v):
        assert canonical(v.marking) in states
        for c in v.children:
            walk(c)

    walk(tree.root)


def test_depth_bound_flagged():
    tree = build_tree(_coffee_net(), Bounds(max_depth=1))
    assert tree.truncated
    assert any(c.leaf_reason == "depth" for c in tree.root.children)
