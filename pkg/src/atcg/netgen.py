"""Compilation of a validated design model into a predicate/transition net.

Stages: per-message node construction, node relationship table (NRT),
combined-fragment tree, and assembly. Assembly joins sequential nodes by
fusing the predecessor's output place with the successor's input place and
expands fragments via a fixed mapping:

* alt    - each operand chain runs entry->exit, with the operand guard
           conjoined onto the operand's first transition(s); an unguarded
           operand gets the negated disjunction of its siblings' guards; an
           empty else operand becomes a guarded silent transition.
* opt    - alt over (guard, body) and an empty else.
* loop   - body entry->bodyExit, silent back-edge guarded by the loop guard,
           silent exit guarded by its negation; an optional unroll budget
           seeds counter tokens consumed by the back-edge.
* par    - silent fork into every operand, silent join out of them.
* break  - guarded body routed to the net's final place, plus a silent
           guarded continue.

Message arguments are read from data places named after the receiving
operation's parameters through read-arc pairs (test without consumption);
argument atoms are seeded into those places in the initial marking.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .exprs import And, Expr, Not, Or, Token, format_expr, free_vars
from .model import (ClassModel, CombinedFragment, Message, SequenceModel)
from .petri import Arc, Place, PrTNet, Transition, compile_net, natural_key


class NetgenError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__("%s: %s" % (code, message))
        self.code = code


@dataclass
class Node:
    """Per-message bundle of net elements plus its data-token requirements."""
    id: str
    message_ref: str
    in_place: str
    out_place: str
    transition: str
    in_arc: str
    out_arc: str
    tokens: List[Tuple[str, Token]] = field(default_factory=list)
    transition_name: str = ""
    guard: Optional[Expr] = None
    annotation: Optional[str] = None


@dataclass
class NRTRow:
    node_id: str
    predecessors: List[str] = field(default_factory=list)
    successors: List[str] = field(default_factory=list)
    relation: str = "sequence"  # sequence | fragment-entry | fragment-exit


@dataclass
class NRT:
    rows: List[NRTRow] = field(default_factory=list)
    association_edges: List[Tuple[str, str]] = field(default_factory=list)


@dataclass
class CFLeaf:
    node_id: str


@dataclass
class CFOperand:
    guard: Optional[Expr]
    items: List["CFItem"] = field(default_factory=list)


@dataclass
class CFFragment:
    fragment_id: str
    operator: str
    operands: List[CFOperand] = field(default_factory=list)
    loop_min: Optional[int] = None
    loop_max: Optional[int] = None


CFItem = Union[CFLeaf, CFFragment]


@dataclass
class CFTree:
    """Implicit sequential root over outside-fragment nodes and fragments."""
    items: List[CFItem] = field(default_factory=list)


def _messages_in_order(body):
    for el in body:
        if isinstance(el, Message):
            yield el
        else:
            for op in el.operands:
                yield from _messages_in_order(op.body)


def _lifeline_classes(sm: SequenceModel) -> Dict[str, str]:
    return {l.id: l.class_name for l in sm.lifelines}


def build_nodes(sm: SequenceModel, cm: ClassModel) -> List[Node]:
    """One node per message, fragments descended into, with deterministic
    P<k>/T<k>/A<k> ids in traversal order."""
    classes = _lifeline_classes(sm)
    nodes = []
    for k, msg in enumerate(_messages_in_order(sm.body), start=1):
        cdef = cm.class_def(classes[msg.to_lifeline])
        op = cdef.operation(msg.operation_name)
        tokens = [(param[0], (atom,)) for param, atom in zip(op.params, msg.args)]
        nodes.append(Node(
            id="n%d" % k,
            message_ref=msg.id,
            in_place="P%d" % (2 * k - 1),
            out_place="P%d" % (2 * k),
            transition="T%d" % k,
            in_arc="A%d" % (2 * k - 1),
            out_arc="A%d" % (2 * k),
            tokens=tokens,
            transition_name=op.name,
            guard=op.pre,
            annotation=format_expr(op.post) if op.post is not None else None,
        ))
    return nodes


def _first_messages(body):
    if not body:
        return []
    el = body[0]
    if isinstance(el, Message):
        return [el]
    out = []
    for op in el.operands:
        out.extend(_first_messages(op.body))
    return out


def _last_messages(body):
    if not body:
        return []
    el = body[-1]
    if isinstance(el, Message):
        return [el]
    out = []
    for op in el.operands:
        out.extend(_last_messages(op.body))
    return out


def build_nrt(nodes: List[Node], cm: ClassModel, sm: SequenceModel) -> NRT:
    """Relationship table: sequence links between neighbours at the same
    nesting level, fragment-entry/exit links across fragment boundaries, and
    association edges between nodes whose classes are associated."""
    by_msg = {n.message_ref: n.id for n in nodes}
    rows: Dict[Tuple[str, str], NRTRow] = {}

    def row(node_id, relation):
        key = (node_id, relation)
        if key not in rows:
            rows[key] = NRTRow(node_id=node_id, relation=relation)
        return rows[key]

    def link(a_msg, b_msg, relation):
        a, b = by_msg[a_msg.id], by_msg[b_msg.id]
        row(a, relation).successors.append(b)
        row(b, relation).predecessors.append(a)

    def walk(body):
        level_msgs = [el for el in body if isinstance(el, Message)]
        for a, b in zip(level_msgs, level_msgs[1:]):
            link(a, b, "sequence")
        for i, el in enumerate(body):
            if isinstance(el, Message):
                continue
            prev_msg = next((x for x in reversed(body[:i])
                             if isinstance(x, Message)), None)
            next_msg = next((x for x in body[i + 1:]
                             if isinstance(x, Message)), None)
            for op in el.operands:
                if prev_msg is not None:
                    for f in _first_messages(op.body):
                        link(prev_msg, f, "fragment-entry")
                if next_msg is not None:
                    for l in _last_messages(op.body):
                        link(l, next_msg, "fragment-exit")
                walk(op.body)

    walk(sm.body)

    # every node gets at least a (possibly empty) sequence row
    for n in nodes:
        row(n.id, "sequence")

    associated = set()
    for a in cm.associations:
        associated.add((a.from_class, a.to_class))
        associated.add((a.to_class, a.from_class))
    classes = _lifeline_classes(sm)
    msg_class = {}
    for msg in _messages_in_order(sm.body):
        msg_class[by_msg[msg.id]] = (classes[msg.from_lifeline],
                                     classes[msg.to_lifeline])
    edges = []
    ids = [n.id for n in nodes]
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            ca, cb = msg_class[a], msg_class[b]
            if any((x, y) in associated for x in ca for y in cb):
                edges.append((a, b))

    ordered = sorted(rows.values(),
                     key=lambda r: (natural_key(r.node_id), r.relation))
    return NRT(rows=ordered, association_edges=edges)


def build_cfn(sm: SequenceModel, nodes: List[Node], nrt: NRT) -> CFTree:
    """Fragment tree over message leaves, mirroring the sequence body."""
    by_msg = {n.message_ref: n.id for n in nodes}

    def items_of(body):
        out = []
        for el in body:
            if isinstance(el, Message):
                out.append(CFLeaf(node_id=by_msg[el.id]))
            else:
                out.append(CFFragment(
                    fragment_id=el.id,
                    operator=el.operator,
                    operands=[CFOperand(guard=op.guard, items=items_of(op.body))
                              for op in el.operands],
                    loop_min=el.loop_min,
                    loop_max=el.loop_max,
                ))
        return out

    return CFTree(items=items_of(sm.body))


def _not_or(guards: List[Expr]) -> Expr:
    acc = guards[0]
    for g in guards[1:]:
        acc = Or(acc, g)
    return Not(acc)


class _Builder:
    def __init__(self, nodes: List[Node], loop_unroll: Optional[int]):
        self.nodes = {n.id: n for n in nodes}
        self.places: Dict[str, Place] = {}
        self.place_order: Dict[str, int] = {}
        self.transitions: Dict[str, Transition] = {}
        self.arcs: List[Arc] = []
        self.parent: Dict[str, str] = {}
        self.init: List[Tuple[str, Token]] = []
        self.seeded = set()
        self.pending_final: List[str] = []
        self.loop_unroll = loop_unroll
        top = 2 * len(nodes)
        self.place_counter = top
        self.arc_counter = top

    # --- element factories -------------------------------------------------

    def add_place(self, pid: str) -> str:
        if pid not in self.places:
            self.place_order[pid] = len(self.place_order)
            self.places[pid] = Place(id=pid, name=pid)
        return pid

    def fresh_place(self) -> str:
        self.place_counter += 1
        return self.add_place("P%d" % self.place_counter)

    def add_arc(self, source: str, target: str, inscription=()):
        self.arc_counter += 1
        self.arcs.append(Arc(id="A%d" % self.arc_counter, source=source,
                             target=target, inscription=tuple(inscription)))

    def add_transition(self, t: Transition):
        self.transitions[t.id] = t

    # --- place fusion ------------------------------------------------------

    def find(self, pid: str) -> str:
        while self.parent.get(pid, pid) != pid:
            pid = self.parent[pid]
        return pid

    def fuse(self, a: str, b: str):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # keep the earlier-created place id
        if self.place_order[ra] <= self.place_order[rb]:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb

    # --- data places -------------------------------------------------------

    def data_arcs(self, tid: str, tokens: List[Tuple[str, Token]]):
        for place_name, token in tokens:
            self.add_place(place_name)
            self.add_arc(place_name, tid, (place_name,))
            self.add_arc(tid, place_name, (place_name,))
            if (place_name, token) not in self.seeded:
                self.seeded.add((place_name, token))
                self.init.append((place_name, token))

    def ensure_guard_access(self, tid: str, guard: Expr):
        """Give a transition read access to data places named after guard
        variables it does not already bind."""
        bound = set()
        for arc in self.arcs:
            if arc.target == tid:
                bound |= {x for x in arc.inscription if isinstance(x, str)}
        for v in sorted(free_vars(guard) - bound):
            if v in self.places:
                self.add_arc(v, tid, (v,))
                self.add_arc(tid, v, (v,))

    def conjoin(self, tids: List[str], guard: Optional[Expr]):
        if guard is None:
            return
        for tid in tids:
            t = self.transitions[tid]
            merged = guard if t.guard is None else And(guard, t.guard)
            self.transitions[tid] = dataclasses.replace(t, guard=merged)
            self.ensure_guard_access(tid, guard)

    # --- silent transitions ------------------------------------------------

    def tau(self, frag: CFFragment, counters: Dict[str, int],
            guard: Optional[Expr]) -> str:
        counters[frag.fragment_id] = counters.get(frag.fragment_id, 0) + 1
        tid = "tau_%s_%d" % (frag.fragment_id, counters[frag.fragment_id])
        self.add_transition(Transition(id=tid, name=tid, guard=guard,
                                       silent=True))
        return tid


def assemble_net(nodes: List[Node], nrt: NRT, tree: CFTree, model_name: str,
                 loop_unroll: Optional[int] = None) -> PrTNet:
    """Join nodes and fragment expansions into one net; the initial marking
    holds one Default token in the first control place plus the seeded data
    tokens."""
    b = _Builder(nodes, loop_unroll)
    tau_counters: Dict[str, int] = {}

    def emit_leaf(leaf: CFLeaf):
        node = b.nodes[leaf.node_id]
        b.add_place(node.in_place)
        b.add_place(node.out_place)
        b.add_transition(Transition(id=node.transition,
                                    name=node.transition_name,
                                    guard=node.guard,
                                    annotation=node.annotation))
        b.arcs.append(Arc(id=node.in_arc, source=node.in_place,
                          target=node.transition))
        b.arcs.append(Arc(id=node.out_arc, source=node.transition,
                          target=node.out_place))
        b.data_arcs(node.transition, node.tokens)
        if node.guard is not None:
            b.ensure_guard_access(node.transition, node.guard)
        return node.in_place, node.out_place, [node.transition]

    def emit_items(items: List[CFItem]):
        entry = exit_ = None
        firsts: List[str] = []
        for i, item in enumerate(items):
            e, x, f = emit_item(item)
            if i == 0:
                entry, firsts = e, f
            else:
                b.fuse(exit_, e)
            exit_ = x
        return entry, exit_, firsts

    def alt_like(frag: CFFragment, operands: List[CFOperand],
                 entry: str, exit_: str, final_routing=None):
        """Common expansion for alt/opt/break: guarded operand chains plus
        guarded silent shortcuts for empty operands."""
        explicit = [op.guard for op in operands if op.guard is not None]
        firsts: List[str] = []
        for op in operands:
            g = op.guard
            if g is None and explicit and len(explicit) == len(operands) - 1:
                g = _not_or(explicit)
            if not op.items:
                tid = b.tau(frag, tau_counters, g)
                if g is not None:
                    b.ensure_guard_access(tid, g)
                b.add_arc(entry, tid)
                b.add_arc(tid, exit_)
                firsts.append(tid)
                continue
            e, x, f = emit_items(op.items)
            b.fuse(entry, e)
            if final_routing is not None:
                b.pending_final.append(x)
            else:
                b.fuse(x, exit_)
            b.conjoin(f, g)
            firsts.extend(f)
        return firsts

    def emit_item(item: CFItem):
        if isinstance(item, CFLeaf):
            return emit_leaf(item)
        frag = item
        entry = b.fresh_place()
        exit_ = b.fresh_place()
        if frag.operator == "alt":
            firsts = alt_like(frag, frag.operands, entry, exit_)
        elif frag.operator == "opt":
            op = frag.operands[0]
            firsts = alt_like(frag, [op, CFOperand(guard=None, items=[])],
                              entry, exit_)
        elif frag.operator == "break":
            op = frag.operands[0]
            firsts = alt_like(frag, [op, CFOperand(guard=None, items=[])],
                              entry, exit_, final_routing=True)
        elif frag.operator == "loop":
            op = frag.operands[0]
            e, body_exit, firsts = emit_items(op.items)
            b.fuse(entry, e)
            g = op.guard
            back = b.tau(frag, tau_counters, g)
            if g is not None:
                b.ensure_guard_access(back, g)
            b.add_arc(body_exit, back)
            b.add_arc(back, entry)
            out = b.tau(frag, tau_counters, Not(g) if g is not None else None)
            if g is not None:
                b.ensure_guard_access(out, Not(g))
            b.add_arc(body_exit, out)
            b.add_arc(out, exit_)
            budget = b.loop_unroll if b.loop_unroll is not None else frag.loop_max
            if budget is not None:
                cnt = b.add_place("cnt_%s" % frag.fragment_id)
                for _ in range(budget):
                    b.init.append((cnt, ()))
                b.add_arc(cnt, back)
        elif frag.operator == "par":
            fork = b.tau(frag, tau_counters, None)
            b.add_arc(entry, fork)
            join = b.tau(frag, tau_counters, None)
            b.add_arc(join, exit_)
            for op in frag.operands:
                e, x, _ = emit_items(op.items)
                b.add_arc(fork, e)
                b.add_arc(x, join)
            firsts = [fork]
        else:
            raise NetgenError("bad-operator",
                              "unsupported fragment operator %r" % frag.operator)
        return entry, exit_, firsts

    entry, exit_, _ = emit_items(tree.items)
    for x in b.pending_final:
        b.fuse(x, exit_)

    # collapse fused places
    control_init = b.find(entry)
    places = []
    for pid, place in sorted(b.places.items(),
                             key=lambda kv: b.place_order[kv[0]]):
        if b.find(pid) == pid:
            places.append(place)
    arcs = [dataclasses.replace(
        a,
        source=b.find(a.source) if a.source in b.places else a.source,
        target=b.find(a.target) if a.target in b.places else a.target)
        for a in b.arcs]

    init_decl = [(control_init, ())]
    init_decl += [(b.find(pid), token) for pid, token in b.init]

    # left-to-right layout
    placed = sorted(places, key=lambda p: natural_key(p.id))
    places = [dataclasses.replace(p, position=(30 + 195 * i, 105))
              for i, p in enumerate(placed)]
    trans = sorted(b.transitions.values(), key=lambda t: natural_key(t.id))
    trans = [dataclasses.replace(t, position=(30 + 195 * i, 210))
             for i, t in enumerate(trans)]
    arcs = sorted(arcs, key=lambda a: natural_key(a.id))

    net = PrTNet(id=model_name, places=places, transitions=trans, arcs=arcs,
                 init_decl=init_decl)

    report = compile_net(net)
    if not report.ok:
        code = report.errors[0].code
        raise NetgenError(code if code == "unbound-guard-variable"
                          else "assembly-error",
                          "; ".join(report.lines()))
    return net


def build_net(cm: ClassModel, sm: SequenceModel, model_name: str,
              loop_unroll: Optional[int] = None) -> PrTNet:
    """Full compilation pipeline on an already-validated model."""
    nodes = build_nodes(sm, cm)
    nrt = build_nrt(nodes, cm, sm)
    tree = build_cfn(sm, nodes, nrt)
    return assemble_net(nodes, nrt, tree, model_name, loop_unroll=loop_unroll)
