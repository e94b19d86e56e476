"""Command-line entry point for the model-to-test pipeline.

Exit codes: 0 ok, 1 usage, 2 parse error, 3 validation/compile error,
4 exploration bounds exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import codegen, ingest, netgen, pnml, report, server, sim
from .model import validate_model
from .petri import (Bounds, FireError, PrTNet, compile_net, format_binding,
                    format_marking, reach_graph, test_tree)
from .testgen import (format_call, format_model_tests, maximal_scenarios,
                      scenarios)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_BOUNDS = 4


def _err(msg: str):
    print(msg, file=sys.stderr)


def _read_file(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _load_net(path: str) -> PrTNet:
    return pnml.read_pnml(_read_file(path))


def _bounds(args) -> Bounds:
    return Bounds(max_depth=args.max_depth, max_states=args.max_states,
                  loop_unroll=getattr(args, "loop_unroll", None))


def _build_net_from_model(path: str, loop_unroll=None):
    data = _read_file(path)
    name = ingest.model_name(data)
    cm, sm = ingest.parse_model_xml(data)
    rep = validate_model(cm, sm)
    if not rep.ok:
        for line in rep.lines():
            _err(line)
        raise SystemExit(EXIT_INVALID)
    return netgen.build_net(cm, sm, name, loop_unroll=loop_unroll)


def cmd_validate(args) -> int:
    data = _read_file(args.model)
    cm, sm = ingest.parse_model_xml(data)
    rep = validate_model(cm, sm)
    for line in rep.lines():
        print(line)
    if rep.ok:
        print("ok: 0 errors, %d warnings" % len(rep.warnings))
        return EXIT_OK
    return EXIT_INVALID


def cmd_build(args) -> int:
    net = _build_net_from_model(args.model, loop_unroll=args.loop_unroll)
    doc = pnml.write_pnml(net)
    with open(args.output, "wb") as fh:
        fh.write(doc)
    _err("wrote %s" % args.output)
    return EXIT_OK


def cmd_compile(args) -> int:
    net = _load_net(args.net)
    rep = compile_net(net)
    for line in rep.lines():
        print(line)
    if rep.ok:
        print("ok: %d places, %d transitions, %d arcs"
              % (len(net.places), len(net.transitions), len(net.arcs)))
        return EXIT_OK
    return EXIT_INVALID


def _require_clean(net: PrTNet):
    rep = compile_net(net)
    if not rep.ok:
        for line in rep.lines():
            _err(line)
        raise SystemExit(EXIT_INVALID)


def cmd_reach(args) -> int:
    net = _load_net(args.net)
    _require_clean(net)
    graph = reach_graph(net, _bounds(args))
    print("states: %d" % len(graph.states))
    print("edges: %d" % len(graph.edges))
    if graph.truncated:
        print("bounds-exceeded")
    for i, m in enumerate(graph.states):
        print("m%d: %s" % (i, format_marking(m)))
    for si, tid, binding, ti in graph.edges:
        b = format_binding(binding) if binding else ""
        print("m%d -%s%s-> m%d" % (si, tid, b, ti))
    return EXIT_BOUNDS if graph.truncated else EXIT_OK


def cmd_tree(args) -> int:
    net = _load_net(args.net)
    _require_clean(net)
    tree = test_tree(net, _bounds(args))
    by_id = {t.id: t for t in net.transitions}
    print("root: %s" % format_marking(tree.root.marking))

    from .petri import call_args

    def show(vertex, depth):
        for child in vertex.children:
            t = by_id[child.transition]
            label = format_call(t.name, call_args(net, child.transition,
                                                  child.binding))
            suffix = " [%s]" % child.leaf_reason if child.leaf_reason else ""
            print("%s%s -> %s%s" % ("  " * depth, label,
                                    format_marking(child.marking), suffix))
            show(child, depth + 1)

    show(tree.root, 1)
    if tree.truncated:
        print("bounds-exceeded")
        return EXIT_BOUNDS
    return EXIT_OK


def cmd_tests(args) -> int:
    net = _load_net(args.net)
    _require_clean(net)
    tree = test_tree(net, _bounds(args))
    suite = scenarios(tree)
    sys.stdout.write(format_model_tests(suite, maximal_only=not args.all))
    return EXIT_BOUNDS if tree.truncated else EXIT_OK


def cmd_code(args) -> int:
    net = _load_net(args.net)
    _require_clean(net)
    tree = test_tree(net, _bounds(args))
    suite = scenarios(tree)
    if not args.all:
        suite = maximal_scenarios(suite)
    script = codegen.render(suite, args.template)
    out = args.output or script.file_name
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(script.body)
    print(out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    net = _load_net(args.net)
    _require_clean(net)
    session = sim.new_session(net)
    by_id = {t.id: t for t in net.transitions}

    from .petri import call_args

    while True:
        print("marking: %s" % format_marking(session.current))
        if session.enabled_cache:
            print("enabled:")
            for i, (tid, binding) in enumerate(session.enabled_cache):
                t = by_id[tid]
                print("  %d. %s" % (i, format_call(
                    t.name, call_args(net, tid, binding))))
        else:
            print("enabled: none")
        line = sys.stdin.readline()
        if not line:
            return EXIT_OK
        cmd = line.strip()
        if cmd in ("q", "quit", "exit"):
            return EXIT_OK
        try:
            choice = int(cmd) if cmd.isdigit() else cmd
            session = sim.sim_step(session, choice)
        except (sim.BadChoiceError, FireError) as exc:
            _err(str(exc))


def cmd_serve(args) -> int:
    net = _load_net(args.net)
    _require_clean(net)
    port = int(os.environ.get("ATCG_PORT", args.port))
    _err("serving on http://127.0.0.1:%d" % port)
    server.serve(net, port)
    return EXIT_OK


def cmd_report(args) -> int:
    net = _load_net(args.net)
    _require_clean(net)
    for path in report.write_report(net, args.output, _bounds(args)):
        print(path)
    return EXIT_OK


def _add_bounds(p):
    p.add_argument("--max-depth", type=int, default=20)
    p.add_argument("--max-states", type=int, default=10000)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atcg",
        description="Compile design models into predicate/transition nets "
                    "and generate reachability-based tests.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a design model")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="compile a design model to a net file")
    p.add_argument("model")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--loop-unroll", type=int, default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("compile", help="syntax-check a net file")
    p.add_argument("net")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("reach", help="print the reachability graph")
    p.add_argument("net")
    _add_bounds(p)
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("tree", help="print the round-trip test tree")
    p.add_argument("net")
    _add_bounds(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("tests", help="print model-level tests")
    p.add_argument("net")
    p.add_argument("--all", action="store_true",
                   help="include non-maximal scenarios")
    _add_bounds(p)
    p.set_defaults(func=cmd_tests)

    p = sub.add_parser("code", help="render a test script")
    p.add_argument("net")
    p.add_argument("--template", default="fixture-style")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--all", action="store_true",
                   help="render non-maximal scenarios too")
    _add_bounds(p)
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("simulate", help="interactive token game")
    p.add_argument("net")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="HTTP bridge for the browser UI")
    p.add_argument("net")
    p.add_argument("--port", type=int, default=8008)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("report", help="write delimited output and figures")
    p.add_argument("net")
    p.add_argument("-o", "--output", required=True)
    _add_bounds(p)
    p.set_defaults(func=cmd_report)

    return parser


def run(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ingest.IngestError, pnml.PnmlError) as exc:
        _err(str(exc))
        return EXIT_PARSE
    except netgen.NetgenError as exc:
        _err(str(exc))
        return EXIT_INVALID
    except codegen.CodegenError as exc:
        _err(str(exc))
        return EXIT_INVALID
    except FileNotFoundError as exc:
        _err(str(exc))
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
