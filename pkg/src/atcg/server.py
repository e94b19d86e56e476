"""Local HTTP bridge exposing the net, an interactive simulation session,
the test tree, and formatted model-level tests as JSON for the browser UI."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .exprs import format_atom, format_expr
from .petri import Bounds, PrTNet, test_tree
from .sim import BadChoiceError, new_session, sim_step
from .testgen import format_call, format_model_tests, scenarios


def _token_str(token) -> str:
    if not token:
        return "Default"
    return "(%s)" % ",".join(format_atom(a) for a in token)


def _marking_json(m):
    return {pid: sorted(_token_str(t) for t in bag.elements())
            for pid, bag in m.items() if bag}


def _binding_json(b):
    return {k: format_atom(v) for k, v in sorted(b.items())}


class Bridge:
    """Holds the immutable net plus one isolated session per client key."""

    def __init__(self, net: PrTNet):
        self.net = net
        self.sessions = {}
        self.lock = threading.Lock()

    def session(self, key: str):
        with self.lock:
            if key not in self.sessions:
                self.sessions[key] = new_session(self.net)
            return self.sessions[key]

    def set_session(self, key: str, s):
        with self.lock:
            self.sessions[key] = s

    def net_json(self):
        net = self.net
        return {
            "id": net.id,
            "places": [{"id": p.id, "name": p.name, "capacity": p.capacity,
                        "position": list(p.position)} for p in net.places],
            "transitions": [{"id": t.id, "name": t.name,
                             "guard": format_expr(t.guard)
                             if t.guard is not None else None,
                             "silent": t.silent,
                             "position": list(t.position)}
                            for t in net.transitions],
            "arcs": [{"id": a.id, "source": a.source, "target": a.target,
                      "inscription": [x if isinstance(x, str)
                                      else format_atom(x)
                                      for x in a.inscription]}
                     for a in net.arcs],
        }

    def state_json(self, key: str):
        s = self.session(key)
        by_id = {t.id: t for t in self.net.transitions}

        def entry(i, tid, binding):
            from .petri import call_args
            t = by_id[tid]
            return {"index": i, "transition": tid, "name": t.name,
                    "silent": t.silent,
                    "binding": _binding_json(binding),
                    "label": format_call(t.name,
                                         call_args(self.net, tid, binding))}

        return {
            "marking": _marking_json(s.current),
            "enabled": [entry(i, tid, b)
                        for i, (tid, b) in enumerate(s.enabled_cache)],
            "history": [entry(i, tid, b)
                        for i, (tid, b) in enumerate(s.history)],
        }

    def tree_json(self, bounds: Bounds):
        from .petri import call_args
        tree = test_tree(self.net, bounds)
        by_id = {t.id: t for t in self.net.transitions}

        def vertex(v):
            out = {"marking": _marking_json(v.marking),
                   "leaf": v.leaf_reason,
                   "children": [vertex(c) for c in v.children]}
            if v.transition is not None:
                t = by_id[v.transition]
                out.update({"transition": v.transition, "name": t.name,
                            "silent": t.silent,
                            "binding": _binding_json(v.binding),
                            "label": format_call(
                                t.name, call_args(self.net, v.transition,
                                                  v.binding))})
            return out

        return {"root": vertex(tree.root), "truncated": tree.truncated}

    def tests_json(self, show_all: bool):
        tree = test_tree(self.net, Bounds())
        suite = scenarios(tree)
        return {"text": format_model_tests(suite, maximal_only=not show_all)}


def make_handler(bridge: Bridge):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):
            pass

        def _send(self, payload, status=200):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            url = urlparse(self.path)
            qs = parse_qs(url.query)
            key = qs.get("session", ["default"])[0]
            if url.path == "/net":
                self._send(bridge.net_json())
            elif url.path == "/state":
                self._send(bridge.state_json(key))
            elif url.path == "/tree":
                depth = int(qs.get("maxDepth", ["20"])[0])
                states = int(qs.get("maxStates", ["10000"])[0])
                self._send(bridge.tree_json(Bounds(max_depth=depth,
                                                   max_states=states)))
            elif url.path == "/tests":
                show_all = qs.get("all", ["0"])[0] in ("1", "true")
                self._send(bridge.tests_json(show_all))
            else:
                self._send({"error": "not-found"}, status=404)

        def do_POST(self):
            url = urlparse(self.path)
            qs = parse_qs(url.query)
            key = qs.get("session", ["default"])[0]
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                payload = json.loads(raw or b"{}")
            except json.JSONDecodeError:
                self._send({"error": "bad-json"}, status=400)
                return
            if url.path == "/fire":
                try:
                    s = sim_step(bridge.session(key), int(payload["index"]))
                except (KeyError, TypeError, ValueError):
                    self._send({"error": "bad-choice"}, status=400)
                    return
                except BadChoiceError:
                    self._send({"error": "bad-choice"}, status=400)
                    return
                bridge.set_session(key, s)
                self._send(bridge.state_json(key))
            elif url.path == "/reset":
                bridge.set_session(key, sim_step(bridge.session(key), "reset"))
                self._send(bridge.state_json(key))
            else:
                self._send({"error": "not-found"}, status=404)

    return Handler


def make_server(net: PrTNet, port: int) -> ThreadingHTTPServer:
    bridge = Bridge(net)
    server = ThreadingHTTPServer(("127.0.0.1", port), make_handler(bridge))
    server.bridge = bridge
    return server


def serve(net: PrTNet, port: int):
    server = make_server(net, port)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
