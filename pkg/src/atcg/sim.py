"""Interactive token-game session core shared by the REPL and the HTTP
bridge. Sessions are immutable; every step returns a new session whose
history replays to the current marking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple, Union

from .petri import Binding, Marking, PrTNet, enabled, fire


class BadChoiceError(Exception):
    pass


@dataclass
class SimSession:
    net: PrTNet
    current: Marking
    history: List[Tuple[str, Binding]] = field(default_factory=list)
    enabled_cache: List[Tuple[str, Binding]] = field(default_factory=list)


def new_session(net: PrTNet) -> SimSession:
    m = net.initial_marking()
    return SimSession(net=net, current=m, history=[],
                      enabled_cache=enabled(net, m))


def _replay(net: PrTNet, history) -> SimSession:
    m = net.initial_marking()
    for tid, binding in history:
        m = fire(net, m, tid, binding)
    return SimSession(net=net, current=m, history=list(history),
                      enabled_cache=enabled(net, m))


def sim_step(s: SimSession, choice: Union[int, str]) -> SimSession:
    """Apply a step: a numeric index fires that enabled pair, "undo" pops
    the last firing, "reset" returns to the initial marking."""
    if choice == "reset":
        return new_session(s.net)
    if choice == "undo":
        if not s.history:
            return new_session(s.net)
        return _replay(s.net, s.history[:-1])
    if not isinstance(choice, int) or not 0 <= choice < len(s.enabled_cache):
        raise BadChoiceError("bad-choice: %r (enabled: %d)"
                             % (choice, len(s.enabled_cache)))
    tid, binding = s.enabled_cache[choice]
    m = fire(s.net, s.current, tid, binding)
    return SimSession(net=s.net, current=m,
                      history=s.history + [(tid, binding)],
                      enabled_cache=enabled(s.net, m))
