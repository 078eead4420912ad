"""Opacity checks over the coordinator's estimators.

Each check walks the reachable part of an estimator breadth-first, so the
first violating state found comes with a shortest CSI-sequence witness. The
empty sequence is a valid witness: the initial estimate can already give the
secret away.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import Any, Optional

from .automaton import Nfa, StateId
from .errors import UsageError
from .estimators import IObserver, Observer
from .protocol import SiState, format_si

VERDICT_SCHEMA = 1


@dataclass(frozen=True)
class Verdict:
    property: str
    holds: bool
    witness: Optional[tuple[SiState, ...]] = None
    violating_state: Any = None

    def to_json(self, nfa: Nfa) -> dict:
        state = None
        if self.violating_state is not None:
            members = self.violating_state
            if members and isinstance(next(iter(members)), tuple):
                state = [[nfa.state_names[x], nfa.state_names[y]] for x, y in sorted(members)]
            else:
                state = nfa.state_labels(members)
        return {
            "schema": VERDICT_SCHEMA,
            "property": self.property,
            "holds": self.holds,
            "witness": None if self.witness is None else [format_si(nfa, tau) for tau in self.witness],
            "state": state,
        }


def _search(obs: Observer, bad: Callable[[Any], bool]):
    """BFS from the initial state; returns (path, state) of the first state with ``bad(state)``."""
    parent: dict[Any, Optional[tuple[Any, SiState]]] = {obs.initial: None}
    queue = deque([obs.initial])
    while queue:
        q = queue.popleft()
        if bad(q):
            path = []
            node = q
            while parent[node] is not None:
                prev, tau = parent[node]
                path.append(tau)
                node = prev
            return tuple(reversed(path)), q
        for tau, r in obs.successors(q):
            if r not in parent:
                parent[r] = (q, tau)
                queue.append(r)
    return None


def _secret_within(secret: Iterable[StateId], x0set: Iterable[StateId]) -> frozenset[StateId]:
    secret = frozenset(secret)
    if not secret <= frozenset(x0set):
        raise UsageError("secret initial states must be a subset of the initial states")
    return secret


def verify_iso_via_estimator(iobs: IObserver, x0set: Iterable[StateId], secret: Iterable[StateId]) -> Verdict:
    """Initial-state opacity: no estimator state has its initial estimate inside the secret."""
    secret = _secret_within(secret, x0set)
    found = _search(iobs, lambda m: IObserver.first(m) <= secret)
    if found is None:
        return Verdict("iso", True)
    return Verdict("iso", False, *found)


def verify_iso_via_reversed(robs: Observer, x0set: Iterable[StateId], secret: Iterable[StateId]) -> Verdict:
    """Initial-state opacity on the synchronization-reversed observer.

    The reversed observer reads CSI-sequences backwards, so the witness is the
    reverse of the path that reaches the violating state.
    """
    x0set = frozenset(x0set)
    secret = _secret_within(secret, x0set)

    def bad(q):
        hit = q & x0set
        return bool(hit) and hit <= secret

    found = _search(robs, bad)
    if found is None:
        return Verdict("iso-reversed", True)
    path, q = found
    return Verdict("iso-reversed", False, tuple(reversed(path)), q)


def verify_csso(obs: Observer, secret: Iterable[StateId]) -> Verdict:
    """Current-state-at-synchronization opacity: no DO-observer state lies inside the secret."""
    if obs.kind != "current":
        raise UsageError("current-state-at-synchronization opacity needs the DO-observer")
    secret = frozenset(secret)
    found = _search(obs, lambda q: q <= secret)
    if found is None:
        return Verdict("csso", True)
    return Verdict("csso", False, *found)
