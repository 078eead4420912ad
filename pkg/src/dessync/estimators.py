"""Coordinator-side estimators driven by critical SI-states.

All three automata are subset constructions over the CSI-state alphabet of a
CSS structure; they differ only in what a state holds and how ``M(tau)`` is
applied:

* DO-observer: current-state sets, forward image under ``M(tau)``.
* initial-state estimator: sets of (initial, current) pairs, composed with ``M(tau)``.
* synchronization-reversed observer: state sets, pre-image under ``M(tau)``.

Transition maps are partial; an empty successor is simply absent.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Generic, Optional, TypeVar

from .automaton import EventId, Nfa, ReachCache, StateId
from .css import CssStructure, Pair, build_css, build_feasible_css
from .errors import UsageError
from .protocol import ObservationArchitecture, Run, SiState, replay

S = TypeVar("S")


@dataclass(frozen=True)
class Observer(Generic[S]):
    """Deterministic automaton over CSI-states. ``kind`` is ``current``, ``reversed`` or ``initial``."""

    states: frozenset[S]
    alphabet: frozenset[SiState]
    transitions: dict[tuple[S, SiState], S]
    initial: S
    kind: str

    def step(self, q: S, tau: SiState) -> Optional[S]:
        if tau not in self.alphabet:
            raise UsageError("SI-state is not in the observer alphabet")
        return self.transitions.get((q, tau))

    def successors(self, q: S) -> list[tuple[SiState, S]]:
        return [(tau, self.transitions[(q, tau)]) for tau in sorted(self.alphabet) if (q, tau) in self.transitions]


class IObserver(Observer[frozenset[Pair]]):
    """Initial-state estimator; states are sets of (initial, current) pairs."""

    @staticmethod
    def first(m: Iterable[Pair]) -> frozenset[StateId]:
        """Initial-state components of an estimator state."""
        return frozenset(x for x, _ in m)


def run_observer(obs: Observer, iota: Sequence[SiState]):
    """Fold ``iota`` through ``obs``; ``None`` as soon as a step is undefined."""
    q = obs.initial
    for tau in iota:
        q = obs.step(q, tau)
        if q is None:
            return None
    return q


def _forward(css: CssStructure) -> dict[SiState, dict[StateId, frozenset[StateId]]]:
    table: dict[SiState, dict[StateId, set[StateId]]] = {}
    for tau, pairs in css.csi_index.items():
        row = table.setdefault(tau, {})
        for x, y in pairs:
            row.setdefault(x, set()).add(y)
    return {tau: {x: frozenset(ys) for x, ys in row.items()} for tau, row in table.items()}


def _backward(css: CssStructure) -> dict[SiState, dict[StateId, frozenset[StateId]]]:
    table: dict[SiState, dict[StateId, set[StateId]]] = {}
    for tau, pairs in css.csi_index.items():
        row = table.setdefault(tau, {})
        for x, y in pairs:
            row.setdefault(y, set()).add(x)
    return {tau: {y: frozenset(xs) for y, xs in row.items()} for tau, row in table.items()}


def _image(row: dict[StateId, frozenset[StateId]], q: Iterable[StateId]) -> frozenset[StateId]:
    out: set[StateId] = set()
    for x in q:
        out |= row.get(x, frozenset())
    return frozenset(out)


def current_estimate(css: CssStructure, tau: SiState, sources: Iterable[StateId]) -> frozenset[StateId]:
    """States possible right after receiving ``tau`` when the plant was in ``sources``."""
    sources = frozenset(sources)
    return frozenset(y for x, y in css.pairs_of(tau) if x in sources)


def initial_estimate(css: CssStructure, tau: SiState, x0set: Iterable[StateId]) -> frozenset[StateId]:
    """Initial states compatible with receiving ``tau`` as the first CSI-state."""
    x0set = frozenset(x0set)
    return frozenset(x for x, _ in css.pairs_of(tau) if x in x0set)


def _subset_construction(initial, alphabet, move, kind, cls=Observer):
    transitions = {}
    seen = {initial}
    queue = deque([initial])
    while queue:
        q = queue.popleft()
        for tau in alphabet:
            r = move(q, tau)
            if not r:
                continue
            transitions[(q, tau)] = r
            if r not in seen:
                seen.add(r)
                queue.append(r)
    return cls(frozenset(seen), frozenset(alphabet), transitions, initial, kind)


def build_do_observer(nfa: Nfa, arch: ObservationArchitecture,
                      css: Optional[CssStructure] = None) -> Observer[frozenset[StateId]]:
    """Current-state estimator at synchronization instants; starts from ``UR(X0)``."""
    css = build_feasible_css(nfa, arch) if css is None else css
    fwd = _forward(css)
    start = ReachCache(nfa, arch.observable).ur_set(nfa.initial)
    return _subset_construction(start, css.sorted_critical(), lambda q, tau: _image(fwd[tau], q), "current")


def build_initial_estimator(nfa: Nfa, arch: ObservationArchitecture,
                            css: Optional[CssStructure] = None) -> IObserver:
    """Initial-state estimator; ``IObserver.first`` of a state is the initial-state estimate."""
    css = build_feasible_css(nfa, arch) if css is None else css
    fwd = _forward(css)
    start = frozenset((x, x) for x in nfa.initial)

    def move(m, tau):
        row = fwd[tau]
        return frozenset((x, z) for x, y in m for z in row.get(y, ()))

    return _subset_construction(start, css.sorted_critical(), move, "initial", IObserver)


def build_reversed_observer(nfa: Nfa, arch: ObservationArchitecture,
                            css: Optional[CssStructure] = None) -> Observer[frozenset[StateId]]:
    """Observer consuming reversed CSI-sequences; needs the CSS over all plant states."""
    css = build_css(nfa, arch) if css is None else css
    bwd = _backward(css)
    start = frozenset(nfa.states)
    return _subset_construction(start, css.sorted_critical(), lambda q, tau: _image(bwd[tau], q), "reversed")


def replay_estimates(nfa: Nfa, arch: ObservationArchitecture, s: Sequence[EventId],
                     css: Optional[CssStructure] = None) -> Run:
    """Replay ``s`` and attach (current, initial) estimates after every synchronization."""
    run = replay(nfa, arch, s)
    css = build_feasible_css(nfa, arch) if css is None else css
    fwd = _forward(css)
    current = ReachCache(nfa, arch.observable).ur_set(nfa.initial)
    pairs = frozenset((x, x) for x in nfa.initial)
    run.estimates = []
    for tau in run.csi_trace:
        row = fwd[tau]
        current = _image(row, current)
        pairs = frozenset((x, z) for x, y in pairs for z in row.get(y, ()))
        run.estimates.append((current, IObserver.first(pairs)))
    return run
