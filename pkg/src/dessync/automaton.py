"""Plant model: a nondeterministic finite automaton with interned state/event ids.

States and events are stored as small integers (their declaration order) with a
side table of display names, so the set-heavy constructions downstream hash
cheaply and iterate in a canonical order.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

from .errors import ModelError, UsageError

StateId = int
EventId = int


class Nfa:
    """Nondeterministic finite automaton ``G = (X, E, delta, X0)``.

    Build one from names with :meth:`from_names`; the constructor takes the
    already-interned form. Instances are treated as immutable.
    """

    def __init__(
        self,
        state_names: Sequence[str],
        event_names: Sequence[str],
        delta: Mapping[tuple[StateId, EventId], Iterable[StateId]],
        initial: Iterable[StateId],
    ):
        self.state_names = tuple(state_names)
        self.event_names = tuple(event_names)
        if len(set(self.state_names)) != len(self.state_names):
            raise ModelError("duplicate state names")
        if len(set(self.event_names)) != len(self.event_names):
            raise ModelError("duplicate event names")
        self.state_index = {name: i for i, name in enumerate(self.state_names)}
        self.event_index = {name: i for i, name in enumerate(self.event_names)}
        self.states = frozenset(range(len(self.state_names)))
        self.events = frozenset(range(len(self.event_names)))

        table: dict[tuple[StateId, EventId], frozenset[StateId]] = {}
        for (x, e), targets in delta.items():
            targets = frozenset(targets)
            if x not in self.states or e not in self.events:
                raise ModelError(f"transition ({x!r}, {e!r}) uses an undeclared state or event")
            if not targets <= self.states:
                raise ModelError(f"transition ({x!r}, {e!r}) targets undeclared states")
            if targets:
                table[(x, e)] = targets
        self.delta = table

        self.initial = frozenset(initial)
        if not self.initial:
            raise ModelError("an automaton needs at least one initial state")
        if not self.initial <= self.states:
            raise ModelError("initial states must be declared states")

        # outgoing edges per state, in canonical (event, target) order
        out: dict[StateId, list[tuple[EventId, StateId]]] = {x: [] for x in self.states}
        for (x, e), targets in sorted(table.items()):
            out[x].extend((e, y) for y in sorted(targets))
        self.out_edges = {x: tuple(edges) for x, edges in out.items()}

    def _key(self):
        return self.state_names, self.event_names, tuple(sorted(self.delta.items())), self.initial

    def __eq__(self, other):
        if not isinstance(other, Nfa):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @classmethod
    def from_names(
        cls,
        states: Sequence[str],
        events: Sequence[str],
        transitions: Iterable[tuple[str, str, str]],
        initial: Iterable[str],
    ) -> Nfa:
        """Build from display names; ``transitions`` holds ``(source, event, target)`` triples."""
        s_idx = {name: i for i, name in enumerate(states)}
        e_idx = {name: i for i, name in enumerate(events)}
        delta: dict[tuple[int, int], set[int]] = {}
        for src, ev, dst in transitions:
            try:
                key = (s_idx[src], e_idx[ev])
                target = s_idx[dst]
            except KeyError as exc:
                raise ModelError(f"transition ({src}, {ev}, {dst}) names an undeclared {exc}") from None
            delta.setdefault(key, set()).add(target)
        try:
            init = [s_idx[name] for name in initial]
        except KeyError as exc:
            raise ModelError(f"undeclared initial state {exc}") from None
        return cls(states, events, delta, init)

    def with_initial(self, initial: Iterable[StateId]) -> Nfa:
        """Copy of this automaton with a different initial-state set."""
        return Nfa(self.state_names, self.event_names, self.delta, initial)

    def transitions(self) -> list[tuple[StateId, EventId, StateId]]:
        return [(x, e, y) for x in sorted(self.states) for e, y in self.out_edges[x]]

    def state_id(self, name: str) -> StateId:
        try:
            return self.state_index[name]
        except KeyError:
            raise ModelError(f"unknown state {name!r}") from None

    def event_id(self, name: str) -> EventId:
        try:
            return self.event_index[name]
        except KeyError:
            raise ModelError(f"unknown event {name!r}") from None

    def state_ids(self, names: Iterable[str]) -> frozenset[StateId]:
        return frozenset(self.state_id(n) for n in names)

    def event_ids(self, names: Iterable[str]) -> tuple[EventId, ...]:
        return tuple(self.event_id(n) for n in names)

    def state_labels(self, states: Iterable[StateId]) -> list[str]:
        return [self.state_names[x] for x in sorted(states)]

    def successors(self, x: StateId, e: EventId) -> frozenset[StateId]:
        return self.delta.get((x, e), frozenset())

    def __repr__(self):
        return (f"Nfa(states={len(self.states)}, events={len(self.events)}, "
                f"transitions={len(self.transitions())}, initial={self.state_labels(self.initial)})")


def _check_states(nfa: Nfa, states: Iterable[StateId]) -> frozenset[StateId]:
    states = frozenset(states)
    if not states <= nfa.states:
        raise ModelError(f"unknown state ids {sorted(states - nfa.states)}")
    return states


def step(nfa: Nfa, sources: Iterable[StateId], s: Sequence[EventId]) -> frozenset[StateId]:
    """Extended transition function ``delta(sources, s)``; empty when ``s`` is not executable."""
    current = _check_states(nfa, sources)
    for e in s:
        if e not in nfa.events:
            raise ModelError(f"unknown event id {e!r}")
        nxt: set[StateId] = set()
        for x in current:
            nxt |= nfa.successors(x, e)
        current = frozenset(nxt)
    return current


def project(s: Sequence[EventId], observable: Iterable[EventId]) -> tuple[EventId, ...]:
    """Natural projection: erase events outside ``observable``, keep order."""
    observable = observable if isinstance(observable, (set, frozenset)) else set(observable)
    return tuple(e for e in s if e in observable)


def unobservable_reach(nfa: Nfa, observable: Iterable[EventId], sources: Iterable[StateId]) -> frozenset[StateId]:
    """States reachable from ``sources`` through events outside ``observable`` (worklist fixpoint)."""
    observable = frozenset(observable)
    seen = set(_check_states(nfa, sources))
    stack = list(seen)
    while stack:
        x = stack.pop()
        for e, y in nfa.out_edges[x]:
            if e not in observable and y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def observable_reach(nfa: Nfa, observable: Iterable[EventId], sources: Iterable[StateId],
                     sigma: EventId) -> frozenset[StateId]:
    """``R_sigma(sources)``: states reached by strings whose projection is exactly ``sigma``.

    Computed as ``UR(delta(UR(sources), sigma))``.
    """
    observable = frozenset(observable)
    if sigma not in observable:
        raise UsageError(f"event {sigma!r} is not observable by any site")
    before = unobservable_reach(nfa, observable, sources)
    return unobservable_reach(nfa, observable, step(nfa, before, (sigma,)))


class ReachCache:
    """Memoized per-state ``UR`` and ``R_sigma`` for one observable alphabet.

    The CSS construction queries ``R_sigma`` of single states many times; this
    keeps each query to one dictionary lookup after the first.
    """

    def __init__(self, nfa: Nfa, observable: Iterable[EventId]):
        self.nfa = nfa
        self.observable = frozenset(observable)
        self._ur: dict[StateId, frozenset[StateId]] = {}
        self._after: dict[tuple[StateId, EventId], frozenset[StateId]] = {}

    def ur(self, x: StateId) -> frozenset[StateId]:
        got = self._ur.get(x)
        if got is None:
            got = self._ur[x] = unobservable_reach(self.nfa, self.observable, (x,))
        return got

    def ur_set(self, states: Iterable[StateId]) -> frozenset[StateId]:
        out: set[StateId] = set()
        for x in states:
            out |= self.ur(x)
        return frozenset(out)

    def after(self, x: StateId, sigma: EventId) -> frozenset[StateId]:
        key = (x, sigma)
        got = self._after.get(key)
        if got is None:
            mid: set[StateId] = set()
            for y in self.ur(x):
                mid |= self.nfa.successors(y, sigma)
            got = self._after[key] = self.ur_set(mid)
        return got
