"""Brute-force reference semantics.

Everything here works from the raw transition table and the site
alphabets/thresholds, simulating the plant and the observation sites event by
event. Nothing is shared with the constructions in ``css`` and ``estimators``,
so agreement between the two is meaningful.

Two styles are provided:

* literal string enumeration (``enumerate_language`` and friends), bounded by
  the number of observable events and the length of unobservable runs;
* exhaustive simulation over configurations ``(origin, state, record, trace)``,
  which explores every plant path with no length bound but deduplicates
  identical configurations. It is exact for a fixed number of
  synchronizations and is what the larger property tests use.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

from .automaton import EventId, Nfa, StateId
from .errors import FixtureError
from .protocol import ObservationArchitecture, SiState

Trace = tuple[SiState, ...]


def _observable(arch: ObservationArchitecture) -> frozenset[EventId]:
    out: set[EventId] = set()
    for site in arch.sites:
        out |= site.observable
    return frozenset(out)


def _delta(nfa: Nfa, states: Iterable[StateId], s: Sequence[EventId]) -> frozenset[StateId]:
    current = set(states)
    for e in s:
        current = {y for x in current for y in nfa.delta.get((x, e), ())}
    return frozenset(current)


def _record(arch: ObservationArchitecture, record: SiState, e: EventId) -> tuple[SiState, bool]:
    """Let every site that sees ``e`` write it down; report whether a site hit its threshold."""
    comps = []
    hit = False
    for comp, site in zip(record, arch.sites):
        if e in site.observable:
            comp = comp + (e,)
        if len(comp) == site.kappa:
            hit = True
        comps.append(comp)
    return tuple(comps), hit


def do_projection(arch: ObservationArchitecture, s: Sequence[EventId]) -> tuple[Trace, SiState]:
    """(CSI-states received, record pending since the last synchronization) for string ``s``."""
    empty: SiState = ((),) * len(arch.sites)
    record = empty
    trace: list[SiState] = []
    for e in s:
        if not any(e in site.observable for site in arch.sites):
            continue
        record, hit = _record(arch, record, e)
        if hit:
            trace.append(record)
            record = empty
    return tuple(trace), record


def last_sync_prefix(arch: ObservationArchitecture, s: Sequence[EventId]) -> tuple[EventId, ...]:
    """Longest prefix of ``s`` immediately followed by a synchronization (empty if none)."""
    empty: SiState = ((),) * len(arch.sites)
    record = empty
    cut = 0
    for k, e in enumerate(s):
        if not any(e in site.observable for site in arch.sites):
            continue
        record, hit = _record(arch, record, e)
        if hit:
            cut = k + 1
            record = empty
    return tuple(s[:cut])


def enumerate_language(nfa: Nfa, arch: ObservationArchitecture, max_observable: int,
                       max_unobservable_run: Optional[int] = None,
                       sources: Optional[Iterable[StateId]] = None) -> set[tuple[EventId, ...]]:
    """Strings generated from ``sources`` (default: initial states) within the given bounds.

    At most ``max_observable`` events seen by some site, and at most
    ``max_unobservable_run`` (default ``|X|``) consecutive events seen by none.
    """
    obs = _observable(arch)
    cap = len(nfa.states) if max_unobservable_run is None else max_unobservable_run
    start = frozenset(nfa.initial if sources is None else sources)
    out: set[tuple[EventId, ...]] = set()
    events = sorted(nfa.events)

    def walk(s, states, n_obs, run):
        out.add(s)
        for e in events:
            seen = e in obs
            if seen and n_obs >= max_observable:
                continue
            if not seen and run >= cap:
                continue
            nxt = _delta(nfa, states, (e,))
            if nxt:
                walk(s + (e,), nxt, n_obs + seen, 0 if seen else run + 1)

    walk((), start, 0, 0)
    return out


def oracle_unobservable_reach(nfa: Nfa, arch: ObservationArchitecture, sources: Iterable[StateId]) -> frozenset[StateId]:
    """States reached by strings no site sees, enumerated up to ``|X|`` events."""
    sources = frozenset(sources)
    out: set[StateId] = set()
    for s in enumerate_language(nfa, arch, 0, sources=sources):
        out |= _delta(nfa, sources, s)
    return frozenset(out)


def oracle_observable_reach(nfa: Nfa, arch: ObservationArchitecture, sources: Iterable[StateId],
                            sigma: EventId) -> frozenset[StateId]:
    """States reached by strings whose only observed event is ``sigma``."""
    sources = frozenset(sources)
    out: set[StateId] = set()
    for s in enumerate_language(nfa, arch, 1, sources=sources):
        if [e for e in s if e in _observable(arch)] == [sigma]:
            out |= _delta(nfa, sources, s)
    return frozenset(out)


def estimates_by_enumeration(nfa: Nfa, arch: ObservationArchitecture, x0set: Iterable[StateId],
                             max_observable: int) -> dict[Trace, tuple[frozenset[StateId], frozenset[StateId]]]:
    """(current, initial) estimates for every trace of the enumerated strings.

    Only exact for traces whose realizing strings fit the bounds; meant for tiny
    models as a check on :func:`realizations`.
    """
    current: dict[Trace, set[StateId]] = {}
    initial: dict[Trace, set[StateId]] = {}
    for x0 in sorted(set(x0set)):
        for s in enumerate_language(nfa, arch, max_observable, sources=(x0,)):
            trace, _ = do_projection(arch, s)
            initial.setdefault(trace, set()).add(x0)
            cur = current.setdefault(trace, set())
            prefix = last_sync_prefix(arch, s)
            if len(prefix) == len(s) or all(
                    not any(e in site.observable for site in arch.sites) for e in s[len(prefix):]):
                cur |= _delta(nfa, (x0,), s)
    return {t: (frozenset(current[t]), frozenset(initial[t])) for t in initial}


@dataclass
class Realizations:
    """Outcome of exhaustive simulation from a set of initial states.

    ``current[iota]``: states the plant can be in right after receiving
    ``iota`` (including unobservable moves, before any further observation);
    ``initial[iota]``: initial states from which ``iota`` can be received.
    """

    current: dict[Trace, set[StateId]] = field(default_factory=dict)
    initial: dict[Trace, set[StateId]] = field(default_factory=dict)
    si_states: set[SiState] = field(default_factory=set)


@dataclass
class Segment:
    """Everything one inter-synchronization segment can do from a given state.

    ``quiet``: states reachable before any site records an event;
    ``records``: every record the sites can hold (critical ones included);
    ``exits[tau]``: states in which the plant sits when ``tau`` triggers a synchronization.
    """

    quiet: set[StateId] = field(default_factory=set)
    records: set[SiState] = field(default_factory=set)
    exits: dict[SiState, set[StateId]] = field(default_factory=dict)


def simulate_segment(nfa: Nfa, arch: ObservationArchitecture, x: StateId) -> Segment:
    """Event-by-event simulation of the sites from ``x`` until the next synchronization."""
    empty: SiState = ((),) * len(arch.sites)
    obs = _observable(arch)
    seg = Segment(records={empty})
    seen = {(x, empty)}
    stack = [(x, empty)]
    while stack:
        y, record = stack.pop()
        if record == empty:
            seg.quiet.add(y)
        for e, z in nfa.out_edges[y]:
            nrec = record
            if e in obs:
                nrec, hit = _record(arch, record, e)
                seg.records.add(nrec)
                if hit:
                    seg.exits.setdefault(nrec, set()).add(z)
                    continue
            if (z, nrec) not in seen:
                seen.add((z, nrec))
                stack.append((z, nrec))
    return seg


def _realizations_by_paths(nfa, arch, x0set, max_syncs, target):
    empty: SiState = ((),) * len(arch.sites)
    obs = _observable(arch)
    res = Realizations()
    res.si_states.add(empty)
    seen = set()
    stack = [(x0, x0, empty, ()) for x0 in sorted(set(x0set))]
    seen.update(stack)
    while stack:
        x0, x, record, trace = stack.pop()
        res.initial.setdefault(trace, set()).add(x0)
        if record == empty:
            res.current.setdefault(trace, set()).add(x)
        for e, y in nfa.out_edges[x]:
            if e in obs:
                nrec, hit = _record(arch, record, e)
                res.si_states.add(nrec)
                if hit:
                    ntrace = trace + (nrec,)
                    if len(ntrace) > max_syncs:
                        continue
                    if target is not None and ntrace != target[:len(ntrace)]:
                        continue
                    nrec = empty
                else:
                    ntrace = trace
            else:
                nrec, ntrace = record, trace
            conf = (x0, y, nrec, ntrace)
            if conf not in seen:
                seen.add(conf)
                stack.append(conf)
    return res


def _realizations_by_segments(nfa, arch, x0set, max_syncs, target):
    res = Realizations()
    segments: dict[StateId, Segment] = {}

    def seg(x):
        got = segments.get(x)
        if got is None:
            got = segments[x] = simulate_segment(nfa, arch, x)
        return got

    # boundary[iota]: (initial state, state at the synchronization) pairs
    level: dict[Trace, set[tuple[StateId, StateId]]] = {(): {(x0, x0) for x0 in set(x0set)}}
    for depth in range(max_syncs + 1):
        nxt: dict[Trace, set[tuple[StateId, StateId]]] = {}
        for trace, pairs in level.items():
            res.initial[trace] = {x0 for x0, _ in pairs}
            cur = res.current.setdefault(trace, set())
            for x0, x in pairs:
                s = seg(x)
                cur |= s.quiet
                res.si_states |= s.records
                if depth == max_syncs:
                    continue
                for tau, ends in s.exits.items():
                    ntrace = trace + (tau,)
                    if target is not None and ntrace != target[:len(ntrace)]:
                        continue
                    nxt.setdefault(ntrace, set()).update((x0, z) for z in ends)
        level = nxt
    return res


def realizations(nfa: Nfa, arch: ObservationArchitecture, x0set: Iterable[StateId], max_syncs: int,
                 target: Optional[Trace] = None, method: str = "segments") -> Realizations:
    """Simulate every plant path from ``x0set`` up to ``max_syncs`` synchronizations.

    ``method="paths"`` carries the received trace along every simulated path;
    ``method="segments"`` simulates one segment per state and chains segments
    at synchronizations (the sites restart from empty records there, so the
    two agree). With ``target`` set, traces that stop being a prefix of
    ``target`` are dropped early.
    """
    if method == "paths":
        return _realizations_by_paths(nfa, arch, x0set, max_syncs, target)
    if method == "segments":
        return _realizations_by_segments(nfa, arch, x0set, max_syncs, target)
    raise ValueError(f"unknown method {method!r}")


def oracle_current_estimate(nfa: Nfa, arch: ObservationArchitecture, iota: Sequence[SiState],
                            x0set: Iterable[StateId]) -> frozenset[StateId]:
    iota = tuple(iota)
    res = realizations(nfa, arch, x0set, len(iota), target=iota)
    return frozenset(res.current.get(iota, ()))


def oracle_initial_estimate(nfa: Nfa, arch: ObservationArchitecture, iota: Sequence[SiState],
                            x0set: Iterable[StateId]) -> frozenset[StateId]:
    iota = tuple(iota)
    res = realizations(nfa, arch, x0set, len(iota), target=iota)
    return frozenset(res.initial.get(iota, ()))


def realizable_si_states(nfa: Nfa, arch: ObservationArchitecture) -> set[SiState]:
    """Every SI-state the sites can hold along some plant path (CSI-states included)."""
    empty: SiState = ((),) * len(arch.sites)
    obs = _observable(arch)
    found = {empty}
    seen = {(x, empty) for x in nfa.initial}
    stack = list(seen)
    while stack:
        x, record = stack.pop()
        for e, y in nfa.out_edges[x]:
            nrec = record
            if e in obs:
                nrec, hit = _record(arch, record, e)
                found.add(nrec)
                if hit:
                    nrec = empty
            if (y, nrec) not in seen:
                seen.add((y, nrec))
                stack.append((y, nrec))
    return found


def oracle_pairs(nfa: Nfa, arch: ObservationArchitecture, tau: SiState,
                 origins: Optional[Iterable[StateId]] = None) -> frozenset[tuple[StateId, StateId]]:
    """(x, x') such that some string from x to x' is recorded by the sites exactly as ``tau``.

    The string must not trigger a synchronization before its last observed
    event (any trailing unobserved events are allowed).
    """
    empty: SiState = ((),) * len(arch.sites)
    obs = _observable(arch)
    pairs = set()
    for x in sorted(nfa.states if origins is None else set(origins)):
        seen = {(x, empty)}
        stack = [(x, empty)]
        while stack:
            y, record = stack.pop()
            if record == tau:
                pairs.add((x, y))
            for e, z in nfa.out_edges[y]:
                nrec = record
                if e in obs:
                    if record == tau:
                        continue
                    nrec, hit = _record(arch, record, e)
                    if any(c != t[:len(c)] for c, t in zip(nrec, tau)):
                        continue
                    if hit and nrec != tau:
                        continue
                if (z, nrec) not in seen:
                    seen.add((z, nrec))
                    stack.append((z, nrec))
    return frozenset(pairs)


def oracle_iso(nfa: Nfa, arch: ObservationArchitecture, x0set: Iterable[StateId], secret: Iterable[StateId],
               max_syncs: int) -> Optional[Trace]:
    """A shortest CSI-sequence (up to ``max_syncs``) whose initial estimate lies in ``secret``, else None."""
    secret = frozenset(secret)
    res = realizations(nfa, arch, x0set, max_syncs)
    bad = [t for t, inits in res.initial.items() if inits <= secret]
    return min(bad, key=lambda t: (len(t), t)) if bad else None


def oracle_csso(nfa: Nfa, arch: ObservationArchitecture, x0set: Iterable[StateId], secret: Iterable[StateId],
                max_syncs: int) -> Optional[Trace]:
    """A shortest CSI-sequence (up to ``max_syncs``) after which the plant must be in ``secret``."""
    secret = frozenset(secret)
    res = realizations(nfa, arch, x0set, max_syncs)
    bad = [t for t, cur in res.current.items() if cur <= secret]
    return min(bad, key=lambda t: (len(t), t)) if bad else None


def is_realizable(nfa: Nfa, arch: ObservationArchitecture, iota: Sequence[SiState],
                  x0set: Optional[Iterable[StateId]] = None) -> bool:
    """Whether some plant string from ``x0set`` makes the coordinator receive exactly ``iota``."""
    x0set = nfa.initial if x0set is None else x0set
    return bool(oracle_initial_estimate(nfa, arch, iota, x0set))


# -- golden facts -------------------------------------------------------------

@dataclass(frozen=True)
class GoldenFact:
    name: str
    kind: str
    args: dict
    expected: Any
    source: str = ""


def _parse_si_text(nfa: Nfa, text: str) -> SiState:
    body = text.strip()[1:-1]
    return tuple(tuple(nfa.event_id(e) for e in part.split(".")) if part else () for part in body.split("|"))


def evaluate_fact(nfa: Nfa, arch: ObservationArchitecture, fact: GoldenFact) -> tuple[bool, Any]:
    """Evaluate one fact with the oracle; returns (holds, observed value)."""
    a = fact.args
    names = nfa.state_labels
    if fact.kind == "UR":
        got = names(oracle_unobservable_reach(nfa, arch, nfa.state_ids(a["sources"])))
        return set(got) == set(fact.expected), got
    if fact.kind == "Rsigma":
        got = names(oracle_observable_reach(nfa, arch, nfa.state_ids(a["sources"]), nfa.event_id(a["event"])))
        return set(got) == set(fact.expected), got
    if fact.kind == "Step":
        got = names(_delta(nfa, nfa.state_ids(a["sources"]), nfa.event_ids(a["string"])))
        return set(fact.expected) <= set(got), got
    if fact.kind == "SI-trace":
        trace, pending = do_projection(arch, nfa.event_ids(a["string"]))
        got = {"trace": [_format(nfa, t) for t in trace], "pending": _format(nfa, pending)}
        want = fact.expected
        ok = got["trace"] == want["trace"] and ("pending" not in want or got["pending"] == want["pending"])
        return ok, got
    if fact.kind == "Estimate":
        iota = [_parse_si_text(nfa, t) for t in a["trace"]]
        fn = oracle_current_estimate if a["mode"] == "current" else oracle_initial_estimate
        got = names(fn(nfa, arch, iota, nfa.state_ids(a["initial"])))
        return set(got) == set(fact.expected), got
    if fact.kind == "Member-M":
        tau = _parse_si_text(nfa, a["tau"])
        pairs = oracle_pairs(nfa, arch, tau)
        got = sorted([nfa.state_names[x], nfa.state_names[y]] for x, y in pairs)
        want = {tuple(p) for p in fact.expected}
        return want <= {tuple(p) for p in got}, got
    raise ValueError(f"unknown golden fact kind {fact.kind!r}")


def _format(nfa: Nfa, tau: SiState) -> str:
    return "(" + "|".join(".".join(nfa.event_names[e] for e in comp) for comp in tau) + ")"


def load_facts(data: dict) -> list[GoldenFact]:
    return [GoldenFact(f["name"], f["kind"], f.get("args", {}), f["expected"], f.get("source", ""))
            for f in data["facts"]]


def bundled_facts() -> list[GoldenFact]:
    text = resources.files("dessync").joinpath("data/fixture_facts.json").read_text()
    return load_facts(json.loads(text))


def check_golden_facts(nfa: Nfa, arch: ObservationArchitecture, facts: Optional[list[GoldenFact]] = None,
                       raise_on_failure: bool = True) -> list[tuple[GoldenFact, bool, Any]]:
    """Evaluate every fact; raises :class:`FixtureError` naming the first failure unless told not to."""
    facts = bundled_facts() if facts is None else facts
    report = []
    for fact in facts:
        ok, got = evaluate_fact(nfa, arch, fact)
        if not ok and raise_on_failure:
            raise FixtureError(fact, f"expected {fact.expected!r}, observed {got!r}")
        report.append((fact, ok, got))
    return report
