"""Complete synchronizing sequence (CSS) structures.

A CSS structure alternates layers of state pairs ``(origin, current, layer)``
with SI-states. Starting from ``(x, x, 0)`` roots, an SI-state absorbs an
observable event ``sigma`` that the current state can produce, and the pair
moves to every state of ``R_sigma(current)`` one layer down. Absorption stops at
critical SI-states, so the structure is finite. For each critical SI-state
``tau`` the set ``M(tau)`` of (origin, current) pairs it leads to is what the
estimators consume.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from math import prod
from typing import NamedTuple, Optional

from .automaton import EventId, Nfa, ReachCache, StateId
from .errors import ModelError, UsageError
from .protocol import ObservationArchitecture, SiState, SyncStrategy

Pair = tuple[StateId, StateId]


class CssState(NamedTuple):
    origin: StateId
    current: StateId
    layer: int


@dataclass
class CssStructure:
    """Layered bipartite graph; ``hr`` edges out of ``t0`` are labelled ``None`` (epsilon)."""

    t0: SiState
    states: set[CssState] = field(default_factory=set)
    si_states: set[SiState] = field(default_factory=set)
    ha: set[tuple[CssState, EventId, SiState]] = field(default_factory=set)
    hr: set[tuple[SiState, Optional[EventId], CssState]] = field(default_factory=set)
    roots: set[CssState] = field(default_factory=set)
    critical: set[SiState] = field(default_factory=set)
    csi_index: dict[SiState, set[Pair]] = field(default_factory=dict)
    # root state -> CSI-state that first introduced it (None for seeds)
    root_sources: dict[StateId, Optional[SiState]] = field(default_factory=dict)

    def pairs_of(self, tau: SiState) -> frozenset[Pair]:
        """``M(tau)`` for a critical SI-state of this structure."""
        try:
            return frozenset(self.csi_index[tau])
        except KeyError:
            raise UsageError("SI-state is not a critical SI-state of this structure") from None

    def reached_pairs(self, tau: SiState) -> frozenset[Pair]:
        """(origin, current) pairs entered through ``tau``; defined for every SI-state."""
        return frozenset((rho.origin, rho.current) for t, _, rho in self.hr if t == tau)

    @property
    def max_layer(self) -> int:
        return max((rho.layer for rho in self.states), default=0)

    def layers(self) -> dict[int, list[CssState]]:
        out: dict[int, list[CssState]] = {}
        for rho in sorted(self.states, key=lambda r: (r.layer, r.origin, r.current)):
            out.setdefault(rho.layer, []).append(rho)
        return out

    def hr_labels(self, tau: SiState) -> set[Optional[EventId]]:
        return {sigma for t, sigma, _ in self.hr if t == tau}

    def sorted_critical(self) -> list[SiState]:
        return sorted(self.critical)


def _expand(css: CssStructure, arch: SyncStrategy, reach: ReachCache,
            roots: Iterable[StateId]) -> set[StateId]:
    """Grow ``css`` from fresh ``(x, x, 0)`` roots; return the states entered through CSI-states."""
    t0 = css.t0
    frontier: dict[CssState, set[SiState]] = {}
    for x in sorted(roots):
        rho = CssState(x, x, 0)
        css.roots.add(rho)
        css.states.add(rho)
        css.hr.add((t0, None, rho))
        frontier[rho] = {t0}
    css.si_states.add(t0)
    events = sorted(arch.observable)
    after_sync: set[StateId] = set()

    while frontier:
        nxt: dict[CssState, set[SiState]] = {}
        for rho in sorted(frontier):
            incoming = frontier[rho]
            for sigma in events:
                targets = reach.after(rho.current, sigma)
                if not targets:
                    continue
                for tau_prev in sorted(incoming):
                    if arch.is_critical(tau_prev):
                        continue
                    tau = arch.absorb(tau_prev, sigma)
                    critical = arch.is_critical(tau)
                    css.si_states.add(tau)
                    css.ha.add((rho, sigma, tau))
                    if critical:
                        css.critical.add(tau)
                        bucket = css.csi_index.setdefault(tau, set())
                    for x in targets:
                        succ = CssState(rho.origin, x, rho.layer + 1)
                        css.states.add(succ)
                        css.hr.add((tau, sigma, succ))
                        if critical:
                            bucket.add((rho.origin, x))
                            after_sync.add(x)
                        else:
                            nxt.setdefault(succ, set()).add(tau)
        frontier = nxt
    return after_sync


def build_css(nfa: Nfa, arch: SyncStrategy, seeds: Optional[Iterable[StateId]] = None) -> CssStructure:
    """CSS structure rooted at ``seeds`` (all plant states by default).

    A single seed gives the synchronizing-sequence structure of that state.
    """
    seeds = frozenset(nfa.states if seeds is None else seeds)
    if not seeds:
        raise ModelError("build_css needs at least one seed state")
    if not seeds <= nfa.states:
        raise ModelError("seed states must be plant states")
    css = CssStructure(t0=arch.initial_si)
    _expand(css, arch, ReachCache(nfa, arch.observable), seeds)
    css.root_sources = {x: None for x in seeds}
    return css


def build_feasible_css(nfa: Nfa, arch: SyncStrategy) -> CssStructure:
    """CSS structure restricted to SI-states the plant can actually produce.

    Starts from the initial states and, round by round, adds as new roots every
    state a CSI-state can leave the plant in, until no new root appears.
    """
    css = CssStructure(t0=arch.initial_si)
    reach = ReachCache(nfa, arch.observable)
    css.root_sources = {x: None for x in nfa.initial}
    pending = set(nfa.initial)
    while pending:
        before = {tau: set(pairs) for tau, pairs in css.csi_index.items()}
        after_sync = _expand(css, arch, reach, pending)
        fresh = after_sync - css.root_sources.keys()
        # provenance: the smallest CSI-state of this round that reaches the new root
        for tau in sorted(css.csi_index):
            for origin, x in sorted(css.csi_index[tau] - before.get(tau, set())):
                if x in fresh and x not in css.root_sources:
                    css.root_sources[x] = tau
        pending = fresh
    return css


@dataclass(frozen=True)
class Bounds:
    """Worst-case size figures for one plant/architecture pair.

    ``delta`` and ``delta_c`` are the headline approximations; the ``*_bound``
    fields are exact upper bounds and the ones assertions should use.
    """

    delta: int
    delta_c: int
    noncritical_bound: int
    critical_bound: int
    si_bound: int
    lu: int
    max_css_states: int


def size_bounds(arch: ObservationArchitecture, nfa: Nfa) -> Bounds:
    sizes = [len(s.observable) for s in arch.sites]
    kappas = arch.kappas
    n_obs = len(arch.observable)
    approx = prod(k ** (kap - 1) for k, kap in zip(sizes, kappas))
    noncritical = prod(sum(k ** j for j in range(kap)) for k, kap in zip(sizes, kappas))
    critical = n_obs * noncritical
    u = max(range(len(kappas)), key=lambda i: kappas[i])
    lu = kappas[u] + sum(kap - 1 for i, kap in enumerate(kappas) if i != u)
    n = len(nfa.states)
    si_bound = noncritical + critical
    return Bounds(
        delta=(n_obs + 1) * approx,
        delta_c=n_obs * approx,
        noncritical_bound=noncritical,
        critical_bound=critical,
        si_bound=si_bound,
        lu=lu,
        max_css_states=lu * n * n + n + si_bound,
    )
