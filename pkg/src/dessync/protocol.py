"""Decentralized observation protocol with per-site thresholds.

Each observation site records the events it can see since the last
synchronization. An SI-state is the tuple of those per-site records; it is
*critical* once some site's record reaches that site's threshold, at which
point the coordinator synchronizes and every record resets to empty.

SI-states are plain ``tuple[tuple[EventId, ...], ...]`` values: tuples already
give value equality, hashing and the canonical lexicographic order (site order,
then event id).
"""
from __future__ import annotations

import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Optional, Protocol

from .automaton import EventId, Nfa, StateId, step
from .errors import CorruptedStateError, ModelError, NotInLanguageError, UndefinedTransitionError, UsageError

SiState = tuple[tuple[EventId, ...], ...]


class EmptySiteWarning(UserWarning):
    """A site observes no event at all and can never trigger a synchronization."""


class SyncStrategy(Protocol):
    """What the constructions need from a synchronization strategy."""

    observable: frozenset[EventId]

    @property
    def initial_si(self) -> SiState: ...

    def is_critical(self, tau: SiState) -> bool: ...

    def absorb(self, tau: SiState, sigma: EventId) -> SiState: ...


@dataclass(frozen=True)
class Site:
    index: int
    observable: frozenset[EventId]
    kappa: int
    name: str = ""


@dataclass(frozen=True)
class ObservationArchitecture:
    """Ordered observation sites plus the threshold synchronization rule.

    ``observers[sigma]`` lists the (0-based) positions of the sites that see
    ``sigma``; ``observable`` is the union of all site alphabets.
    """

    sites: tuple[Site, ...]
    observable: frozenset[EventId] = field(init=False)
    observers: dict[EventId, tuple[int, ...]] = field(init=False, compare=False)

    def __post_init__(self):
        if not self.sites:
            raise ModelError("an observation architecture needs at least one site")
        if [s.index for s in self.sites] != list(range(1, len(self.sites) + 1)):
            raise ModelError("site indices must run 1..m without gaps")
        eI = frozenset().union(*(s.observable for s in self.sites))
        obs = {e: tuple(p for p, s in enumerate(self.sites) if e in s.observable) for e in sorted(eI)}
        object.__setattr__(self, "observable", eI)
        object.__setattr__(self, "observers", obs)

    @classmethod
    def from_names(cls, nfa: Nfa, sites: Iterable[tuple[str, Iterable[str], int]]) -> ObservationArchitecture:
        """Build and validate from ``(site name, event names, kappa)`` triples."""
        built = []
        for i, (name, events, kappa) in enumerate(sites, start=1):
            built.append(Site(i, frozenset(nfa.event_id(e) for e in events), int(kappa), name or f"O{i}"))
        return validate(cls(tuple(built)), nfa)

    @property
    def m(self) -> int:
        return len(self.sites)

    @property
    def kappas(self) -> tuple[int, ...]:
        return tuple(s.kappa for s in self.sites)

    @property
    def initial_si(self) -> SiState:
        return ((),) * len(self.sites)

    def sites_of(self, sigma: EventId) -> tuple[int, ...]:
        """``I(sigma)`` as 1-based site indices."""
        return tuple(p + 1 for p in self.observers.get(sigma, ()))

    def is_critical(self, tau: SiState) -> bool:
        critical = False
        for comp, site in zip(tau, self.sites):
            if len(comp) > site.kappa:
                raise CorruptedStateError(
                    f"site {site.index} holds {len(comp)} events, above its threshold {site.kappa}")
            if len(comp) == site.kappa:
                critical = True
        return critical

    def absorb(self, tau: SiState, sigma: EventId) -> SiState:
        """Absorbing transition: append ``sigma`` to every site observing it."""
        positions = self.observers.get(sigma)
        if positions is None:
            raise UsageError(f"event {sigma!r} is not observable by any site")
        if self.is_critical(tau):
            raise UndefinedTransitionError("cannot absorb into a critical SI-state")
        comps = list(tau)
        for p in positions:
            comps[p] = comps[p] + (sigma,)
        return tuple(comps)

    def is_well_formed(self, tau: SiState) -> bool:
        if len(tau) != self.m:
            return False
        return all(len(c) <= s.kappa and set(c) <= s.observable for c, s in zip(tau, self.sites))


def validate(arch: ObservationArchitecture, nfa: Nfa) -> ObservationArchitecture:
    """Check ``arch`` against the plant; warns on sites that observe nothing."""
    for site in arch.sites:
        if site.kappa < 1:
            raise ModelError(f"site {site.name or site.index} has threshold {site.kappa}; thresholds must be >= 1")
        if not site.observable <= nfa.events:
            raise ModelError(f"site {site.name or site.index} observes events the plant does not declare")
        if not site.observable:
            warnings.warn(f"site {site.name or site.index} observes no events", EmptySiteWarning, stacklevel=2)
    return arch


def format_si(nfa: Nfa, tau: SiState) -> str:
    """Canonical text form, e.g. ``(a12.a12|a12.a12|g3)``."""
    return "(" + "|".join(".".join(nfa.event_names[e] for e in comp) for comp in tau) + ")"


def parse_si(nfa: Nfa, arch: ObservationArchitecture, text: str) -> SiState:
    """Inverse of :func:`format_si`."""
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ModelError(f"SI-state text must be parenthesised: {text!r}")
    parts = text[1:-1].split("|")
    if len(parts) != arch.m:
        raise ModelError(f"SI-state {text!r} has {len(parts)} components, expected {arch.m}")
    tau = tuple(tuple(nfa.event_id(e) for e in part.split(".")) if part else () for part in parts)
    if not arch.is_well_formed(tau):
        raise ModelError(f"SI-state {text!r} is not well formed for this architecture")
    return tau


@dataclass
class Run:
    """A string cut at its synchronizations.

    ``segments`` has one entry per synchronization plus the trailing,
    not-yet-synchronized part; ``csi_trace`` is the DO-projection of the input.
    """

    segments: list[tuple[EventId, ...]]
    csi_trace: list[SiState]
    pending: SiState
    estimates: Optional[list[tuple[frozenset[StateId], frozenset[StateId]]]] = None


def replay(nfa: Nfa, arch: SyncStrategy, s: Sequence[EventId]) -> Run:
    """Split ``s`` into its run and compute the CSI-states the coordinator receives."""
    s = tuple(s)
    if not step(nfa, nfa.initial, s):
        raise NotInLanguageError("string is not generated by the plant from its initial states")
    tau = arch.initial_si
    segments: list[tuple[EventId, ...]] = []
    trace: list[SiState] = []
    start = 0
    for k, e in enumerate(s):
        if e not in arch.observable:
            continue
        tau = arch.absorb(tau, e)
        if arch.is_critical(tau):
            trace.append(tau)
            segments.append(s[start:k + 1])
            start = k + 1
            tau = arch.initial_si
    segments.append(s[start:])
    return Run(segments, trace, tau)
