"""Seeded random plants and observation architectures for property testing.

The default seed comes from the ``DESSYNC_SEED`` environment variable so a
failing batch can be reproduced exactly.
"""
from __future__ import annotations

import os
import random
from dataclasses import dataclass

from .automaton import Nfa
from .protocol import ObservationArchitecture, Site

DEFAULT_SEED = 20240917


def default_seed() -> int:
    return int(os.environ.get("DESSYNC_SEED", DEFAULT_SEED))


@dataclass(frozen=True)
class InstanceParams:
    n_states: int
    n_events: int
    n_sites: int
    kappas: tuple[int, ...]
    density: float
    seed: int

    def __str__(self):
        return (f"seed={self.seed} |X|={self.n_states} |E|={self.n_events} m={self.n_sites} "
                f"kappa={self.kappas} density={self.density:.2f}")


def random_instance(rng: random.Random, max_states=6, max_events=5, max_sites=3, max_kappa=3,
                    density=None, n_initial=None, n_states=None, n_sites=None, kappa=None):
    """Draw ``(nfa, arch, params)`` within the given bounds.

    ``n_states``, ``n_sites`` and ``kappa`` pin the corresponding size instead
    of drawing it.
    """
    seed = rng.randrange(2**31)
    r = random.Random(seed)
    n = r.randint(2, max_states) if n_states is None else n_states
    k = r.randint(2, max_events)
    m = r.randint(1, max_sites) if n_sites is None else n_sites
    kappas = tuple(r.randint(1, max_kappa) if kappa is None else kappa for _ in range(m))
    p = r.uniform(0.08, 0.3) if density is None else density

    delta = {}
    for x in range(n):
        for e in range(k):
            targets = {y for y in range(n) if r.random() < p}
            if targets:
                delta[(x, e)] = targets
    n_init = r.randint(1, min(2, n)) if n_initial is None else n_initial
    initial = r.sample(range(n), n_init)
    nfa = Nfa([f"x{i}" for i in range(n)], [f"e{j}" for j in range(k)], delta, initial)

    # at least one observable event per instance; some events stay unobservable
    observable = [e for e in range(k) if r.random() < 0.75] or [r.randrange(k)]
    sites = []
    for i in range(m):
        own = {e for e in observable if r.random() < 0.6}
        if not own:
            own = {r.choice(observable)}
        sites.append(Site(i + 1, frozenset(own), kappas[i], f"O{i + 1}"))
    arch = ObservationArchitecture(tuple(sites))
    return nfa, arch, InstanceParams(n, k, m, kappas, p, seed)


def instances(count: int, seed=None, **kwargs):
    """Yield ``count`` reproducible instances."""
    rng = random.Random(default_seed() if seed is None else seed)
    for _ in range(count):
        yield random_instance(rng, **kwargs)
