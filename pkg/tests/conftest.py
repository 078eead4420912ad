import random

import pytest

from dessync.css import build_css, build_feasible_css
from dessync.estimators import build_do_observer, build_initial_estimator, build_reversed_observer
from dessync.generate import default_seed, instances
from dessync.model import fixture
from dessync.oracle import realizations

RANDOM_INSTANCES = 200
MAX_SYNCS = 3


@pytest.fixture(scope="session")
def model():
    return fixture()


@pytest.fixture
def nfa(model):
    return model.nfa


@pytest.fixture
def arch(model):
    return model.arch


@pytest.fixture
def ids(model):
    """Name lookups for the fixture: ``ids.x("x2")``, ``ids.e("a12")``, ``ids.si("(a12||)")``."""
    from dessync.protocol import parse_si

    class _Ids:
        x = staticmethod(model.nfa.state_id)
        e = staticmethod(model.nfa.event_id)
        xs = staticmethod(lambda *names: model.nfa.state_ids(names))
        si = staticmethod(lambda text: parse_si(model.nfa, model.arch, text))

    return _Ids


class Instance:
    """One random plant with every structure the criteria inspect."""

    def __init__(self, nfa, arch, params):
        self.nfa, self.arch, self.params = nfa, arch, params
        self.css = build_css(nfa, arch)
        self.feasible = build_feasible_css(nfa, arch)
        self.observer = build_do_observer(nfa, arch, self.feasible)
        self.iobserver = build_initial_estimator(nfa, arch, self.feasible)
        self.reversed = build_reversed_observer(nfa, arch, self.css)
        self.oracle = realizations(nfa, arch, nfa.initial, MAX_SYNCS)
        r = random.Random(params.seed)
        init = sorted(nfa.initial)
        self.secret = frozenset(r.sample(init, r.randint(1, len(init))))


@pytest.fixture(scope="session")
def random_batch():
    return [Instance(*inst) for inst in instances(RANDOM_INSTANCES, seed=default_seed())]


def small_instances(**kwargs):
    """Hypothesis strategy of seeded random instances (small by default)."""
    from hypothesis import strategies as st

    from dessync.generate import random_instance
    opts = dict(max_states=4, max_events=4, max_sites=2, max_kappa=2)
    opts.update(kwargs)
    return st.integers(0, 2**32 - 1).map(lambda seed: random_instance(random.Random(seed), **opts))
