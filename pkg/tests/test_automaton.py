import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dessync.automaton import Nfa, ReachCache, observable_reach, project, step, unobservable_reach
from dessync.errors import ModelError, UsageError
from dessync.oracle import oracle_observable_reach, oracle_unobservable_reach

from .conftest import small_instances


def test_unobservable_reach_of_x0(nfa, arch, ids):
    assert unobservable_reach(nfa, arch.observable, ids.xs("x0")) == ids.xs("x0", "x1")


@pytest.mark.parametrize("source, event, expected", [
    ("x0", "a12", {"x2", "x3", "x4"}),
    ("x1", "a12", {"x2"}),
    ("x2", "b13", {"x3"}),
    ("x3", "g3", {"x0", "x1"}),
])
def test_observable_reach_on_fixture(nfa, arch, ids, source, event, expected):
    assert observable_reach(nfa, arch.observable, ids.xs(source), ids.e(event)) == ids.xs(*expected)


def test_observable_reach_rejects_unobserved_event(nfa, arch, ids):
    with pytest.raises(UsageError):
        observable_reach(nfa, arch.observable, ids.xs("x0"), ids.e("u"))


def test_step_follows_reference_string(nfa, ids):
    s = [ids.e(n) for n in ("a12", "l", "g3", "a12")]
    assert ids.x("x4") in step(nfa, ids.xs("x0"), s)
    assert step(nfa, ids.xs("x2"), [ids.e("a12")]) == frozenset()


def test_step_rejects_unknown_ids(nfa):
    with pytest.raises(ModelError):
        step(nfa, {99}, [])
    with pytest.raises(ModelError):
        step(nfa, {0}, [99])


def test_project_keeps_order():
    assert project([3, 1, 2, 1, 0], {1, 2}) == (1, 2, 1)
    assert project([], {1}) == ()


def test_from_names_checks_references():
    with pytest.raises(ModelError):
        Nfa.from_names(["a"], ["e"], [("a", "e", "b")], ["a"])
    with pytest.raises(ModelError):
        Nfa.from_names(["a"], ["e"], [], [])


@settings(max_examples=60, deadline=None)
@given(small_instances(), st.lists(st.integers(0, 3), max_size=4), st.lists(st.integers(0, 3), max_size=4))
def test_step_is_associative(inst, s, t):
    nfa, _, _ = inst
    s = [e % len(nfa.events) for e in s]
    t = [e % len(nfa.events) for e in t]
    assert step(nfa, nfa.initial, s + t) == step(nfa, step(nfa, nfa.initial, s), t)


@settings(max_examples=60, deadline=None)
@given(small_instances(), st.sets(st.integers(0, 3)), st.sets(st.integers(0, 3)))
def test_unobservable_reach_closure_laws(inst, a, b):
    nfa, arch, _ = inst
    n = len(nfa.states)
    a = {x % n for x in a}
    b = a | {x % n for x in b}
    ur = lambda s: unobservable_reach(nfa, arch.observable, s)  # noqa: E731
    assert a <= ur(a)
    assert ur(ur(a)) == ur(a)
    assert ur(a) <= ur(b)


@settings(max_examples=40, deadline=None)
@given(small_instances())
def test_reach_operators_match_enumeration(inst):
    nfa, arch, _ = inst
    cache = ReachCache(nfa, arch.observable)
    for x in sorted(nfa.states):
        assert cache.ur(x) == oracle_unobservable_reach(nfa, arch, {x})
        for sigma in sorted(arch.observable):
            expected = oracle_observable_reach(nfa, arch, {x}, sigma)
            assert observable_reach(nfa, arch.observable, {x}, sigma) == expected
            assert cache.after(x, sigma) == expected
