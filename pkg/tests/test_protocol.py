import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dessync.errors import CorruptedStateError, ModelError, NotInLanguageError, UndefinedTransitionError, UsageError
from dessync.oracle import do_projection
from dessync.protocol import EmptySiteWarning, ObservationArchitecture, Site, format_si, parse_si, replay, validate

from .conftest import small_instances


def test_sites_of_event(arch, ids):
    assert arch.sites_of(ids.e("a12")) == (1, 2)
    assert arch.sites_of(ids.e("g3")) == (3,)
    assert arch.sites_of(ids.e("u")) == ()


def test_absorb_appends_to_observing_sites(arch, ids, nfa):
    tau = arch.absorb(arch.initial_si, ids.e("a12"))
    assert format_si(nfa, tau) == "(a12|a12|)"
    tau = arch.absorb(tau, ids.e("b13"))
    assert format_si(nfa, tau) == "(a12.b13|a12|b13)"
    assert arch.is_critical(tau)


def test_absorb_is_undefined_on_critical_states(arch, ids):
    with pytest.raises(UndefinedTransitionError):
        arch.absorb(ids.si("(a12.b13|a12|b13)"), ids.e("g3"))


def test_absorb_rejects_unobserved_event(arch, ids):
    with pytest.raises(UsageError):
        arch.absorb(arch.initial_si, ids.e("l"))


def test_overfull_component_is_reported(arch, ids):
    a = ids.e("a12")
    with pytest.raises(CorruptedStateError):
        arch.is_critical(((a, a, a), (), ()))


def test_replay_reference_run(nfa, arch, ids):
    s = [ids.e(n) for n in "a12 l g3 a12 b13 g2 g3 a12".split()]
    run = replay(nfa, arch, s)
    assert [format_si(nfa, t) for t in run.csi_trace] == ["(a12.a12|a12.a12|g3)", "(b13|g2|b13.g3)"]
    assert format_si(nfa, run.pending) == "(a12|a12|)"
    assert [len(seg) for seg in run.segments] == [4, 3, 1]


def test_replay_empty_string(nfa, arch):
    run = replay(nfa, arch, [])
    assert run.csi_trace == [] and run.pending == arch.initial_si


def test_replay_rejects_strings_outside_language(nfa, arch, ids):
    with pytest.raises(NotInLanguageError):
        replay(nfa, arch, [ids.e("b13")])


def test_validate_rejects_zero_threshold(nfa, ids):
    arch = ObservationArchitecture((Site(1, frozenset({ids.e("a12")}), 0),))
    with pytest.raises(ModelError):
        validate(arch, nfa)


def test_validate_rejects_foreign_events(nfa):
    arch = ObservationArchitecture((Site(1, frozenset({42}), 1),))
    with pytest.raises(ModelError):
        validate(arch, nfa)


def test_validate_warns_on_empty_site(nfa, ids):
    arch = ObservationArchitecture((Site(1, frozenset({ids.e("a12")}), 1), Site(2, frozenset(), 2)))
    with pytest.warns(EmptySiteWarning):
        validate(arch, nfa)


def test_parse_si_errors(nfa, arch):
    for text in ["a12||", "(a12|a12)", "(a12.a12.a12||)", "(g3||)"]:
        with pytest.raises(ModelError):
            parse_si(nfa, arch, text)


@settings(max_examples=60, deadline=None)
@given(small_instances(max_kappa=3), st.lists(st.integers(0, 3), max_size=12))
def test_replay_invariants(inst, raw):
    nfa, arch, _ = inst
    # walk the plant so the string is in the language
    s, current = [], set(nfa.initial)
    for r in raw:
        e = r % len(nfa.events)
        nxt = {y for x in current for y in nfa.successors(x, e)}
        if nxt:
            s.append(e)
            current = nxt
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptySiteWarning)
        run = replay(nfa, arch, s)
    assert sum(run.segments, ()) == tuple(s)
    assert all(arch.is_critical(t) for t in run.csi_trace)
    assert not arch.is_critical(run.pending)
    assert (tuple(run.csi_trace), run.pending) == do_projection(arch, s)
    for t in run.csi_trace + [run.pending]:
        assert parse_si(nfa, arch, format_si(nfa, t)) == t
