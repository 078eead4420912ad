"""Check the observers against brute-force simulation on random plants.

    DESSYNC_SEED=5 python demos/random_crosscheck.py 50
"""
import sys

from dessync import IObserver, build_do_observer, build_initial_estimator, run_observer
from dessync.generate import instances
from dessync.oracle import realizations

count = int(sys.argv[1]) if len(sys.argv) > 1 else 25
sequences = 0
for nfa, arch, params in instances(count):
    obs, iobs = build_do_observer(nfa, arch), build_initial_estimator(nfa, arch)
    sim = realizations(nfa, arch, nfa.initial, 3)
    for iota, initial in sim.initial.items():
        sequences += 1
        assert run_observer(obs, iota) == frozenset(sim.current[iota]), params
        assert IObserver.first(run_observer(iobs, iota)) == frozenset(initial), params
print(f"{count} plants, {sequences} report sequences: observers agree with simulation")
