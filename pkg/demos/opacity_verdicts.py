"""Can an intruder who intercepts the synchronized reports learn a secret?

    python demos/opacity_verdicts.py
"""
from dessync import (build_do_observer, build_initial_estimator, build_reversed_observer, fixture, format_si,
                     verify_csso, verify_iso_via_estimator, verify_iso_via_reversed)


def show(nfa, verdict):
    if verdict.holds:
        print(f"  {verdict.property}: opaque")
    else:
        trail = " ".join(format_si(nfa, t) for t in verdict.witness) or "(nothing received yet)"
        print(f"  {verdict.property}: leaks after {trail}")


model = fixture()
nfa, arch = model.nfa, model.arch

# Is the plant ever known to be in x2 right after a synchronization?
print("secret {x2}, plant starts in {x0,x1}")
show(nfa, verify_csso(build_do_observer(nfa, arch), nfa.state_ids(["x2"])))

# If the plant may start anywhere, can the intruder ever be sure it started in x0?
# The two checks take different routes and must agree.
anywhere = nfa.with_initial(nfa.states)
secret = nfa.state_ids(["x0"])
print("secret initial state {x0}, plant may start anywhere")
show(nfa, verify_iso_via_estimator(build_initial_estimator(anywhere, arch), anywhere.initial, secret))
show(nfa, verify_iso_via_reversed(build_reversed_observer(anywhere, arch), anywhere.initial, secret))
