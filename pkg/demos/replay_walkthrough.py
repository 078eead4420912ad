"""Replay a plant string on the bundled model and watch the coordinator's estimates.

    python demos/replay_walkthrough.py
"""
from dessync import fixture, format_si, replay_estimates

model = fixture()
nfa, arch = model.nfa, model.arch

for site in arch.sites:
    seen = ", ".join(nfa.event_names[e] for e in sorted(site.observable))
    print(f"site {site.name}: sees {{{seen}}}, reports after {site.kappa} events")

s = nfa.event_ids("a12 l g3 a12 b13 g2 g3 a12".split())
run = replay_estimates(nfa, arch, s)

# Each segment ends at the event that filled some site's buffer.
for segment, tau, (current, initial) in zip(run.segments, run.csi_trace, run.estimates):
    events = " ".join(nfa.event_names[e] for e in segment)
    print(f"{events:<12} -> {format_si(nfa, tau):<24} "
          f"now in {nfa.state_labels(current)}, started in {nfa.state_labels(initial)}")
print("still buffered:", format_si(nfa, run.pending))
