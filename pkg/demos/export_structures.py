"""Build every structure for the bundled model and write Graphviz files.

    python demos/export_structures.py out/
    dot -Tsvg out/feasible_css.dot -o feasible_css.svg
"""
import sys
from pathlib import Path

from dessync import (build_css, build_do_observer, build_feasible_css, build_initial_estimator,
                     build_reversed_observer, fixture, size_bounds)
from dessync.export import css_to_dot, observer_to_dot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "structures")
out.mkdir(parents=True, exist_ok=True)
model = fixture()
nfa, arch = model.nfa, model.arch

full = build_css(nfa, arch)
feasible = build_feasible_css(nfa, arch)
b = size_bounds(arch, nfa)
print(f"full structure: {len(full.states)} state pairs, {len(full.si_states)} SI-states "
      f"({len(full.critical)} critical), deepest layer {full.max_layer}")
print(f"worst case: {b.si_bound} SI-states, layer {b.lu}")

(out / "full_css.dot").write_text(css_to_dot(nfa, full, "full"))
(out / "feasible_css.dot").write_text(css_to_dot(nfa, feasible, "feasible"))
for name, obs in [("observer", build_do_observer(nfa, arch, feasible)),
                  ("iobserver", build_initial_estimator(nfa, arch, feasible)),
                  ("reversed", build_reversed_observer(nfa, arch, full))]:
    (out / f"{name}.dot").write_text(observer_to_dot(nfa, obs, name))
    print(f"{name}: {len(obs.states)} states")
print("wrote", ", ".join(sorted(p.name for p in out.glob("*.dot"))))
