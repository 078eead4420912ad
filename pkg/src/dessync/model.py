"""JSON model files: plant, observation sites and optional secret in one document.

Example::

    {
      "states": ["x0", "x1"],
      "events": ["a", "u"],
      "initial": ["x0"],
      "transitions": [{"from": "x0", "event": "a", "to": ["x1"]}],
      "sites": [{"name": "O1", "events": ["a"], "kappa": 2}],
      "secret": ["x1"]
    }
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .automaton import Nfa, StateId
from .errors import ModelError
from .protocol import ObservationArchitecture


@dataclass(frozen=True)
class Model:
    nfa: Nfa
    arch: ObservationArchitecture
    secret: Optional[frozenset[StateId]] = None


def _names(data: dict, key: str) -> list[str]:
    value = data.get(key)
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ModelError(f"model field {key!r} must be a list of names")
    return value


def parse_model(data: dict) -> Model:
    if not isinstance(data, dict):
        raise ModelError("a model file must hold a JSON object")
    states = _names(data, "states")
    events = _names(data, "events")
    initial = _names(data, "initial")
    triples = []
    for t in data.get("transitions", []):
        try:
            src, ev, dsts = t["from"], t["event"], t["to"]
        except (KeyError, TypeError):
            raise ModelError(f"malformed transition entry {t!r}") from None
        if isinstance(dsts, str):
            dsts = [dsts]
        triples.extend((src, ev, d) for d in dsts)
    nfa = Nfa.from_names(states, events, triples, initial)
    sites = data.get("sites")
    if not isinstance(sites, list) or not sites:
        raise ModelError("model needs a non-empty 'sites' list")
    try:
        site_rows = [(s.get("name", ""), s["events"], s["kappa"]) for s in sites]
    except (KeyError, TypeError, AttributeError):
        raise ModelError("every site needs 'events' and 'kappa'") from None
    for _, _, kappa in site_rows:
        if not isinstance(kappa, int) or isinstance(kappa, bool):
            raise ModelError("site thresholds must be integers")
    arch = ObservationArchitecture.from_names(nfa, site_rows)
    secret = data.get("secret")
    return Model(nfa, arch, None if secret is None else nfa.state_ids(secret))


def model_to_dict(model: Model) -> dict:
    nfa = model.nfa
    grouped: dict[tuple[int, int], list[int]] = {}
    for x, e, y in nfa.transitions():
        grouped.setdefault((x, e), []).append(y)
    out = {
        "states": list(nfa.state_names),
        "events": list(nfa.event_names),
        "initial": nfa.state_labels(nfa.initial),
        "transitions": [
            {"from": nfa.state_names[x], "event": nfa.event_names[e], "to": [nfa.state_names[y] for y in ys]}
            for (x, e), ys in sorted(grouped.items())
        ],
        "sites": [
            {"name": s.name, "events": [nfa.event_names[e] for e in sorted(s.observable)], "kappa": s.kappa}
            for s in model.arch.sites
        ],
    }
    if model.secret is not None:
        out["secret"] = nfa.state_labels(model.secret)
    return out


def load_model(path: Union[str, Path]) -> Model:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ModelError(f"cannot read model file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file {path} is not valid JSON: {exc}") from None
    return parse_model(data)


def dump_model(model: Model) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def fixture() -> Model:
    """The bundled five-state example plant with its three observation sites."""
    text = resources.files("dessync").joinpath("data/fixture.json").read_text()
    return parse_model(json.loads(text))
