"""Graphviz DOT and JSON renderings of structures and observers.

Output is deterministic: nodes and edges are emitted in canonical order so
that identical inputs give byte-identical files.
"""
from __future__ import annotations

import json

from .automaton import Nfa
from .css import CssState, CssStructure
from .estimators import Observer
from .protocol import SiState, format_si


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', r'\"') + '"'


def _pair_label(nfa: Nfa, rho: CssState) -> str:
    return f"({nfa.state_names[rho.origin]},{nfa.state_names[rho.current]},{rho.layer})"


def _si_node(nfa: Nfa, tau: SiState) -> str:
    return "si:" + format_si(nfa, tau)


def css_to_dot(nfa: Nfa, css: CssStructure, name: str = "css") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for tau in sorted(css.si_states):
        style = ', style=filled, fillcolor="grey80"' if tau in css.critical else ""
        lines.append(f"  {_q(_si_node(nfa, tau))} [shape=oval, label={_q(format_si(nfa, tau))}{style}];")
    for layer, members in css.layers().items():
        lines.append(f"  subgraph {_q(f'cluster_layer_{layer}')} {{")
        lines.append(f"    style=dotted; label={_q(f'layer {layer}')};")
        for rho in members:
            lines.append(f"    {_q(_pair_label(nfa, rho))} [shape=box];")
        lines.append("  }")
    for rho, sigma, tau in sorted(css.ha):
        lines.append(f"  {_q(_pair_label(nfa, rho))} -> {_q(_si_node(nfa, tau))} "
                     f"[label={_q(nfa.event_names[sigma])}];")
    for tau, sigma, rho in sorted(css.hr, key=lambda t: (t[0], -1 if t[1] is None else t[1], t[2])):
        label = "eps" if sigma is None else nfa.event_names[sigma]
        lines.append(f"  {_q(_si_node(nfa, tau))} -> {_q(_pair_label(nfa, rho))} [label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _state_label(nfa: Nfa, q) -> str:
    items = sorted(q)
    if items and isinstance(items[0], tuple):
        return "{" + ",".join(f"({nfa.state_names[x]},{nfa.state_names[y]})" for x, y in items) + "}"
    return "{" + ",".join(nfa.state_names[x] for x in items) + "}"


def _ordered_states(obs: Observer) -> list:
    """Initial state first, then the rest in canonical order."""
    rest = sorted((q for q in obs.states if q != obs.initial), key=lambda q: (len(q), sorted(q)))
    return [obs.initial] + rest


def observer_to_dot(nfa: Nfa, obs: Observer, name: str = "observer") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", '  "__start" [shape=point];']
    for q in _ordered_states(obs):
        lines.append(f"  {_q(_state_label(nfa, q))} [shape=box];")
    lines.append(f"  \"__start\" -> {_q(_state_label(nfa, obs.initial))};")
    for q in _ordered_states(obs):
        for tau, r in obs.successors(q):
            lines.append(f"  {_q(_state_label(nfa, q))} -> {_q(_state_label(nfa, r))} "
                         f"[label={_q(format_si(nfa, tau))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def css_to_json(nfa: Nfa, css: CssStructure) -> dict:
    fmt = lambda tau: format_si(nfa, tau)  # noqa: E731
    pair = lambda rho: [nfa.state_names[rho.origin], nfa.state_names[rho.current], rho.layer]  # noqa: E731
    return {
        "t0": fmt(css.t0),
        "si_states": [fmt(t) for t in sorted(css.si_states)],
        "critical": [fmt(t) for t in sorted(css.critical)],
        "states": [pair(r) for r in sorted(css.states, key=lambda r: (r.layer, r.origin, r.current))],
        "roots": [pair(r) for r in sorted(css.roots)],
        "ha": [[pair(r), nfa.event_names[s], fmt(t)] for r, s, t in sorted(css.ha)],
        "hr": [[fmt(t), None if s is None else nfa.event_names[s], pair(r)]
               for t, s, r in sorted(css.hr, key=lambda e: (e[0], -1 if e[1] is None else e[1], e[2]))],
        "M": {fmt(t): [[nfa.state_names[x], nfa.state_names[y]] for x, y in sorted(css.csi_index[t])]
              for t in sorted(css.critical)},
    }


def observer_to_json(nfa: Nfa, obs: Observer) -> dict:
    order = _ordered_states(obs)
    return {
        "kind": obs.kind,
        "initial": _state_label(nfa, obs.initial),
        "states": [_state_label(nfa, q) for q in order],
        "transitions": [[_state_label(nfa, q), format_si(nfa, tau), _state_label(nfa, r)]
                        for q in order for tau, r in obs.successors(q)],
    }


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"
