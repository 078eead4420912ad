"""Command-line front end.

Exit codes: 0 success / property holds, 1 usage error, 2 model error,
3 property violated.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import estimators, opacity
from .css import build_css, build_feasible_css
from .errors import DessyncError, ModelError, NotInLanguageError, UsageError
from .export import css_to_dot, css_to_json, dumps, observer_to_dot, observer_to_json
from .model import Model, load_model
from .oracle import check_golden_facts, load_facts
from .protocol import format_si

EXIT_OK, EXIT_USAGE, EXIT_MODEL, EXIT_VIOLATED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _split(values):
    out = []
    for v in values or []:
        out.extend(p for p in v.replace(",", " ").split() if p)
    return out


def _model(args) -> Model:
    model = load_model(args.model)
    if getattr(args, "initial", None):
        nfa = model.nfa.with_initial(model.nfa.state_ids(_split(args.initial)))
        model = Model(nfa, model.arch, model.secret)
    return model


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    model = _model(args)
    nfa, arch = model.nfa, model.arch
    kind = args.structure
    if args.seeds and kind != "css":
        raise UsageError("--seeds only applies to --structure css")
    if kind == "css":
        seeds = nfa.state_ids(_split(args.seeds)) if args.seeds else None
        css = build_css(nfa, arch, seeds)
        text = css_to_dot(nfa, css) if args.format == "dot" else dumps(css_to_json(nfa, css))
    elif kind == "feasible-css":
        css = build_feasible_css(nfa, arch)
        text = css_to_dot(nfa, css) if args.format == "dot" else dumps(css_to_json(nfa, css))
    else:
        builder = {
            "observer": estimators.build_do_observer,
            "iobserver": estimators.build_initial_estimator,
            "reversed": estimators.build_reversed_observer,
        }[kind]
        obs = builder(nfa, arch)
        text = observer_to_dot(nfa, obs, kind) if args.format == "dot" else dumps(observer_to_json(nfa, obs))
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    model = _model(args)
    nfa, arch = model.nfa, model.arch
    if args.secret is not None:
        secret = nfa.state_ids(_split(args.secret))
    elif model.secret is not None:
        secret = model.secret
    else:
        raise UsageError("no secret given and the model declares none")
    if args.property == "iso":
        verdict = opacity.verify_iso_via_estimator(estimators.build_initial_estimator(nfa, arch), nfa.initial, secret)
    elif args.property == "iso-reversed":
        verdict = opacity.verify_iso_via_reversed(estimators.build_reversed_observer(nfa, arch), nfa.initial, secret)
    else:
        verdict = opacity.verify_csso(estimators.build_do_observer(nfa, arch), secret)
    sys.stdout.write(json.dumps(verdict.to_json(nfa)) + "\n")
    return EXIT_OK if verdict.holds else EXIT_VIOLATED


def _fmt_set(nfa, states) -> str:
    return "{" + ",".join(nfa.state_labels(states)) + "}"


def cmd_replay(args) -> int:
    model = _model(args)
    nfa, arch = model.nfa, model.arch
    trace = nfa.event_ids(_split([args.trace]))
    run = estimators.replay_estimates(nfa, arch, trace)
    out = sys.stdout
    for k, (tau, (cur, init)) in enumerate(zip(run.csi_trace, run.estimates), start=1):
        out.write(f"sync {k}: {format_si(nfa, tau)} current={_fmt_set(nfa, cur)} initial={_fmt_set(nfa, init)}\n")
    if not run.csi_trace:
        from .automaton import unobservable_reach
        out.write(f"no synchronization; current={_fmt_set(nfa, unobservable_reach(nfa, arch.observable, nfa.initial))}"
                  f" initial={_fmt_set(nfa, nfa.initial)}\n")
    out.write(f"pending: {format_si(nfa, run.pending)}\n")
    return EXIT_OK


def cmd_facts(args) -> int:
    model = _model(args)
    facts = load_facts(json.loads(Path(args.facts).read_text())) if args.facts else None
    report = check_golden_facts(model.nfa, model.arch, facts, raise_on_failure=False)
    failed = 0
    for fact, ok, got in report:
        sys.stdout.write(f"{'PASS' if ok else 'FAIL'} {fact.name} ({fact.kind})"
                         + ("" if ok else f": observed {got!r}") + "\n")
        failed += not ok
    return EXIT_OK if not failed else EXIT_MODEL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dessync", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("model", help="JSON model file")
        p.add_argument("--initial", action="append", help="override the initial states (comma separated)")

    p = sub.add_parser("build", help="construct a structure and write it as DOT or JSON")
    common(p)
    p.add_argument("--structure", required=True,
                   choices=["css", "feasible-css", "observer", "iobserver", "reversed"])
    p.add_argument("--seeds", action="append", help="root states for --structure css (default: all)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="decide an opacity property and print a JSON verdict")
    common(p)
    p.add_argument("--property", required=True, choices=["iso", "iso-reversed", "csso"])
    p.add_argument("--secret", action="append", help="secret states (comma separated); default: model's secret")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="replay a plant string and report every synchronization")
    common(p)
    p.add_argument("--trace", required=True, help='space separated event names, e.g. "a12 l g3 a12"')
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("facts", help="check golden facts against a model")
    common(p)
    p.add_argument("--facts", help="facts JSON file (default: the bundled fixture facts)")
    p.set_defaults(func=cmd_facts)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, NotInLanguageError) as exc:
        sys.stderr.write(f"dessync: model error: {exc}\n")
        return EXIT_MODEL
    except UsageError as exc:
        sys.stderr.write(f"dessync: usage error: {exc}\n")
        return EXIT_USAGE
    except DessyncError as exc:
        sys.stderr.write(f"dessync: {exc}\n")
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
