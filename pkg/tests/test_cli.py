import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import pytest

from dessync.cli import EXIT_MODEL, EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, main
from dessync.model import dump_model, fixture, parse_model

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def model_path():
    return str(resources.files("dessync") / "data" / "fixture.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_model(tmp_path, data):
    path = tmp_path / "model.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_replay_reference_run(capsys, model_path):
    code, out, _ = run(capsys, "replay", model_path, "--trace", "a12 l g3 a12")
    assert code == EXIT_OK
    assert out.splitlines() == ["sync 1: (a12.a12|a12.a12|g3) current={x2,x3,x4} initial={x0}", "pending: (||)"]


def test_replay_two_synchronizations(capsys, model_path):
    code, out, _ = run(capsys, "replay", model_path, "--trace", "a12 l g3 a12 b13 g2 g3 a12")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[1] == "sync 2: (b13|g2|b13.g3) current={x0,x1} initial={x0}"
    assert lines[2] == "pending: (a12|a12|)"


def test_replay_empty_trace(capsys, model_path):
    code, out, _ = run(capsys, "replay", model_path, "--trace", "")
    assert code == EXIT_OK
    assert out.splitlines() == ["no synchronization; current={x0,x1} initial={x0,x1}", "pending: (||)"]


def test_replay_outside_language(capsys, model_path):
    code, _, err = run(capsys, "replay", model_path, "--trace", "b13")
    assert code == EXIT_MODEL and "model error" in err


def test_verify_csso_violated(capsys, model_path):
    code, out, _ = run(capsys, "verify", model_path, "--property", "csso", "--secret", "x2")
    doc = json.loads(out)
    assert code == EXIT_VIOLATED
    assert doc["holds"] is False and doc["witness"] and doc["state"] == ["x2"]


def test_verify_iso_reversed_with_all_initial(capsys, model_path):
    code, out, _ = run(capsys, "verify", model_path, "--property", "iso-reversed", "--secret", "x0",
                       "--initial", "x0,x1,x2,x3,x4")
    assert code == EXIT_VIOLATED
    assert json.loads(out)["witness"]


@pytest.mark.parametrize("prop", ["iso", "iso-reversed", "csso"])
def test_verify_empty_secret_holds(capsys, model_path, prop):
    code, out, _ = run(capsys, "verify", model_path, "--property", prop, "--secret", "")
    assert code == EXIT_OK and json.loads(out)["holds"] is True


def test_verify_iso_secret_outside_initial_is_usage_error(capsys, model_path):
    code, _, err = run(capsys, "verify", model_path, "--property", "iso", "--secret", "x2")
    assert code == EXIT_USAGE and "usage error" in err


def test_bad_arguments_exit_1(capsys, model_path):
    with pytest.raises(SystemExit) as info:
        main(["build", model_path, "--structure", "nonsense"])
    assert info.value.code == EXIT_USAGE
    assert run(capsys, "build", model_path, "--structure", "observer", "--seeds", "x2")[0] == EXIT_USAGE


def test_missing_and_invalid_models_exit_2(capsys, tmp_path, model_path):
    assert run(capsys, "replay", str(tmp_path / "absent.json"), "--trace", "")[0] == EXIT_MODEL
    data = json.loads(Path(model_path).read_text())
    data["sites"][0]["kappa"] = 0
    assert run(capsys, "replay", write_model(tmp_path, data), "--trace", "")[0] == EXIT_MODEL
    data = json.loads(Path(model_path).read_text())
    data["transitions"].append({"from": "x0", "event": "a12", "to": ["nowhere"]})
    assert run(capsys, "replay", write_model(tmp_path, data), "--trace", "")[0] == EXIT_MODEL


def test_build_single_seed_has_three_layers(capsys, model_path):
    code, out, _ = run(capsys, "build", model_path, "--structure", "css", "--seeds", "x2", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert sorted({layer for _, _, layer in doc["states"]}) == [0, 1, 2]
    assert doc["critical"] == ["(b13||b13.g3)"]


def test_build_feasible_css_matches_golden_file(capsys, model_path, tmp_path):
    out_file = tmp_path / "css.dot"
    code, _, _ = run(capsys, "build", model_path, "--structure", "feasible-css", "--out", str(out_file))
    text = out_file.read_text()
    assert code == EXIT_OK
    assert text == (GOLDEN / "fixture_feasible_css.dot").read_text()
    assert text.count('fillcolor="grey80"') == 11


@pytest.mark.parametrize("structure", ["css", "feasible-css", "observer", "iobserver", "reversed"])
@pytest.mark.parametrize("fmt", ["dot", "json"])
def test_build_is_deterministic(capsys, model_path, structure, fmt):
    first = run(capsys, "build", model_path, "--structure", structure, "--format", fmt)
    second = run(capsys, "build", model_path, "--structure", structure, "--format", fmt)
    assert first[0] == EXIT_OK and first == second


def test_observer_without_synchronizations_is_single_node(capsys, tmp_path):
    data = {"states": ["p", "q"], "events": ["a", "u"], "initial": ["p"],
            "transitions": [{"from": "p", "event": "u", "to": ["q"]}],
            "sites": [{"name": "O1", "events": ["a"], "kappa": 1}]}
    code, out, _ = run(capsys, "build", write_model(tmp_path, data), "--structure", "observer", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["states"] == ["{p,q}"] and doc["transitions"] == []


def test_facts_command(capsys, model_path):
    code, out, _ = run(capsys, "facts", model_path)
    assert code == EXIT_OK
    assert out.count("PASS") == 10


def test_model_round_trip():
    model = fixture()
    again = parse_model(json.loads(dump_model(model)))
    assert again == model
    assert dump_model(again) == dump_model(model)


def test_module_entry_point(model_path):
    proc = subprocess.run([sys.executable, "-m", "dessync", "verify", model_path, "--property", "csso"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_VIOLATED
    assert json.loads(proc.stdout)["property"] == "csso"


def test_random_models_round_trip():
    from dessync.generate import instances
    from dessync.model import Model
    for nfa, arch, _ in instances(30, seed=7):
        model = Model(nfa, arch, frozenset(sorted(nfa.initial)[:1]))
        assert parse_model(json.loads(dump_model(model))) == model
