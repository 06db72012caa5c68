import json

import pytest

from biext.cli import main

WEIL_F7 = {"curve": {"p": 7, "curve": "elliptic", "a": -1, "b": 0}, "P": {"x": 0, "y": 0},
           "Q": {"x": 1, "y": 0}, "l": 2}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_weil_forced_value(capsys):
    code, out, _ = run(capsys, "weil", "--input", json.dumps(WEIL_F7))
    report = json.loads(out)
    assert code == 0 and report["value"] == "6" and report["agree"] and report["order"] == "2"


def test_output_is_deterministic(capsys):
    first = run(capsys, "weil", "--input", json.dumps(WEIL_F7), "--seed", "11")[1]
    second = run(capsys, "weil", "--input", json.dumps(WEIL_F7), "--seed", "11")[1]
    assert first == second


def test_input_from_file(capsys, tmp_path):
    path = tmp_path / "weil.json"
    path.write_text(json.dumps(WEIL_F7))
    assert run(capsys, "weil", "--input", str(path))[0] == 0


def test_reciprocity_on_p1(capsys):
    data = {"curve": {"p": 7, "curve": "p1"},
            "f": {"factors": [{"kind": "linear", "a": 0}, {"kind": "linear", "a": 2, "exp": -1}]},
            "g": {"factors": [{"kind": "linear", "a": 1}, {"kind": "linear", "a": 3, "exp": -1}]}}
    code, out, _ = run(capsys, "reciprocity", "--input", json.dumps(data))
    assert code == 0 and json.loads(out) == {"equal": True, "lhs": "2", "rhs": "2"}


def test_tame_product_and_single_place(capsys):
    data = {"curve": {"p": 7, "curve": "p1"}, "f": {"factors": [{"kind": "linear", "a": 0}]},
            "g": {"factors": [{"kind": "linear", "a": 0}]}}
    code, out, _ = run(capsys, "tame", "--input", json.dumps(data))
    assert code == 0 and json.loads(out)["product"] == "1"
    data["at"] = {"x": 0}
    code, out, _ = run(capsys, "tame", "--input", json.dumps(data))
    assert json.loads(out)["symbol"] == "6"


def test_torus_weil_and_height(capsys):
    base = {"hodge": {"lattice": ["1", "1j"]}}
    code, out, _ = run(capsys, "torus", "--input",
                       json.dumps(dict(base, action="weil", e=["0.5", "0"], f=["0", "0.5"], l=2, expected="-1")))
    assert code == 0 and float(json.loads(out)["value"][0]) == pytest.approx(-1)
    code, out, _ = run(capsys, "torus", "--input",
                       json.dumps(dict(base, action="height", phi=["1", "0"], phi_dual=["0", "1j"])))
    assert float(json.loads(out)["height"]) == pytest.approx(-6.283185307179586)


def test_torus_axioms(capsys):
    data = {"hodge": {"F0": [["1", "1j"]], "Q": [[0, 1], [-1, 0]]}, "action": "axioms", "samples": 10}
    code, out, _ = run(capsys, "torus", "--input", json.dumps(data))
    assert code == 0 and int(json.loads(out)["checks"]["interchange"]) == 10


def test_disagreement_exits_two(capsys):
    data = {"hodge": {"lattice": ["1", "1j"]}, "action": "weil", "e": ["0.5", "0"], "f": ["0", "0.5"],
            "l": 2, "expected": "1"}
    assert run(capsys, "torus", "--input", json.dumps(data))[0] == 2


def test_broken_hodge_structure_names_the_invariant(capsys):
    data = {"hodge": {"F0": [["1", "1"]], "Q": [[0, 1], [-1, 0]]}, "action": "axioms"}
    code, out, err = run(capsys, "torus", "--input", json.dumps(data))
    assert code == 1 and out == ""
    assert json.loads(err)["invariant"] == "F0 complementary to its conjugate"


@pytest.mark.parametrize("payload", [
    "not json at all {",
    json.dumps(dict(WEIL_F7, extra=1)),
    json.dumps(dict(WEIL_F7, P={"x": 0, "y": 1})),
    json.dumps({k: v for k, v in WEIL_F7.items() if k != "l"}),
    json.dumps(dict(WEIL_F7, l=3)),
])
def test_bad_input_exits_one(capsys, payload):
    code, out, err = run(capsys, "weil", "--input", payload)
    assert code == 1 and out == "" and "error" in json.loads(err)


def test_massey_text_format(capsys):
    code, out, _ = run(capsys, "massey", "--format", "text")
    assert code == 0 and "agree: true" in out
