"""biextctl: JSON in, JSON (or text) out.

Exit status 0 means success, 1 an input error, 2 a mathematical
disagreement or a residual above tolerance.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import acceptance
from .axioms import check_axioms
from .chainpairing import biextension_from_chain_pairing, chain_pairing_from_json, massey_weil, toy_chain_pairing
from .curves import EllipticCurve
from .functions import tame_reciprocity, tame_symbol, weil_reciprocity_check
from .hodge import (Tolerance, analytic_weil, complex_to_json, dual_hs, height_trivialization,
                    hodge_from_json, parse_complex)
from .instances import torus_instance
from .pairing import weil_pairing_oracle, weil_pairing_points
from .serialize import (InputError, curve_from_json, element_to_json, function_from_json,
                        point_from_json, point_to_json, reject_unknown)

EXIT_OK, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2


class Outcome:
    def __init__(self, report: dict, ok: bool = True):
        self.report, self.ok = report, ok


def load_input(source: str | None) -> dict:
    if source is None:
        return {}
    text = sys.stdin.read() if source == "-" else (source if source.lstrip().startswith("{") else Path(source).read_text())
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e}") from None
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    return data


def _need(data: Mapping, *keys: str) -> None:
    missing = [k for k in keys if k not in data]
    if missing:
        raise InputError(f"missing field(s): {', '.join(missing)}")


# -- subcommands -------------------------------------------------------------------

def cmd_weil(data: dict, args) -> Outcome:
    reject_unknown(data, {"curve", "P", "Q", "l"}, "weil input")
    _need(data, "curve", "P", "Q", "l")
    E = curve_from_json(data["curve"])
    if not isinstance(E, EllipticCurve):
        raise InputError("the Weil pairing needs an elliptic curve")
    P, Q, l = point_from_json(E, data["P"]), point_from_json(E, data["Q"]), int(data["l"])
    value = weil_pairing_points(E, P, Q, l, seed=args.seed)
    oracle = weil_pairing_oracle(E, P, Q, l, seed=args.seed)
    agree = value == oracle
    return Outcome({"P": point_to_json(P), "Q": point_to_json(Q), "l": str(l),
                    "value": element_to_json(value), "order": str(value.multiplicative_order()),
                    "oracle_value": element_to_json(oracle), "agree": agree}, agree)


def cmd_reciprocity(data: dict, args) -> Outcome:
    reject_unknown(data, {"curve", "f", "g"}, "reciprocity input")
    _need(data, "curve", "f", "g")
    c = curve_from_json(data["curve"])
    f, g = function_from_json(c, data["f"]), function_from_json(c, data["g"])
    lhs, rhs, equal = weil_reciprocity_check(f, g)
    return Outcome({"lhs": element_to_json(lhs), "rhs": element_to_json(rhs), "equal": equal}, equal)


def cmd_tame(data: dict, args) -> Outcome:
    reject_unknown(data, {"curve", "f", "g", "at"}, "tame input")
    _need(data, "curve", "f", "g")
    c = curve_from_json(data["curve"])
    f, g = function_from_json(c, data["f"]), function_from_json(c, data["g"])
    if "at" in data:
        P = point_from_json(c, data["at"])
        return Outcome({"at": point_to_json(P), "symbol": element_to_json(tame_symbol(f, g, P))})
    product, symbols = tame_reciprocity(f, g)
    trivial = product == c.F.one
    places = [{"at": point_to_json(P), "symbol": element_to_json(v)} for P, v in symbols.items()]
    return Outcome({"product": element_to_json(product), "places": places, "trivial": trivial}, trivial)


def _vector(v) -> np.ndarray:
    return np.array([parse_complex(x) for x in v], dtype=complex)


def cmd_torus(data: dict, args) -> Outcome:
    reject_unknown(data, {"hodge", "action", "e", "f", "l", "phi", "phi_dual", "samples", "expected"},
                   "torus input")
    _need(data, "hodge", "action")
    tol = Tolerance(args.tolerance) if args.tolerance else None
    h = hodge_from_json(data["hodge"], tol)
    eps = h.tol.eps
    action = data["action"]
    residuals: list[dict] = [r.to_json() for r in h.invariants()]
    report: dict[str, Any] = {"action": action, "condition_number": repr(h.condition_number)}
    ok = True
    if action == "axioms":
        r = check_axioms(torus_instance("input", h, args.seed), samples=int(data.get("samples", 100)),
                         seed=args.seed)
        report["checks"] = {k: str(v) for k, v in sorted(r.counts.items())}
    elif action == "weil":
        _need(data, "e", "f", "l")
        l = int(data["l"])
        v = analytic_weil(h, _vector(data["e"]), _vector(data["f"]), l, dual_hs(h))
        report["value"] = complex_to_json(v)
        checks = [("l-th root of unity", abs(v ** l - 1)), ("unit modulus", abs(abs(v) - 1))]
        if "expected" in data:
            checks.append(("matches expected", abs(v - parse_complex(data["expected"]))))
        for name, res in checks:
            residuals.append({"name": name, "residual": repr(float(res)), "ok": res <= eps})
            ok &= res <= eps
    elif action == "height":
        _need(data, "phi", "phi_dual")
        report["height"] = repr(height_trivialization(h, _vector(data["phi"]), _vector(data["phi_dual"])))
        if "expected" in data:
            res = abs(float(report["height"]) - float(data["expected"]))
            residuals.append({"name": "matches expected", "residual": repr(res), "ok": res <= eps})
            ok &= res <= eps
    else:
        raise InputError(f"torus action must be axioms, weil or height, not {action!r}")
    report["residuals"] = residuals
    return Outcome(report, ok)


def cmd_massey(data: dict, args) -> Outcome:
    reject_unknown(data, {"chain_pairing", "a", "b", "l", "a_bound", "b_bound"}, "massey input")
    cp = chain_pairing_from_json(data["chain_pairing"]) if "chain_pairing" in data else toy_chain_pairing()
    a, b = tuple(int(x) for x in data.get("a", [1])), tuple(int(x) for x in data.get("b", [1]))
    l = int(data.get("l", 2))
    a_bound = tuple(int(x) for x in data.get("a_bound", [1]))
    b_bound = tuple(int(x) for x in data.get("b_bound", [1]))
    m = massey_weil(cp, a, b, l, a_bound, b_bound)
    w = biextension_from_chain_pairing(cp, seed=args.seed).weil_pairing(a, b, l)
    agree = cp.N.reduce(m) == cp.N.reduce(w)
    return Outcome({"massey": [str(x) for x in m], "weil": [str(x) for x in w], "agree": agree}, agree)


def cmd_selftest(data: dict, args) -> Outcome:
    results = acceptance.run_all(args.seed)
    ok = all(r.passed for r in results)
    return Outcome({"criteria": [r.to_json() for r in results], "passed": ok,
                    "_lines": [r.line() for r in results]}, ok)


COMMANDS = {"weil": cmd_weil, "reciprocity": cmd_reciprocity, "tame": cmd_tame, "torus": cmd_torus,
            "massey": cmd_massey, "selftest": cmd_selftest}


# -- output ------------------------------------------------------------------------

def render_text(report: dict, indent: str = "") -> list[str]:
    lines = []
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines += render_text(v, indent + "  ")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{k}:")
            for item in v:
                lines.append(f"{indent}  - " + ", ".join(f"{a}={json.dumps(b)}" for a, b in item.items()))
        else:
            lines.append(f"{indent}{k}: {json.dumps(v)}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biextctl", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=sorted(COMMANDS))
    parser.add_argument("--input", help="path to a JSON file, inline JSON, or - for stdin")
    parser.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    parser.add_argument("--tolerance", type=float, help="override the analytic tolerance")
    parser.add_argument("--format", choices=["text", "json"], default="json")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if not 0 <= args.seed < 2 ** 64:
        print("error: seed must be a 64-bit unsigned integer", file=sys.stderr)
        return EXIT_INPUT
    try:
        data = load_input(args.input)
        if args.tolerance is not None:
            Tolerance(args.tolerance)
        random.seed(args.seed)
        outcome = COMMANDS[args.subcommand](data, args)
    except (OSError, KeyError, TypeError, ValueError) as e:
        # malformed JSON, failed invariants and violated preconditions all land here
        message = f"missing field {e}" if isinstance(e, KeyError) else str(e)
        name = getattr(e, "invariant", None)
        payload = {"error": message} if name is None else {"error": message, "invariant": name}
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        return EXIT_INPUT
    report = dict(outcome.report)
    lines = report.pop("_lines", None)
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    elif lines is not None:
        print("\n".join(lines))
    else:
        print("\n".join(render_text(report)))
    return EXIT_OK if outcome.ok else EXIT_DISAGREE


if __name__ == "__main__":
    sys.exit(main())
