"""JSON encodings of fields, curves, points, divisors and functions.

Exact values are written as decimal strings (a prime-field element) or
arrays of decimal strings (coefficients over the prime field, constant term
first).  Points are ``{"x": .., "y": .., "inf": false}``; a divisor is a list
of points carrying a ``"mult"`` key.
"""

from __future__ import annotations

from typing import Any, Mapping

from .curves import INF, Curve, Divisor, EllipticCurve, Point, ProjectiveLine
from .fields import FieldElement, FiniteField
from .functions import FunctionProgram, Linear, function_with_divisor, line_through, vertical_at


class InputError(ValueError):
    """Malformed or inconsistent JSON input."""


def reject_unknown(data: Mapping, allowed: set[str], where: str) -> None:
    extra = set(data) - allowed
    if extra:
        raise InputError(f"unknown field(s) in {where}: {', '.join(sorted(extra))}")


def _int(v) -> int:
    if isinstance(v, bool):
        raise InputError(f"expected an integer, got {v!r}")
    try:
        return int(v)
    except (TypeError, ValueError):
        raise InputError(f"expected an integer, got {v!r}") from None


def field_from_json(data: Mapping[str, Any]) -> FiniteField:
    p, k = _int(data["p"]), _int(data.get("k", 1))
    modulus = data.get("modulus")
    try:
        return FiniteField(p, k, None if modulus is None else tuple(_int(c) for c in modulus))
    except ValueError as e:
        raise InputError(str(e)) from None


def element_from_json(F: FiniteField, v) -> FieldElement:
    if isinstance(v, (list, tuple)):
        if len(v) > F.k:
            raise InputError(f"element {v!r} has more than {F.k} coefficients")
        return F([_int(c) for c in v])
    return F(_int(v))


def element_to_json(x: FieldElement):
    return x.to_json()


CURVE_KEYS = {"p", "k", "modulus", "curve", "a", "b"}


def curve_from_json(data: Mapping[str, Any]) -> Curve:
    reject_unknown(data, CURVE_KEYS, "curve")
    F = field_from_json(data)
    kind = data.get("curve", "elliptic")
    if kind == "p1":
        return ProjectiveLine(F)
    if kind != "elliptic":
        raise InputError(f"curve must be 'elliptic' or 'p1', got {kind!r}")
    try:
        return EllipticCurve(F, element_from_json(F, data["a"]), element_from_json(F, data["b"]))
    except ValueError as e:
        raise InputError(str(e)) from None


def curve_to_json(c: Curve) -> dict:
    out = dict(c.F.to_json())
    out["p"], out["k"] = str(out["p"]), str(out["k"])
    out["modulus"] = [str(m) for m in out["modulus"]]
    if isinstance(c, ProjectiveLine):
        out["curve"] = "p1"
    else:
        out.update(curve="elliptic", a=c.a.to_json(), b=c.b.to_json())
    return out


def point_from_json(c: Curve, data: Mapping[str, Any]) -> Point:
    reject_unknown(data, {"x", "y", "inf", "mult"}, "point")
    if data.get("inf"):
        return INF
    F = c.F
    if isinstance(c, ProjectiveLine):
        return element_from_json(F, data["x"])
    if "y" not in data:
        raise InputError("points on an elliptic curve need both x and y")
    P = (element_from_json(F, data["x"]), element_from_json(F, data["y"]))
    if not c.contains(P):
        raise InputError(f"point {P!r} is not on {c}")
    return P


def point_to_json(P: Point) -> dict:
    if P is INF:
        return {"inf": True}
    if isinstance(P, FieldElement):
        return {"x": P.to_json(), "inf": False}
    return {"x": P[0].to_json(), "y": P[1].to_json(), "inf": False}


def divisor_from_json(c: Curve, items) -> Divisor:
    return Divisor((point_from_json(c, it), _int(it.get("mult", 1))) for it in items)


def divisor_to_json(d: Divisor) -> list[dict]:
    return [dict(point_to_json(P), mult=str(n)) for P, n in d.items()]


def function_from_json(c: Curve, data: Mapping[str, Any]) -> FunctionProgram:
    """``{"const": c, "divisor": [...]}`` or ``{"const": c, "factors": [...]}``.

    Factor kinds: ``{"kind": "linear", "a": ..}`` (x - a, P^1 only),
    ``{"kind": "vertical", "P": pt}`` and ``{"kind": "line", "P": pt, "Q": pt}``
    (elliptic only), each with an optional integer ``"exp"``.
    """
    reject_unknown(data, {"const", "divisor", "factors"}, "function")
    const = element_from_json(c.F, data.get("const", 1))
    if not const:
        raise InputError("the constant of a function must be nonzero")
    if "divisor" in data:
        try:
            return function_with_divisor(c, divisor_from_json(c, data["divisor"])).scale(const)
        except ValueError as e:
            raise InputError(str(e)) from None
    factors = []
    for item in data.get("factors", []):
        reject_unknown(item, {"kind", "a", "P", "Q", "exp"}, "factor")
        kind, e = item.get("kind"), _int(item.get("exp", 1))
        if kind == "linear" and isinstance(c, ProjectiveLine):
            factors.append((Linear(element_from_json(c.F, item["a"])), e))
        elif kind == "vertical" and isinstance(c, EllipticCurve):
            factors.append((vertical_at(c, point_from_json(c, item["P"])), e))
        elif kind == "line" and isinstance(c, EllipticCurve):
            factors.append((line_through(c, point_from_json(c, item["P"]), point_from_json(c, item["Q"])), e))
        else:
            raise InputError(f"factor kind {kind!r} is not available on {c}")
    return FunctionProgram.make(c, const, factors)
