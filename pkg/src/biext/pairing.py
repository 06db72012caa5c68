"""The divisor-evaluation biextension on a curve and the Weil pairing it induces."""

from __future__ import annotations

import random
from typing import Sequence

from .biextension import (Biextension, BiextensionError, Bisubgroup, GroupOps,
                          Trivialization, build_quotient_biextension)
from .curves import (INF, Curve, Divisor, EllipticCurve, Point,
                     ProjectiveLine, divisor_sum, is_in_zprime, is_principal, mobius,
                     translate)
from .fields import FieldElement
from .functions import evaluate_at_divisor, function_with_divisor, stable_rng

MAX_REPAIRS = 64


class RepairError(BiextensionError):
    pass


def _disjoint_from_all(d: Divisor, others: Sequence[Divisor]) -> bool:
    return all(d.disjoint(o) for o in others)


def move_divisor(curve: Curve, d: Divisor, avoid: Sequence[Divisor], seed: int = 0) -> Divisor:
    """A divisor linearly equivalent to d (degree zero) with support off every divisor in avoid.

    Elliptic curves: translation by a random point, which keeps the class of
    a degree-zero divisor.  P^1: a random affine shift, falling back to a
    random Mobius map when infinity must move.
    """
    if d.degree != 0:
        raise RepairError("only degree-zero divisors can be moved within their class")
    rng = stable_rng(seed, "move", d, tuple(avoid))
    F = curve.F
    for attempt in range(MAX_REPAIRS):
        if isinstance(curve, EllipticCurve):
            cand = translate(curve, d, curve.random_point(rng))
        elif attempt % 2 == 0:
            cand = translate(curve, d, F.random(rng))
        else:
            cand = mobius(curve, d, F.random(rng), F.random(rng))
        if _disjoint_from_all(cand, avoid):
            return cand
    raise RepairError(f"disjointness repair failed after {MAX_REPAIRS} attempts")


def class_of(curve: Curve, d: Divisor):
    """Image in Pic^0: the group-law sum on an elliptic curve, trivial on P^1."""
    if d.degree != 0:
        raise BiextensionError("divisor is not of degree zero")
    if isinstance(curve, ProjectiveLine):
        return 0
    return divisor_sum(curve, d)


def section(curve: Curve, alpha, beta, seed: int = 0) -> tuple[Divisor, Divisor]:
    """Disjoint degree-zero divisors in the classes alpha and beta."""
    if isinstance(curve, ProjectiveLine):
        return Divisor(), Divisor()
    rng = stable_rng(seed, "section", alpha, beta)
    for _ in range(MAX_REPAIRS):
        R1, R2 = curve.random_point(rng), curve.random_point(rng)
        Z = Divisor([(curve.add(alpha, R1), 1), (R1, -1)])
        W = Divisor([(curve.add(beta, R2), 1), (R2, -1)])
        if Z.disjoint(W):
            return Z, W
    raise RepairError(f"could not separate the supports after {MAX_REPAIRS} attempts")


def field_units(F) -> GroupOps:
    def sample(rng):
        while True:
            x = F.random(rng)
            if x:
                return x
    return GroupOps.multiplicative(F.one, lambda x, y: x * y, lambda x: x.inverse(),
                                   sample=sample, name=f"{F}*")


def divisor_group(curve: Curve, principal_only: bool = False) -> GroupOps:
    def sample(rng: random.Random) -> Divisor:
        pts = [curve.random_point(rng) for _ in range(2)]
        d = Divisor([(pts[0], 1), (pts[1], -1)])
        if principal_only and isinstance(curve, EllipticCurve):
            # D - (D translated by R) sums to zero for degree-zero D
            d = d - translate(curve, d, curve.random_point(rng))
        return d
    return GroupOps(Divisor(), lambda x, y: x + y, lambda x: -x, lambda x, y: x == y, sample,
                    None, "Z^1(C)'")


def pe_psi(curve: Curve):
    """psi(div f, W) = f(W); psi(Z, div g) = g(Z)."""
    def psi(Z: Divisor, W: Divisor) -> FieldElement:
        if is_principal(curve, Z):
            return evaluate_at_divisor(function_with_divisor(curve, Z), W)
        if is_principal(curve, W):
            return evaluate_at_divisor(function_with_divisor(curve, W), Z)
        raise BiextensionError(f"neither {Z} nor {W} is principal")
    return psi


def pe_biextension(curve: Curve, *, seed: int = 0, audit_samples: int = 0) -> Biextension:
    """P_E over (Pic^0, Pic^0) by k^*: T = pairs of degree-zero divisors with disjoint supports."""
    principal = divisor_group(curve, principal_only=True)
    T = Bisubgroup(
        divisor_group(curve), divisor_group(curve),
        lambda Z, W: is_in_zprime(curve, Z) and is_in_zprime(curve, W) and Z.disjoint(W),
        lambda Z: is_principal(curve, Z), lambda W: is_principal(curve, W),
        lambda Z: class_of(curve, Z), lambda W: class_of(curve, W),
        lambda alpha, beta: section(curve, alpha, beta, seed),
        lambda Z, bs: move_divisor(curve, Z, bs, seed),
        lambda W, zs: move_divisor(curve, W, zs, seed),
        principal.sample, principal.sample)
    triv = Trivialization(field_units(curve.F), pe_psi(curve))
    return build_quotient_biextension(T, triv, samples=audit_samples, seed=seed, label="P_E")


# -- Weil pairing on E[l] ----------------------------------------------------------

def check_torsion(curve: EllipticCurve, P: Point, Q: Point, l: int) -> None:
    if l < 1:
        raise BiextensionError("l must be positive")
    for name, X in (("P", P), ("Q", Q)):
        if not curve.contains(X):
            raise BiextensionError(f"{name} = {X!r} is not on the curve")
        if curve.mul(l, X) is not INF:
            raise BiextensionError(f"{name} = {X!r} is not killed by {l}")
    if not curve.has_full_torsion(l):
        raise BiextensionError(f"E[{l}] is not rational over {curve.F}; extend the field")


def weil_pairing_points(curve: EllipticCurve, P: Point, Q: Point, l: int, *, seed: int = 0,
                        biext: Biextension | None = None) -> FieldElement:
    """phi_l(P, Q) = f(W) / g(Z), computed in P_E with Z ~ (P)-(O), W ~ (Q)-(O)."""
    check_torsion(curve, P, Q, l)
    biext = biext or pe_biextension(curve, seed=seed)
    Z, W = biext.T.section(P, Q)
    return biext.weil_pairing(Z, W, l)


class _Retry(Exception):
    pass


def _line_value(curve: EllipticCurve, S: Point, T: Point, X: Point) -> FieldElement:
    """Value at X of the line through S and T over the vertical through S + T."""
    F = curve.F
    x, y = X
    if S is INF or T is INF:
        R = T if S is INF else S
        num = F.one if R is INF else x - R[0]
        den = F.one if R is INF else x - R[0]
    else:
        (x1, y1), (x2, y2) = S, T
        if x1 == x2 and y1 + y2 == 0:
            num, den = x - x1, F.one
        else:
            lam = (3 * x1 * x1 + curve.a) / (2 * y1) if x1 == x2 else (y2 - y1) / (x2 - x1)
            num = y - y1 - lam * (x - x1)
            R = curve.add(S, T)
            den = x - R[0]
    if not num or not den:
        raise _Retry
    return num / den


def miller(curve: EllipticCurve, P: Point, n: int, X: Point) -> FieldElement:
    """f_(n,P)(X) with div f_(n,P) = n(P) - ([n]P) - (n-1)(O), by double-and-add."""
    if X is INF:
        raise _Retry
    f, R = curve.F.one, P
    for bit in bin(n)[3:]:
        f = f * f * _line_value(curve, R, R, X)
        R = curve.add(R, R)
        if bit == "1":
            f = f * _line_value(curve, R, P, X)
            R = curve.add(R, P)
    return f


def weil_pairing_oracle(curve: EllipticCurve, P: Point, Q: Point, l: int, *, seed: int = 0) -> FieldElement:
    """Weil pairing straight from Miller functions, without any divisor bookkeeping.

    e(P, Q) = [f_P(Q + S) / f_P(S)] / [f_Q(P - S) / f_Q(-S)] for a random
    auxiliary point S.
    """
    if curve.mul(l, P) is not INF or curve.mul(l, Q) is not INF:
        raise BiextensionError("points are not l-torsion")
    if P is INF or Q is INF or l == 1:
        return curve.F.one
    rng = stable_rng(seed, "oracle", P, Q, l)
    for _ in range(MAX_REPAIRS):
        S = curve.random_point(rng)
        try:
            num = miller(curve, P, l, curve.add(Q, S)) / miller(curve, P, l, S)
            den = miller(curve, Q, l, curve.sub(P, S)) / miller(curve, Q, l, curve.neg(S))
        except (_Retry, ZeroDivisionError):
            continue
        return num / den
    raise RepairError("no admissible auxiliary point for the Miller oracle")
