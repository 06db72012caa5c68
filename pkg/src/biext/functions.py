"""Rational functions on curves as products of line factors.

A :class:`FunctionProgram` is a constant times a product of factors raised
to integer powers.  Every factor knows its own divisor, so the divisor of a
program is computed symbolically, and every factor knows its order and
leading coefficient at any point with respect to a fixed uniformizer there:

* on P^1: ``x - a`` at an affine point ``a`` and ``1/x`` at infinity;
* on y^2 = x^3 + a x + b: ``x - x0`` at a point with ``y0 != 0``, ``y`` at a
  point with ``y0 = 0`` and ``x/y`` at O.

Evaluation and tame symbols use only these local data, so a point where two
factors cancel (a common zero of a line and a vertical) is handled exactly.
"""

from __future__ import annotations

import hashlib
import random
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .curves import (INF, Curve, CurveError, Divisor, EllipticCurve, Point,
                     ProjectiveLine, divisor_sum, point_key)
from .fields import FieldElement


class SupportError(ValueError):
    """A divisor meets the zeros or poles of the function evaluated on it."""

    def __init__(self, point: Point, message: str = "support collision"):
        super().__init__(f"{message} at {point!r}")
        self.point = point


class NotPrincipalError(ValueError):
    def __init__(self, obstruction: Point | int):
        super().__init__(f"divisor is not principal; obstruction {obstruction!r}")
        self.obstruction = obstruction


class IndeterminateError(ValueError):
    pass


# -- factors -----------------------------------------------------------------

@dataclass(frozen=True)
class Linear:
    """x - a on P^1."""
    a: FieldElement

    def divisor(self, curve) -> Divisor:
        return Divisor({self.a: 1, INF: -1})

    def local(self, curve, P: Point) -> tuple[int, FieldElement]:
        if P is INF:
            return -1, curve.F.one
        if P == self.a:
            return 1, curve.F.one
        return 0, P - self.a


@dataclass(frozen=True)
class Vertical:
    """x - c on an elliptic curve, through the points P and -P."""
    c: FieldElement
    P: tuple

    def divisor(self, curve: EllipticCurve) -> Divisor:
        return Divisor([(self.P, 1), (curve.neg(self.P), 1), (INF, -2)])

    def local(self, curve: EllipticCurve, Q: Point) -> tuple[int, FieldElement]:
        if Q is INF:
            return -2, curve.F.one
        x0, y0 = Q
        if x0 != self.c:
            return 0, x0 - self.c
        if y0:
            return 1, curve.F.one
        # x - x0 = y^2 / h(x) with h(x0) = 3 x0^2 + a
        return 2, (3 * x0 * x0 + curve.a).inverse()


@dataclass(frozen=True)
class Line:
    """y - lam x - mu on an elliptic curve, meeting it in P, Q and -(P + Q)."""
    lam: FieldElement
    mu: FieldElement
    P: tuple
    Q: tuple

    def divisor(self, curve: EllipticCurve) -> Divisor:
        R = curve.neg(curve.add(self.P, self.Q))
        return Divisor([(self.P, 1), (self.Q, 1), (R, 1), (INF, -3)])

    def local(self, curve: EllipticCurve, X: Point) -> tuple[int, FieldElement]:
        F = curve.F
        if X is INF:
            return -3, F.one
        x0, y0 = X
        c0 = y0 - self.lam * x0 - self.mu
        if c0:
            return 0, c0
        if not y0:
            # t = y, x = x0 + O(t^2): the line is t + O(t^2)
            return 1, F.one
        # t = x - x0; y = y0 + c1 t + c2 t^2 + c3 t^3 + ...
        two_y0_inv = (2 * y0).inverse()
        c1 = (3 * x0 * x0 + curve.a) * two_y0_inv
        c2 = (3 * x0 - c1 * c1) * two_y0_inv
        c3 = (F.one - 2 * c1 * c2) * two_y0_inv
        for order, coeff in ((1, c1 - self.lam), (2, c2), (3, c3)):
            if coeff:
                return order, coeff
        raise IndeterminateError(f"line meets the curve to order > 3 at {X!r}")


def line_through(curve: EllipticCurve, P: Point, Q: Point):
    """The factor with divisor (P) + (Q) + (-(P+Q)) - 3(O), or None if it is constant."""
    if P is INF and Q is INF:
        return None
    if P is INF or Q is INF:
        R = Q if P is INF else P
        return Vertical(R[0], R)
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and y1 + y2 == 0:
        return Vertical(x1, P)
    if x1 == x2:
        lam = (3 * x1 * x1 + curve.a) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    return Line(lam, y1 - lam * x1, P, Q)


def vertical_at(curve: EllipticCurve, P: Point):
    if P is INF:
        return None
    return Vertical(P[0], P)


# -- programs ------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionProgram:
    curve: Curve
    const: FieldElement
    factors: tuple  # ((factor, exponent), ...)

    @classmethod
    def make(cls, curve: Curve, const=1, factors: Mapping | Iterable = ()) -> FunctionProgram:
        acc: dict = defaultdict(int)
        items = factors.items() if isinstance(factors, Mapping) else factors
        for f, e in items:
            if f is not None and e:
                acc[f] += e
        ordered = tuple(sorted(((f, e) for f, e in acc.items() if e), key=lambda t: repr(t[0])))
        return cls(curve, curve.F(const), ordered)

    @classmethod
    def constant(cls, curve: Curve, c=1) -> FunctionProgram:
        return cls.make(curve, c)

    @classmethod
    def linear(cls, curve: ProjectiveLine, a, exponent: int = 1) -> FunctionProgram:
        return cls.make(curve, 1, [(Linear(curve.F(a)), exponent)])

    def __mul__(self, other: FunctionProgram) -> FunctionProgram:
        return FunctionProgram.make(self.curve, self.const * other.const, self.factors + other.factors)

    def inverse(self) -> FunctionProgram:
        return FunctionProgram.make(self.curve, self.const.inverse(), [(f, -e) for f, e in self.factors])

    def __truediv__(self, other: FunctionProgram) -> FunctionProgram:
        return self * other.inverse()

    def __pow__(self, n: int) -> FunctionProgram:
        return FunctionProgram.make(self.curve, self.const ** n, [(f, e * n) for f, e in self.factors])

    def scale(self, c) -> FunctionProgram:
        return FunctionProgram(self.curve, self.const * c, self.factors)

    def divisor(self) -> Divisor:
        return _program_divisor(self)

    def local(self, P: Point) -> tuple[int, FieldElement]:
        """(order, leading coefficient) at P with respect to the fixed uniformizer."""
        v, lc = 0, self.const
        for f, e in self.factors:
            fv, flc = f.local(self.curve, P)
            v += e * fv
            lc = lc * flc ** e
        return v, lc

    def __call__(self, P: Point) -> FieldElement:
        v, lc = self.local(P)
        if v > 0:
            raise SupportError(P, "function vanishes")
        if v < 0:
            raise SupportError(P, "function has a pole")
        return lc

    def __repr__(self) -> str:
        parts = [repr(self.const)] + [f"{f!r}^{e}" for f, e in self.factors]
        return " * ".join(parts)


@lru_cache(maxsize=16384)
def _program_divisor(f: FunctionProgram) -> Divisor:
    acc = Divisor()
    for g, e in f.factors:
        acc = acc + e * g.divisor(f.curve)
    return acc


def _add_multiple(curve: EllipticCurve, P: Point, n: int):
    """(nP, h) with n((P) - (O)) = (nP) - (O) + div(h), by double-and-add."""
    one = FunctionProgram.constant(curve)
    if n == 0 or P is INF:
        return INF, one
    if n < 0:
        Q, h = _add_multiple(curve, P, -n)
        # -(Q) + (O) = (-Q) - (O) - div(x - x_Q)
        V = vertical_at(curve, Q)
        return curve.neg(Q), (h * FunctionProgram.make(curve, 1, [(V, 1)])).inverse()
    R, f = P, one
    for bit in bin(n)[3:]:
        f = _combine(curve, R, R, f, f)
        R = curve.add(R, R)
        if bit == "1":
            f = _combine(curve, R, P, f, one)
            R = curve.add(R, P)
    return R, f


def _combine(curve: EllipticCurve, S: Point, T: Point, f: FunctionProgram, g: FunctionProgram):
    """Function for (S)+(T)-2(O) = (S+T)-(O)+div(L/V), times f*g."""
    L = line_through(curve, S, T)
    V = vertical_at(curve, curve.add(S, T))
    return FunctionProgram.make(curve, f.const * g.const,
                                list(f.factors) + list(g.factors) + [(L, 1), (V, -1)])


@lru_cache(maxsize=4096)
def function_with_divisor(curve: Curve, d: Divisor) -> FunctionProgram:
    """A program whose principal divisor is exactly d."""
    if d.degree != 0:
        raise NotPrincipalError(d.degree)
    if isinstance(curve, ProjectiveLine):
        return FunctionProgram.make(curve, 1, [(Linear(P), n) for P, n in d.items() if P is not INF])
    S, f = INF, FunctionProgram.constant(curve)
    for P, n in d.items():
        if P is INF:
            continue
        Q, h = _add_multiple(curve, P, n)
        f = _combine(curve, S, Q, f, h)
        S = curve.add(S, Q)
    if S is not INF:
        raise NotPrincipalError(S)
    return f


def evaluate_at_divisor(f: FunctionProgram, d: Divisor) -> FieldElement:
    """prod f(P)^n_P over the points of d (all rational, so the norms are trivial)."""
    bad = d.support() & f.divisor().support()
    if bad:
        raise SupportError(min(bad, key=point_key))
    acc = f.curve.F.one
    for P, n in d.items():
        acc = acc * f(P) ** n
    return acc


def weil_reciprocity_check(f: FunctionProgram, g: FunctionProgram):
    """(f(div g), g(div f), equal?)."""
    df, dg = f.divisor(), g.divisor()
    bad = df.support() & dg.support()
    if bad:
        raise SupportError(min(bad, key=point_key), "divisors of f and g overlap")
    lhs = evaluate_at_divisor(f, dg)
    rhs = evaluate_at_divisor(g, df)
    return lhs, rhs, lhs == rhs


def tame_symbol(f: FunctionProgram, g: FunctionProgram, P: Point) -> FieldElement:
    """(-1)^(v(f) v(g)) (f^v(g) / g^v(f))(P)."""
    vf, lf = f.local(P)
    vg, lg = g.local(P)
    sign = -1 if (vf * vg) % 2 else 1
    return sign * lf ** vg / lg ** vf


def tame_reciprocity(f: FunctionProgram, g: FunctionProgram) -> tuple[FieldElement, dict]:
    """Product of tame symbols over the union of the supports of div f and div g."""
    places = sorted(f.divisor().support() | g.divisor().support(), key=point_key)
    symbols = {P: tame_symbol(f, g, P) for P in places}
    acc = f.curve.F.one
    for v in symbols.values():
        acc = acc * v
    return acc, symbols


# -- random data and disjointness repair -----------------------------------------

def stable_rng(seed: int, *parts) -> random.Random:
    """A generator seeded from the seed and a stable digest of the parts."""
    h = hashlib.sha256(repr((seed,) + parts).encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def random_principal_divisor(curve: Curve, rng: random.Random, npoints: int = 3,
                             max_mult: int = 2, avoid: frozenset = frozenset()) -> Divisor:
    """Random points with random multiplicities, balanced by random correction points.

    The degree is fixed by a multiple of a random point R and, on an
    elliptic curve, the sum s by (T) - (T + s), so neither correction
    forces the origin or infinity into the support.  Points in ``avoid``
    are never drawn, though the last correction point may land there.
    """
    def draw():
        for _ in range(1000):
            P = curve.random_point(rng)
            if P not in avoid:
                return P
        raise CurveError("every rational point is excluded")

    pts = [draw() for _ in range(npoints)]
    mults = [rng.choice([m for m in range(-max_mult, max_mult + 1) if m]) for _ in pts]
    d = Divisor(zip(pts, mults))
    d = d - Divisor.point(draw(), d.degree)
    if isinstance(curve, EllipticCurve):
        s, T = divisor_sum(curve, d), draw()
        d = d + Divisor([(T, 1), (curve.add(T, s), -1)])
    return d


def random_function(curve: Curve, rng: random.Random, npoints: int = 3, max_mult: int = 2,
                    avoid: Divisor | None = None, tries: int = 64) -> FunctionProgram:
    """A random nonconstant function whose divisor misses the support of avoid."""
    banned = avoid.support() if avoid is not None else frozenset()
    for _ in range(tries):
        d = random_principal_divisor(curve, rng, npoints, max_mult, banned)
        if not d or not banned.isdisjoint(d.support()):
            continue
        c = curve.F.random(rng)
        if not c:
            continue
        return function_with_divisor(curve, d).scale(c)
    raise CurveError("could not find a function with the requested support")


def closed_point_orbit(P: Point) -> list[Point]:
    """The Frobenius orbit of P over the prime field."""
    def frob(Q):
        if Q is INF:
            return INF
        if isinstance(Q, FieldElement):
            return Q.frobenius()
        return (Q[0].frobenius(), Q[1].frobenius())
    orbit, Q = [P], frob(P)
    while Q != P:
        orbit.append(Q)
        Q = frob(Q)
    return orbit


def norm_value(f: FunctionProgram, P: Point) -> FieldElement:
    """Nm(f(x)) at the closed point through P: the product of f over the orbit of P."""
    acc = f.curve.F.one
    for Q in closed_point_orbit(P):
        acc = acc * f(Q)
    return acc
