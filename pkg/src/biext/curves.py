"""The projective line and short Weierstrass elliptic curves over a finite field, and divisors on them."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Union

from .fields import FieldElement, FiniteField


class _Infinity:
    """The point at infinity (the origin O on an elliptic curve)."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "O"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Point = Union[_Infinity, FieldElement, tuple]


@lru_cache(maxsize=65536)
def point_key(P: Point) -> tuple:
    if P is INF:
        return (0,)
    if isinstance(P, FieldElement):
        return (1, P.sort_key())
    return (1, P[0].sort_key(), P[1].sort_key())


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class ProjectiveLine:
    F: FiniteField

    kind = "p1"

    def contains(self, P: Point) -> bool:
        return P is INF or (isinstance(P, FieldElement) and P.F == self.F)

    def points(self) -> Iterator[Point]:
        yield INF
        yield from self.F.elements()

    def random_point(self, rng: random.Random) -> Point:
        i = rng.randrange(self.F.q + 1)
        return INF if i == self.F.q else self.F.from_index(i)

    def point(self, x) -> Point:
        return INF if x is None or x is INF else self.F(x)

    def __str__(self) -> str:
        return f"P^1 over {self.F}"


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 = x^3 + a x + b."""
    F: FiniteField
    a: FieldElement
    b: FieldElement

    kind = "elliptic"

    def __post_init__(self):
        if self.F.p in (2, 3):
            raise CurveError("short Weierstrass models need characteristic >= 5")
        object.__setattr__(self, "a", self.F(self.a))
        object.__setattr__(self, "b", self.F(self.b))
        if not (4 * self.a ** 3 + 27 * self.b ** 2):
            raise CurveError("singular curve: 4a^3 + 27b^2 = 0")

    def rhs(self, x: FieldElement) -> FieldElement:
        return x * x * x + self.a * x + self.b

    def contains(self, P: Point) -> bool:
        if P is INF:
            return True
        return isinstance(P, tuple) and len(P) == 2 and P[1] * P[1] == self.rhs(P[0])

    def point(self, x, y=None) -> Point:
        if x is None or x is INF:
            return INF
        P = (self.F(x), self.F(y))
        if not self.contains(P):
            raise CurveError(f"{P} is not on the curve")
        return P

    def neg(self, P: Point) -> Point:
        return INF if P is INF else (P[0], -P[1])

    def add(self, P: Point, Q: Point) -> Point:
        if P is INF:
            return Q
        if Q is INF:
            return P
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2:
            if y1 + y2 == 0:
                return INF
            lam = (3 * x1 * x1 + self.a) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - x1 - x2
        return (x3, lam * (x1 - x3) - y1)

    def sub(self, P: Point, Q: Point) -> Point:
        return self.add(P, self.neg(Q))

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            n, P = -n, self.neg(P)
        acc = INF
        while n:
            if n & 1:
                acc = self.add(acc, P)
            P = self.add(P, P)
            n >>= 1
        return acc

    @cached_property
    def _points(self) -> tuple:
        pts = [INF]
        for x in self.F.elements():
            y = self.F.sqrt(self.rhs(x))
            if y is None:
                continue
            pts.append((x, y))
            if y:
                pts.append((x, -y))
        return tuple(pts)

    def points(self) -> Iterator[Point]:
        return iter(self._points)

    @property
    def order(self) -> int:
        return len(self._points)

    def random_point(self, rng: random.Random) -> Point:
        return self._points[rng.randrange(len(self._points))]

    def torsion(self, l: int) -> list[Point]:
        """All rational points killed by l."""
        return [P for P in self._points if self.mul(l, P) is INF]

    def has_full_torsion(self, l: int) -> bool:
        return len(self.torsion(l)) == l * l

    def __str__(self) -> str:
        return f"y^2 = x^3 + {self.a}x + {self.b} over {self.F}"


Curve = Union[ProjectiveLine, EllipticCurve]


class Divisor:
    """A finite formal sum of points with nonzero integer multiplicities."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Point, int] | Iterable[tuple[Point, int]] = ()):
        acc: dict = defaultdict(int)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for P, n in items:
            acc[P] += int(n)
        self._terms = tuple(sorted(((P, n) for P, n in acc.items() if n), key=lambda t: point_key(t[0])))
        self._hash = None

    @classmethod
    def point(cls, P: Point, n: int = 1) -> Divisor:
        return cls({P: n})

    def items(self) -> tuple:
        return self._terms

    def support(self) -> frozenset:
        return frozenset(P for P, _ in self._terms)

    def mult(self, P: Point) -> int:
        for Q, n in self._terms:
            if Q == P:
                return n
        return 0

    @property
    def degree(self) -> int:
        return sum(n for _, n in self._terms)

    def __add__(self, other: Divisor) -> Divisor:
        return Divisor(self._terms + other._terms)

    def __neg__(self) -> Divisor:
        return Divisor((P, -n) for P, n in self._terms)

    def __sub__(self, other: Divisor) -> Divisor:
        return self + (-other)

    def __rmul__(self, k: int) -> Divisor:
        return Divisor((P, k * n) for P, n in self._terms)

    __mul__ = __rmul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def disjoint(self, other: Divisor) -> bool:
        return not (self.support() & other.support())

    def map_points(self, f) -> Divisor:
        return Divisor((f(P), n) for P, n in self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{n}({P})" if n != 1 else f"({P})" for P, n in self._terms)


@lru_cache(maxsize=65536)
def divisor_sum(curve: Curve, d: Divisor) -> Point:
    """Group-law sum of the points of d (elliptic curves only)."""
    acc = INF
    for P, n in d.items():
        acc = curve.add(acc, curve.mul(n, P))
    return acc


def is_principal(curve: Curve, d: Divisor) -> bool:
    if d.degree != 0:
        return False
    if isinstance(curve, ProjectiveLine):
        return True
    return divisor_sum(curve, d) is INF


def is_in_zprime(curve: Curve, d: Divisor) -> bool:
    """Degree-zero test: on a curve the only K_1-chains supported on |d| with trivial divisor are constants."""
    return d.degree == 0


def translate(curve: Curve, d: Divisor, R: Point) -> Divisor:
    """Push d forward along P -> P + R (elliptic) or x -> x + R (affine part of P^1)."""
    if isinstance(curve, EllipticCurve):
        return d.map_points(lambda P: curve.add(P, R))
    return d.map_points(lambda P: P if P is INF else P + R)


def mobius(curve: ProjectiveLine, d: Divisor, r: FieldElement, s: FieldElement) -> Divisor:
    """Push d forward along x -> 1/(x - r) + s, which moves infinity to s."""
    def f(P):
        if P is INF:
            return s
        if P == r:
            return INF
        return (P - r).inverse() + s
    return d.map_points(f)
