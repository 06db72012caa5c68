"""Quotient biextensions built from a bisubgroup and a bilinear trivialization.

Nothing here materializes a fiber as a set.  A point of the biextension is
a pair ``(n, (a, b))``: an element ``n`` of the coefficient group together
with a basepoint ``(a, b)`` in the bisubgroup ``T``.  Two points over the
same base are compared by transporting one onto the basepoint of the other
along steps ``(a, b) -> (a + a0, b)`` (cost ``psi(a0, b)``) and
``(a, b) -> (a, b + b0)`` (cost ``psi(a, b0)``) with ``(a0, b)`` or
``(a, b0)`` in ``S``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Sequence

from .abelian import FgAbGroup, Hom, image_contains, kernel


class BiextensionError(ValueError):
    """A precondition of a biextension operation failed."""


class AuditError(BiextensionError):
    def __init__(self, message: str, witness: tuple):
        super().__init__(f"{message}: {witness!r}")
        self.witness = witness


@dataclass(frozen=True)
class GroupOps:
    """An abelian group presented by callbacks, written additively."""
    zero: Any
    add: Callable[[Any, Any], Any]
    neg: Callable[[Any], Any]
    eq: Callable[[Any, Any], bool] = lambda x, y: x == y
    sample: Callable[[random.Random], Any] | None = None
    elements: Callable[[], Iterable] | None = None
    name: str = "G"

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, n: int, x):
        if n < 0:
            n, x = -n, self.neg(x)
        acc, base = self.zero, x
        while n:
            if n & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            n >>= 1
        return acc

    def is_zero(self, x) -> bool:
        return self.eq(x, self.zero)

    def total(self, xs: Iterable):
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    @classmethod
    def from_fg(cls, g: FgAbGroup, name: str | None = None) -> GroupOps:
        finite = g.rank == 0

        def sample(rng: random.Random):
            return g.reduce([rng.randrange(d) if d else rng.randint(-20, 20) for d in g.moduli])

        return cls(g.zero(), g.add, g.neg, lambda x, y: g.reduce(x) == g.reduce(y), sample,
                   g.elements if finite else None, name or str(g))

    @classmethod
    def multiplicative(cls, one, mul: Callable, inv: Callable, eq: Callable | None = None,
                       sample: Callable | None = None, name: str = "N*") -> GroupOps:
        """Adapter for a group written multiplicatively (k^*, C^*)."""
        return cls(one, mul, inv, eq or (lambda x, y: x == y), sample, None, name)


@dataclass(frozen=True)
class Bisubgroup:
    """T inside A x B with quotient maps phi_A, phi_B described by their kernels.

    ``phi_A``/``phi_B`` are optional class maps (used only for reporting and
    audits); the biextension itself needs only the kernel predicates.
    ``section(alpha, beta)`` lifts a pair of classes to a pair in T, and
    ``move_A(a, bs)`` returns an ``a'`` in the class of ``a`` with ``(a', b)``
    in T for every ``b`` in ``bs`` (and symmetrically ``move_B``).
    """
    A: GroupOps
    B: GroupOps
    contains: Callable[[Any, Any], bool]
    in_ker_A: Callable[[Any], bool]
    in_ker_B: Callable[[Any], bool]
    phi_A: Callable[[Any], Any] | None = None
    phi_B: Callable[[Any], Any] | None = None
    section: Callable[[Any, Any], tuple] | None = None
    move_A: Callable[[Any, Sequence], Any] | None = None
    move_B: Callable[[Any, Sequence], Any] | None = None
    sample_ker_A: Callable[[random.Random], Any] | None = None
    sample_ker_B: Callable[[random.Random], Any] | None = None

    def in_S(self, a, b) -> bool:
        return self.contains(a, b) and (self.in_ker_A(a) or self.in_ker_B(b))

    def restrict(self, smaller: Callable[[Any, Any], bool]) -> Bisubgroup:
        """The bisubgroup T2 = {t in T : smaller(t)}."""
        return replace(self, contains=lambda a, b: self.contains(a, b) and smaller(a, b))


@dataclass(frozen=True)
class Trivialization:
    """A bilinear map psi on S with values in N."""
    N: GroupOps
    psi: Callable[[Any, Any], Any]


@dataclass(frozen=True)
class FiberPoint:
    n: Any
    a: Any
    b: Any


@dataclass(frozen=True)
class Biextension:
    T: Bisubgroup
    triv: Trivialization
    label: str = field(default="P", compare=False)

    @property
    def N(self) -> GroupOps:
        return self.triv.N

    def psi(self, a, b):
        if not self.T.in_S(a, b):
            raise BiextensionError(f"({a!r}, {b!r}) is not in S")
        return self.triv.psi(a, b)

    def point(self, a, b, n=None) -> FiberPoint:
        if not self.T.contains(a, b):
            raise BiextensionError(f"basepoint ({a!r}, {b!r}) is not in T")
        return FiberPoint(self.N.zero if n is None else n, a, b)

    def base(self, x: FiberPoint) -> tuple:
        if self.T.phi_A is None or self.T.phi_B is None:
            raise BiextensionError("class maps were not supplied")
        return self.T.phi_A(x.a), self.T.phi_B(x.b)

    def same_fiber(self, x: FiberPoint, y: FiberPoint) -> bool:
        A, B = self.T.A, self.T.B
        return self.T.in_ker_A(A.sub(x.a, y.a)) and self.T.in_ker_B(B.sub(x.b, y.b))

    # -- transport -------------------------------------------------------

    def step_first(self, x: FiberPoint, a_new) -> FiberPoint:
        """Move the A-coordinate of the basepoint to a_new (same class)."""
        a0 = self.T.A.sub(a_new, x.a)
        if not self.T.contains(a_new, x.b):
            raise BiextensionError(f"({a_new!r}, {x.b!r}) is not in T")
        return FiberPoint(self.N.add(x.n, self.psi(a0, x.b)), a_new, x.b)

    def step_second(self, x: FiberPoint, b_new) -> FiberPoint:
        b0 = self.T.B.sub(b_new, x.b)
        if not self.T.contains(x.a, b_new):
            raise BiextensionError(f"({x.a!r}, {b_new!r}) is not in T")
        return FiberPoint(self.N.add(x.n, self.psi(x.a, b0)), x.a, b_new)

    def transport_along(self, x: FiberPoint, path: Sequence[tuple]) -> FiberPoint:
        """Follow basepoints in order; consecutive ones differ in one slot only."""
        for a, b in path:
            if self.T.A.eq(a, x.a):
                x = self.step_second(x, b)
            elif self.T.B.eq(b, x.b):
                x = self.step_first(x, a)
            else:
                raise BiextensionError("path steps must change one coordinate at a time")
        return x

    def transport(self, x: FiberPoint, a_new, b_new) -> FiberPoint:
        """The point equivalent to x with basepoint (a_new, b_new)."""
        A, B, T = self.T.A, self.T.B, self.T
        if not (T.in_ker_A(A.sub(a_new, x.a)) and T.in_ker_B(B.sub(b_new, x.b))):
            raise BiextensionError("target basepoint lies over a different fiber")
        if not T.contains(a_new, b_new):
            raise BiextensionError(f"target basepoint ({a_new!r}, {b_new!r}) is not in T")
        if A.eq(a_new, x.a) or B.eq(b_new, x.b) or T.contains(a_new, x.b):
            return self.transport_along(x, [(a_new, x.b), (a_new, b_new)])
        if T.contains(x.a, b_new):
            return self.transport_along(x, [(x.a, b_new), (a_new, b_new)])
        if T.move_A is None:
            raise BiextensionError("no two-step transport path and no move_A oracle")
        a_mid = T.move_A(x.a, [x.b, b_new])
        return self.transport_along(x, [(a_mid, x.b), (a_mid, b_new), (a_new, b_new)])

    def equal(self, x: FiberPoint, y: FiberPoint) -> bool:
        if not self.same_fiber(x, y):
            return False
        return self.N.eq(self.transport(y, x.a, x.b).n, x.n)

    def difference(self, x: FiberPoint, y: FiberPoint):
        """The unique n with x = y + n in their common fiber."""
        if not self.same_fiber(x, y):
            raise BiextensionError("points lie over different fibers")
        return self.N.sub(x.n, self.transport(y, x.a, x.b).n)

    def act(self, x: FiberPoint, n) -> FiberPoint:
        return FiberPoint(self.N.add(x.n, n), x.a, x.b)

    # -- partial group laws -------------------------------------------------

    def add_first(self, x: FiberPoint, y: FiberPoint) -> FiberPoint:
        """P_(alpha,gamma) x P_(beta,gamma) -> P_(alpha+beta,gamma)."""
        T = self.T
        if not T.in_ker_B(T.B.sub(x.b, y.b)):
            raise BiextensionError("partial addition in the first slot needs equal B-classes")
        if not T.B.eq(x.b, y.b):
            a_y = y.a
            if not T.contains(a_y, x.b):
                if T.move_A is None:
                    raise BiextensionError("cannot align basepoints without a move_A oracle")
                a_y = T.move_A(y.a, [x.b, y.b])
            y = self.transport(y, a_y, x.b)
        a = T.A.add(x.a, y.a)
        if not T.contains(a, x.b):
            raise BiextensionError(f"bisubgroup not closed at ({a!r}, {x.b!r})")
        return FiberPoint(self.N.add(x.n, y.n), a, x.b)

    def add_second(self, x: FiberPoint, y: FiberPoint) -> FiberPoint:
        """P_(alpha,gamma) x P_(alpha,delta) -> P_(alpha,gamma+delta)."""
        T = self.T
        if not T.in_ker_A(T.A.sub(x.a, y.a)):
            raise BiextensionError("partial addition in the second slot needs equal A-classes")
        if not T.A.eq(x.a, y.a):
            b_y = y.b
            if not T.contains(x.a, b_y):
                if T.move_B is None:
                    raise BiextensionError("cannot align basepoints without a move_B oracle")
                b_y = T.move_B(y.b, [x.a, y.a])
            y = self.transport(y, x.a, b_y)
        b = T.B.add(x.b, y.b)
        if not T.contains(x.a, b):
            raise BiextensionError(f"bisubgroup not closed at ({x.a!r}, {b!r})")
        return FiberPoint(self.N.add(x.n, y.n), x.a, b)

    def neg_first(self, x: FiberPoint) -> FiberPoint:
        return FiberPoint(self.N.neg(x.n), self.T.A.neg(x.a), x.b)

    def neg_second(self, x: FiberPoint) -> FiberPoint:
        return FiberPoint(self.N.neg(x.n), x.a, self.T.B.neg(x.b))

    # -- Weil pairing -----------------------------------------------------------

    def weil_pairing(self, a, b, l: int):
        """psi(l a, b) - psi(a, l b) for (a, b) in T with l a, l b in the kernels."""
        if l < 1:
            raise BiextensionError("l must be a positive integer")
        T = self.T
        if not T.contains(a, b):
            raise BiextensionError(f"({a!r}, {b!r}) is not in T")
        la, lb = T.A.scale(l, a), T.B.scale(l, b)
        if not T.in_ker_A(la):
            raise BiextensionError("l*a is not in the kernel of phi_A")
        if not T.in_ker_B(lb):
            raise BiextensionError("l*b is not in the kernel of phi_B")
        return self.N.sub(self.psi(la, b), self.psi(a, lb))

    def twist(self, phi: Callable[[Any, Any], Any]) -> Biextension:
        """The biextension for psi + phi|_S, phi bilinear on all of T."""
        N, psi = self.N, self.triv.psi
        return Biextension(self.T, Trivialization(N, lambda a, b: N.add(psi(a, b), phi(a, b))),
                           self.label + "'")

    def restrict(self, smaller: Callable[[Any, Any], bool]) -> Biextension:
        return Biextension(self.T.restrict(smaller), self.triv, self.label + "|")


def twist_map(phi: Callable[[Any, Any], Any], N: GroupOps) -> Callable[[FiberPoint], FiberPoint]:
    """Fiberwise multiplication by phi: P_psi -> P_(psi + phi|_S)."""
    return lambda x: FiberPoint(N.add(x.n, phi(x.a, x.b)), x.a, x.b)


# -- audits ------------------------------------------------------------------

def _pairs_for_audit(T: Bisubgroup, rng: random.Random, samples: int, exhaustive_limit: int):
    A, B = T.A, T.B
    if A.elements is not None and B.elements is not None:
        As, Bs = list(A.elements()), list(B.elements())
        if len(As) * len(Bs) <= exhaustive_limit:
            return As, Bs, True
    if A.sample is None or B.sample is None:
        raise BiextensionError("audit needs samplers or enumerable groups")
    return [A.sample(rng) for _ in range(samples)], [B.sample(rng) for _ in range(samples)], False


def audit(T: Bisubgroup, triv: Trivialization | None = None, *, samples: int = 500, seed: int = 0,
          exhaustive_limit: int = 10_000) -> dict:
    """Check bisubgroup closure and psi-bilinearity; raise AuditError on the first violation.

    Groups whose product has at most ``exhaustive_limit`` elements are
    checked on every triple; otherwise ``samples`` random triples are drawn
    per law.
    """
    rng = random.Random(seed)
    A, B = T.A, T.B
    As, Bs, exhaustive = _pairs_for_audit(T, rng, samples, exhaustive_limit)
    checked = 0

    if exhaustive:
        triples_a = ((a, a2, b) for a in As for a2 in As for b in Bs)
        triples_b = ((a, b, b2) for a in As for b in Bs for b2 in Bs)
    else:
        def _ta():
            for _ in range(samples):
                a, a2, b = rng.choice(As), rng.choice(As), rng.choice(Bs)
                if T.sample_ker_A is not None and rng.random() < 0.5:
                    a2 = T.sample_ker_A(rng)
                yield a, a2, b

        def _tb():
            for _ in range(samples):
                a, b, b2 = rng.choice(As), rng.choice(Bs), rng.choice(Bs)
                if T.sample_ker_B is not None and rng.random() < 0.5:
                    b2 = T.sample_ker_B(rng)
                yield a, b, b2
        triples_a, triples_b = _ta(), _tb()

    N = triv.N if triv else None
    for a, a2, b in triples_a:
        if T.contains(a, b) and T.contains(a2, b):
            s = A.add(a, a2)
            if not T.contains(s, b):
                raise AuditError("T not closed in the first slot", (a, a2, b))
            checked += 1
            if triv and T.in_S(a, b) and T.in_S(a2, b) and T.in_S(s, b):
                lhs = N.add(triv.psi(a, b), triv.psi(a2, b))
                if not N.eq(lhs, triv.psi(s, b)):
                    raise AuditError("psi not additive in the first slot", (a, a2, b))
    for a, b, b2 in triples_b:
        if T.contains(a, b) and T.contains(a, b2):
            s = B.add(b, b2)
            if not T.contains(a, s):
                raise AuditError("T not closed in the second slot", (a, b, b2))
            checked += 1
            if triv and T.in_S(a, b) and T.in_S(a, b2) and T.in_S(a, s):
                lhs = N.add(triv.psi(a, b), triv.psi(a, b2))
                if not N.eq(lhs, triv.psi(a, s)):
                    raise AuditError("psi not additive in the second slot", (a, b, b2))
    return {"exhaustive": exhaustive, "checked": checked}


def build_quotient_biextension(T: Bisubgroup, triv: Trivialization, *, samples: int = 500,
                               seed: int = 0, exhaustive_limit: int = 10_000,
                               label: str = "P") -> Biextension:
    """Audit T and psi, then return the quotient biextension P_psi."""
    audit(T, triv, samples=samples, seed=seed, exhaustive_limit=exhaustive_limit)
    return Biextension(T, triv, label)


def fg_bisubgroup(A: FgAbGroup, B: FgAbGroup, phi_A: Hom, phi_B: Hom,
                  contains: Callable[[Any, Any], bool] | None = None) -> Bisubgroup:
    """Bisubgroup of finite-type groups; T defaults to all of A x B."""
    def section(alpha, beta):
        a, b = image_contains(phi_A, alpha), image_contains(phi_B, beta)
        if a is None or b is None:
            raise BiextensionError("quotient maps are not surjective")
        return a, b

    def sampler_ker(phi: Hom):
        k, inc = kernel(phi)
        ops = GroupOps.from_fg(k)
        return lambda rng: inc(ops.sample(rng))

    return Bisubgroup(
        GroupOps.from_fg(A, "A"), GroupOps.from_fg(B, "B"),
        contains or (lambda a, b: True),
        lambda a: phi_A.dst.is_zero(phi_A(a)),
        lambda b: phi_B.dst.is_zero(phi_B(b)),
        phi_A, phi_B, section,
        sample_ker_A=sampler_ker(phi_A), sample_ker_B=sampler_ker(phi_B))
