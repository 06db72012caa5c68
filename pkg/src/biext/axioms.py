"""Property checks for the biextension laws on concrete instances.

An instance bundles a biextension with samplers that produce basepoints in
T, other representatives of the same classes, and fiber coordinates.  Every
check compares two ways of computing the same fiber point with
``Biextension.equal`` so the comparison goes through transport, never
through raw coordinates.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

from .biextension import AuditError, Biextension, twist_map

MAX_RESAMPLE = 200


@dataclass
class Restriction:
    """A smaller bisubgroup T2 of T, with optional samplers that stay inside it."""
    contains: Callable[[Any, Any], bool]
    sample: Callable[[random.Random], tuple] | None = None
    perturb_a: Callable[[Any, Any, random.Random], Any] | None = None


@dataclass
class AxiomInstance:
    """What the checker needs to know about one biextension.

    ``restriction`` is a predicate cutting out a smaller bisubgroup that
    still surjects onto both quotients; ``twist`` is a bilinear map on all
    of T with values in N.
    """
    name: str
    biext: Biextension
    sample_n: Callable[[random.Random], Any]
    restriction: Restriction | None = None
    twist: Callable[[Any, Any], Any] | None = None
    kernel_A: Sequence | None = None
    kernel_B: Sequence | None = None

    @property
    def T(self):
        return self.biext.T

    def exhaustive(self, limit: int) -> bool:
        A, B = self.T.A, self.T.B
        if A.elements is None or B.elements is None or self.kernel_A is None or self.kernel_B is None:
            return False
        return len(list(A.elements())) * len(list(B.elements())) <= limit

    def sample_a(self, rng: random.Random, avoid: Sequence = ()):
        return self._sample(self.T.A.sample, rng, lambda a: all(self.T.contains(a, b) for b in avoid))

    def sample_b(self, rng: random.Random, avoid: Sequence = ()):
        return self._sample(self.T.B.sample, rng, lambda b: all(self.T.contains(a, b) for a in avoid))

    def perturb_a(self, a, rng: random.Random, avoid: Sequence = ()):
        """Another representative of the class of a, compatible with avoid."""
        T = self.T
        draw = (lambda r: r.choice(self.kernel_A)) if self.kernel_A is not None else T.sample_ker_A
        return self._sample(lambda r: T.A.add(a, draw(r)), rng,
                            lambda x: all(T.contains(x, b) for b in avoid))

    def perturb_b(self, b, rng: random.Random, avoid: Sequence = ()):
        T = self.T
        draw = (lambda r: r.choice(self.kernel_B)) if self.kernel_B is not None else T.sample_ker_B
        return self._sample(lambda r: T.B.add(b, draw(r)), rng,
                            lambda y: all(T.contains(a, y) for a in avoid))

    @staticmethod
    def _sample(draw, rng, ok):
        for _ in range(MAX_RESAMPLE):
            x = draw(rng)
            if ok(x):
                return x
        raise AuditError("could not sample an admissible element", ())


@dataclass
class AxiomReport:
    name: str
    exhaustive: bool
    counts: dict = field(default_factory=dict)

    def bump(self, law: str) -> None:
        self.counts[law] = self.counts.get(law, 0) + 1

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _fail(law: str, *witness):
    raise AuditError(f"{law} fails", witness)


def _quadruples(inst: AxiomInstance, rng: random.Random, samples: int, exhaustive: bool) -> Iterator[tuple]:
    if exhaustive:
        As, Bs = list(inst.T.A.elements()), list(inst.T.B.elements())
        for a1, a2, b1, b2 in itertools.product(As, As, Bs, Bs):
            if all(inst.T.contains(a, b) for a in (a1, a2) for b in (b1, b2)):
                yield a1, a2, b1, b2
        return
    for _ in range(samples):
        a1 = inst.sample_a(rng)
        b1 = inst.sample_b(rng, [a1])
        a2 = inst.sample_a(rng, [b1])
        b2 = inst.sample_b(rng, [a1, a2])
        yield a1, a2, b1, b2


def check_interchange(inst: AxiomInstance, rng: random.Random, report: AxiomReport, samples: int,
                      exhaustive: bool) -> None:
    """(x11 +1 x21) +2 (x12 +1 x22) = (x11 +2 x12) +1 (x21 +2 x22), with scattered representatives."""
    P = inst.biext
    for a1, a2, b1, b2 in _quadruples(inst, rng, samples, exhaustive):
        # second representatives of each class for the off-diagonal points
        a1p = inst.perturb_a(a1, rng, [b2])
        a2p = inst.perturb_a(a2, rng, [b1, b2])
        b1p = inst.perturb_b(b1, rng, [a2])
        b2p = inst.perturb_b(b2, rng, [a2p])
        x11 = P.point(a1, b1, inst.sample_n(rng))
        x12 = P.point(a1p, b2, inst.sample_n(rng))
        x21 = P.point(a2, b1p, inst.sample_n(rng))
        x22 = P.point(a2p, b2p, inst.sample_n(rng))
        lhs = P.add_second(P.add_first(x11, x21), P.add_first(x12, x22))
        rhs = P.add_first(P.add_second(x11, x12), P.add_second(x21, x22))
        if not P.equal(lhs, rhs):
            _fail("interchange law", a1, a2, b1, b2)
        report.bump("interchange")


def _pairs(inst: AxiomInstance, rng: random.Random, samples: int, exhaustive: bool) -> Iterator[tuple]:
    if exhaustive:
        for a in inst.T.A.elements():
            for b in inst.T.B.elements():
                if inst.T.contains(a, b):
                    yield a, b
        return
    for _ in range(samples):
        a = inst.sample_a(rng)
        yield a, inst.sample_b(rng, [a])


def check_unit_and_groups(inst: AxiomInstance, rng: random.Random, report: AxiomReport, samples: int,
                          exhaustive: bool) -> None:
    """Unit sections, inverses, commutativity and associativity of both partial laws."""
    P, T = inst.biext, inst.T
    for a, b in _pairs(inst, rng, samples, exhaustive):
        x = P.point(a, b, inst.sample_n(rng))
        # the unit over (0, b), carried to a different representative of 0
        unit_b = P.transport(P.point(T.A.zero, b), inst.perturb_a(T.A.zero, rng, [b]), b)
        unit_a = P.transport(P.point(a, T.B.zero), a, inst.perturb_b(T.B.zero, rng, [a]))
        if not P.equal(P.add_first(x, unit_b), x) or not P.equal(P.add_second(x, unit_a), x):
            _fail("unit section", a, b)
        report.bump("unit")
        # y, z share the B-class of x (first law) resp. the A-class (second law)
        y = P.point(inst.sample_a(rng, [b]), b, inst.sample_n(rng))
        bz = inst.perturb_b(b, rng, [])
        z = P.point(inst.sample_a(rng, [bz]), bz, inst.sample_n(rng))
        if not P.equal(P.add_first(x, y), P.add_first(y, x)):
            _fail("commutativity of the first law", a, b)
        if not P.equal(P.add_first(P.add_first(x, y), z), P.add_first(x, P.add_first(y, z))):
            _fail("associativity of the first law", a, b)
        if not P.equal(P.add_first(x, P.neg_first(x)), P.point(T.A.zero, b)):
            _fail("inverse in the first law", a, b)
        y2 = P.point(a, inst.sample_b(rng, [a]), inst.sample_n(rng))
        if not P.equal(P.add_second(x, y2), P.add_second(y2, x)):
            _fail("commutativity of the second law", a, b)
        if not P.equal(P.add_second(x, P.neg_second(x)), P.point(a, T.B.zero)):
            _fail("inverse in the second law", a, b)
        report.bump("group laws")


def check_transport(inst: AxiomInstance, rng: random.Random, report: AxiomReport, samples: int,
                    exhaustive: bool) -> None:
    """Transport to another basepoint does not depend on the path, and loops are trivial."""
    P = inst.biext
    for a, b in _pairs(inst, rng, samples, exhaustive):
        x = P.point(a, b, inst.sample_n(rng))
        a2 = inst.perturb_a(a, rng, [b])
        b2 = inst.perturb_b(b, rng, [a, a2])
        direct = P.transport(x, a2, b2)
        paths = []
        if inst.T.contains(a, b2):
            paths.append([(a, b2), (a2, b2)])
        paths.append([(a2, b), (a2, b2)])
        for path in paths:
            if not P.equal(P.transport_along(x, path), direct) or \
                    not P.N.eq(P.transport_along(x, path).n, direct.n):
                _fail("path independence of transport", a, b, a2, b2)
        back = P.transport(direct, a, b)
        if not P.N.eq(back.n, x.n):
            _fail("transport around a loop", a, b, a2, b2)
        report.bump("transport")


def check_restriction(inst: AxiomInstance, rng: random.Random, report: AxiomReport, samples: int,
                      exhaustive: bool) -> None:
    """Transports computed inside the restricted biextension agree with the original ones."""
    res = inst.restriction
    if res is None:
        return
    P = inst.biext
    R = P.restrict(res.contains)
    pairs = _pairs(inst, rng, samples, exhaustive) if res.sample is None else \
        (res.sample(rng) for _ in range(samples))
    for a, b in pairs:
        if not res.contains(a, b):
            continue
        a2 = None
        for _ in range(MAX_RESAMPLE):
            cand = res.perturb_a(a, b, rng) if res.perturb_a else inst.perturb_a(a, rng, [b])
            if res.contains(cand, b):
                a2 = cand
                break
        if a2 is None:
            continue
        x = R.point(a, b, inst.sample_n(rng))
        if not P.N.eq(R.transport(x, a2, b).n, P.transport(x, a2, b).n):
            _fail("restriction compatibility", a, b, a2)
        report.bump("restriction")


def check_twist(inst: AxiomInstance, rng: random.Random, report: AxiomReport, samples: int,
                exhaustive: bool) -> None:
    """Multiplication by phi carries equal points of P_psi to equal points of P_(psi+phi)."""
    if inst.twist is None:
        return
    P = inst.biext
    Pt = P.twist(inst.twist)
    f = twist_map(inst.twist, P.N)
    for a, b in _pairs(inst, rng, samples, exhaustive):
        x = P.point(a, b, inst.sample_n(rng))
        a2 = inst.perturb_a(a, rng, [b])
        b2 = inst.perturb_b(b, rng, [a2])
        y = P.transport(x, a2, b2)
        if not Pt.equal(f(x), f(y)):
            _fail("twist compatibility with transport", a, b)
        z = P.point(inst.sample_a(rng, [b]), b, inst.sample_n(rng))
        if not Pt.equal(f(P.add_first(x, z)), Pt.add_first(f(x), f(z))):
            _fail("twist compatibility with the first law", a, b)
        report.bump("twist")


CHECKS = (check_interchange, check_unit_and_groups, check_transport, check_restriction, check_twist)


def check_axioms(inst: AxiomInstance, *, samples: int = 500, seed: int = 0,
                 exhaustive_limit: int = 256) -> AxiomReport:
    """Run every law; exhaustive when |A| * |B| <= exhaustive_limit and kernels are listed."""
    rng = random.Random(seed)
    exhaustive = inst.exhaustive(exhaustive_limit)
    report = AxiomReport(inst.name, exhaustive)
    for check in CHECKS:
        check(inst, rng, report, samples, exhaustive)
    return report
