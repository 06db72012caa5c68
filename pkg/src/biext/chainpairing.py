"""The biextension induced by a chain-level pairing A^. (x) B^. -> N."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .abelian import (FgAbGroup, Hom, IntMatrix, Vector, annihilator_subgroup,
                      image_contains, pairing_value, solve_integer)
from .biextension import (Biextension, BiextensionError, Bisubgroup, GroupOps,
                          Trivialization, build_quotient_biextension)
from .complexes import BoundedComplex, Cohomology, homology


class ChainConditionError(BiextensionError):
    pass


@dataclass(frozen=True)
class ChainPairing:
    """Degreewise pairings phi_i: A^i x B^(-i) -> N forming a map of complexes.

    ``phi[i][j][k]`` is the value (an element of N) on the j-th basis vector
    of A^i and the k-th basis vector of B^(-i); missing degrees pair to zero.
    """
    A: BoundedComplex
    B: BoundedComplex
    N: FgAbGroup
    phi: Mapping[int, Sequence[Sequence[Sequence[int]]]]
    p: int
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        for i, table in self.phi.items():
            if len(table) != self.A.rank(i) or any(len(r) != self.B.rank(-i) for r in table):
                raise ValueError(f"pairing table in degree {i} has the wrong shape")
        if self.check:
            bad = self.chain_condition_violation()
            if bad is not None:
                i, j, k = bad
                raise ChainConditionError(
                    f"chain-map condition fails for generator {j} of A^{i} and generator {k} "
                    f"of B^{-i - 1}")

    def pair(self, i: int, x: Sequence[int], y: Sequence[int]) -> Vector:
        table = self.phi.get(i)
        if table is None or not len(x) or not len(y):
            return self.N.zero()
        return pairing_value(self.N, table, x, y)

    def chain_condition_violation(self) -> tuple[int, int, int] | None:
        """First (i, j, k) with phi(d a_j, b_k) + (-1)^i phi(a_j, d b_k) != 0."""
        N = self.N
        degrees = set(self.phi) | {i - 1 for i in self.phi}
        for i in sorted(degrees):
            na, nb = self.A.rank(i), self.B.rank(-i - 1)
            for j in range(na):
                a = tuple(int(t == j) for t in range(na))
                da = self.A.differential(i, a)
                for k in range(nb):
                    b = tuple(int(t == k) for t in range(nb))
                    db = self.B.differential(-i - 1, b)
                    v = N.add(self.pair(i + 1, da, b), N.scale((-1) ** (i % 2), self.pair(i, a, db)))
                    if not N.is_zero(v):
                        return i, j, k
        return None


def _cohomology(c: BoundedComplex, p: int) -> Cohomology | None:
    return homology(c, p) if c.lo <= p <= c.hi else None


def _primed(h: Cohomology | None, other: Cohomology | None, pairing, N: FgAbGroup):
    """Annihilator of ``other`` inside ``h`` under pairing(lift, lift)."""
    if h is None:
        return None
    g = h.group
    if other is None:
        return g, Hom(g, g, IntMatrix.identity(g.ngens))
    table = [[pairing(h.lift(x), other.lift(y)) for y in other.group.gens()] for x in g.gens()]
    return annihilator_subgroup(table, g, other.group, N)


@dataclass(frozen=True)
class PrimedCocycles:
    """Ker(d^p)': cocycles whose class lies in the primed subgroup of H^p."""
    complex: BoundedComplex
    degree: int
    cohomology: Cohomology | None
    sub: FgAbGroup | None
    inclusion: Hom | None

    @property
    def dim(self) -> int:
        return self.complex.rank(self.degree)

    def contains(self, z: Sequence[int]) -> bool:
        z = tuple(z)
        if len(z) != self.dim:
            return False
        if self.cohomology is None:
            return True
        if any(self.complex.differential(self.degree, z)):
            return False
        return image_contains(self.inclusion, self.cohomology.class_of(z)) is not None

    def is_coboundary(self, z: Sequence[int]) -> bool:
        return solve_integer(self.complex.d(self.degree - 1), z) is not None

    def class_of(self, z: Sequence[int]) -> Vector:
        if self.cohomology is None:
            return ()
        c = image_contains(self.inclusion, self.cohomology.class_of(z))
        if c is None:
            raise BiextensionError(f"{tuple(z)} is not in the primed subgroup")
        return c

    def lift(self, alpha: Sequence[int]) -> Vector:
        if self.cohomology is None:
            return (0,) * self.dim
        return self.cohomology.lift(self.inclusion(alpha))

    def generators(self) -> list[Vector]:
        gens = []
        if self.sub is not None:
            gens += [self.lift(g) for g in self.sub.gens()]
        prev = self.complex.d(self.degree - 1)
        gens += [prev.column(j) for j in range(prev.cols)]
        return [g for g in gens if any(g)]

    def ops(self, name: str) -> GroupOps:
        gens = self.generators()
        n = self.dim

        def add(x, y):
            return tuple(a + b for a, b in zip(x, y))

        def sample(rng: random.Random):
            acc = (0,) * n
            for g in gens:
                acc = add(acc, tuple(rng.randint(-3, 3) * t for t in g))
            return acc

        return GroupOps((0,) * n, add, lambda x: tuple(-t for t in x), lambda x, y: tuple(x) == tuple(y),
                        sample, None, name)


def chain_pairing_sides(cp: ChainPairing) -> tuple[PrimedCocycles, PrimedCocycles]:
    p = cp.p
    hA, hA_dual = _cohomology(cp.A, p), _cohomology(cp.B, -p)
    hB, hB_dual = _cohomology(cp.B, 1 - p), _cohomology(cp.A, p - 1)
    pa = _primed(hA, hA_dual, lambda x, y: cp.pair(p, x, y), cp.N)
    pb = _primed(hB, hB_dual, lambda y, x: cp.pair(p - 1, x, y), cp.N)
    side_a = PrimedCocycles(cp.A, p, hA, *(pa or (None, None)))
    side_b = PrimedCocycles(cp.B, 1 - p, hB, *(pb or (None, None)))
    return side_a, side_b


def chain_psi(cp: ChainPairing):
    """psi(d x, b) = phi(x, b) and psi(a, d y) = (-1)^p phi(a, y)."""
    p, N = cp.p, cp.N
    dA, dB = cp.A.d(p - 1), cp.B.d(-p)

    def psi(a, b):
        x = solve_integer(dA, a)
        if x is not None:
            return cp.pair(p - 1, x, b)
        y = solve_integer(dB, b)
        if y is not None:
            return N.scale((-1) ** (p % 2), cp.pair(p, a, y))
        raise BiextensionError(f"({a}, {b}) is not in S")
    return psi


def biextension_from_chain_pairing(cp: ChainPairing, *, samples: int = 500, seed: int = 0) -> Biextension:
    """P_psi over (H^p(A)', H^(1-p)(B)') by N."""
    side_a, side_b = chain_pairing_sides(cp)

    def section(alpha, beta):
        return side_a.lift(alpha), side_b.lift(beta)

    T = Bisubgroup(
        side_a.ops("Ker(d_A)'"), side_b.ops("Ker(d_B)'"),
        lambda a, b: side_a.contains(a) and side_b.contains(b),
        side_a.is_coboundary, side_b.is_coboundary,
        side_a.class_of, side_b.class_of, section)
    triv = Trivialization(GroupOps.from_fg(cp.N, "N"), chain_psi(cp))
    return build_quotient_biextension(T, triv, samples=samples, seed=seed, label="P_phi")


def massey_weil(cp: ChainPairing, a: Sequence[int], b: Sequence[int], l: int,
                a_bound: Sequence[int], b_bound: Sequence[int]) -> Vector:
    """Pushforward of the Massey representative a~ . b - (-1)^p a . b~.

    Needs d a~ = l a and d b~ = l b; the pairing plays the role of the
    product followed by the pushforward to N.
    """
    p = cp.p
    if tuple(cp.A.differential(p - 1, a_bound)) != tuple(l * t for t in a):
        raise BiextensionError("bounding chain for a does not satisfy d a~ = l a")
    if tuple(cp.B.differential(-p, b_bound)) != tuple(l * t for t in b):
        raise BiextensionError("bounding chain for b does not satisfy d b~ = l b")
    N = cp.N
    first = cp.pair(p - 1, a_bound, b)
    second = cp.pair(p, a, b_bound)
    return N.sub(first, N.scale((-1) ** (p % 2), second))


def chain_pairing_from_json(data: Mapping[str, Any]) -> ChainPairing:
    def cx(d):
        return BoundedComplex.build(int(d["lo"]), [int(r) for r in d["ranks"]],
                                    [[[int(x) for x in row] for row in m] for m in d["diffs"]])
    n = data["N"]
    N = FgAbGroup.from_invariants([int(t) for t in n.get("torsion", [])], int(n.get("rank", 0)))
    phi = {int(i): [[[int(x) for x in v] for v in row] for row in t] for i, t in data["phi"].items()}
    return ChainPairing(cx(data["A"]), cx(data["B"]), N, phi, int(data["p"]))


def toy_chain_pairing(modulus: int = 4, phi0: int = 1, phi1: int = 1) -> ChainPairing:
    """Z -(x2)-> Z in degrees 0, 1 against Z -(x2)-> Z in degrees -1, 0, into Z/modulus.

    The pairings are a b -> phi0 a b in degree 0 and phi1 a b in degree 1;
    they form a map of complexes when 2 (phi0 + phi1) = 0 in N.  With
    modulus 0 the target is Z.
    """
    A = BoundedComplex.build(0, [1, 1], [[[2]]])
    B = BoundedComplex.build(-1, [1, 1], [[[2]]])
    N = FgAbGroup.cyclic(modulus)

    def elt(c):
        return N.reduce([c] * N.ngens)
    return ChainPairing(A, B, N, {0: [[elt(phi0)]], 1: [[elt(phi1)]]}, 1)
