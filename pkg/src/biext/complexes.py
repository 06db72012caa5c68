"""Bounded cochain complexes of free abelian groups and their cohomology."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .abelian import (FgAbGroup, IntMatrix, Vector, group_from_relations,
                      integer_kernel, smith_normal_form, snf_diagonal, solve_integer,
                      unimodular_inverse)


@dataclass(frozen=True)
class BoundedComplex:
    """Free groups Z^ranks[i] in degrees lo..hi; ``diffs[i]`` is d^(lo+i): C^(lo+i) -> C^(lo+i+1).

    The last differential (out of the top degree) is implicitly zero, so
    ``diffs`` has one entry fewer than ``ranks``.  Differentials act on
    column vectors.
    """
    lo: int
    ranks: tuple[int, ...]
    diffs: tuple[IntMatrix, ...]

    def __post_init__(self):
        if len(self.diffs) != max(len(self.ranks) - 1, 0):
            raise ValueError("need exactly one differential between consecutive degrees")
        for i, d in enumerate(self.diffs):
            if (d.rows, d.cols) != (self.ranks[i + 1], self.ranks[i]):
                raise ValueError(f"differential out of degree {self.lo + i} has shape "
                                 f"{d.rows}x{d.cols}, expected {self.ranks[i + 1]}x{self.ranks[i]}")
        for i in range(len(self.diffs) - 1):
            if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                raise ValueError(f"d^{self.lo + i + 1} d^{self.lo + i} != 0")

    @classmethod
    def build(cls, lo: int, ranks: Sequence[int], diffs: Sequence[Sequence[Sequence[int]]]) -> BoundedComplex:
        mats = tuple(IntMatrix.from_rows(d, ranks[i]) for i, d in enumerate(diffs))
        return cls(lo, tuple(ranks), mats)

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    def rank(self, p: int) -> int:
        if self.lo <= p <= self.hi:
            return self.ranks[p - self.lo]
        return 0

    def d(self, p: int) -> IntMatrix:
        """d^p: C^p -> C^(p+1), zero outside the stored range."""
        if self.lo <= p < self.hi:
            return self.diffs[p - self.lo]
        return IntMatrix.zeros(self.rank(p + 1), self.rank(p))

    def differential(self, p: int, x: Sequence[int]) -> Vector:
        return self.d(p).apply(x)


@dataclass(frozen=True)
class Cohomology:
    """H^p with explicit maps between cocycles and classes."""
    group: FgAbGroup
    complex: BoundedComplex
    degree: int
    _vinv: IntMatrix
    _v: IntMatrix
    _r: int

    def class_of(self, z: Sequence[int]) -> Vector:
        z = tuple(z)
        if any(self.complex.differential(self.degree, z)):
            raise ValueError(f"{z} is not a cocycle in degree {self.degree}")
        coords = self._vinv.apply(z)[self._r:]
        return self.group.from_generators(coords)

    def lift(self, g: Sequence[int]) -> Vector:
        coords = self.group.to_generators(g)
        full = [0] * self._r + list(coords)
        return self._v.apply(full)


def homology(c: BoundedComplex, p: int) -> Cohomology:
    """Ker(d^p) / Im(d^(p-1)) with class and lift maps."""
    if not c.lo <= p <= c.hi:
        raise ValueError(f"degree {p} outside [{c.lo}, {c.hi}]")
    dp = c.d(p)
    _, s, v = smith_normal_form(dp)
    r = sum(1 for x in snf_diagonal(s) if x)
    vinv = unimodular_inverse(v)
    k = c.rank(p) - r
    prev = c.d(p - 1)
    # image of d^(p-1) expressed in the kernel basis (last k columns of v)
    rels = [vinv.apply(prev.column(j))[r:] for j in range(prev.cols)]
    h = group_from_relations(IntMatrix.from_rows(rels, k), k)
    return Cohomology(h, c, p, vinv, v, r)


def boundary_preimage(c: BoundedComplex, p: int, z: Sequence[int]) -> Vector | None:
    """Some x with d^(p-1) x = z, or None if z is not a coboundary."""
    return solve_integer(c.d(p - 1), z)


def cocycle_basis(c: BoundedComplex, p: int) -> list[Vector]:
    return integer_kernel(c.d(p))


def euler_ranks(c: BoundedComplex) -> Callable[[int], int]:
    """Rank of the image of each differential, for rank-nullity bookkeeping."""
    def img_rank(p: int) -> int:
        _, s, _ = smith_normal_form(c.d(p))
        return sum(1 for x in snf_diagonal(s) if x)
    return img_rank
