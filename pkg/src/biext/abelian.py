"""Exact integer linear algebra and finitely generated abelian groups.

Matrices are small, so everything is done with Python integers and plain
row/column operations.  A group is kept in Smith normal form: element
coordinates are listed torsion part first (reduced mod each invariant
factor) and then the free part.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod
from typing import Callable, Iterable, Iterator, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(map(int, r)) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        return cls(len(rows), cols, tuple(itertools.chain.from_iterable(rows)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls.from_rows([list(c) for c in columns], rows).T

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int, cols: int) -> IntMatrix:
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls.from_rows(out, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in cols)
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)],
                                   self.cols + other.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def det(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def to_json(self) -> str:
        return json.dumps([[str(x) for x in r] for r in self.to_rows()])

    @classmethod
    def from_json(cls, text: str | list, cols: int | None = None) -> IntMatrix:
        data = json.loads(text) if isinstance(text, str) else text
        return cls.from_rows([[int(x) for x in r] for r in data], cols)


def _smallest_nonzero(m, rows: Iterable[int], cols: Iterable[int]):
    best = None
    cols = list(cols)
    for i in rows:
        for j in cols:
            v = m[i][j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return best


@lru_cache(maxsize=4096)
def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``U @ m @ V == S`` and ``U``, ``V`` unimodular.

    ``S`` is diagonal with non-negative entries, each dividing the next.  The
    pivot at every stage is the entry of least absolute value, earliest in
    row-major order.
    """
    R, C = m.rows, m.cols
    s = m.to_rows()
    u = IntMatrix.identity(R).to_rows()
    v = IntMatrix.identity(C).to_rows()

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        s[dst] = [a + q * b for a, b in zip(s[dst], s[src])]
        u[dst] = [a + q * b for a, b in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for r in s:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    for t in range(min(R, C)):
        best = _smallest_nonzero(s, range(t, R), range(t, C))
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            while True:
                for i in range(t + 1, R):
                    if s[i][t]:
                        add_row(i, t, -(s[i][t] // s[t][t]))
                for j in range(t + 1, C):
                    if s[t][j]:
                        add_col(j, t, -(s[t][j] // s[t][t]))
                rest = _smallest_nonzero(s, range(t + 1, R), [t])
                rest_c = _smallest_nonzero(s, [t], range(t + 1, C))
                cand = [c for c in (rest, rest_c) if c is not None]
                if not cand:
                    break
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
            piv = s[t][t]
            bad = next(((i, j) for i in range(t + 1, R) for j in range(t + 1, C)
                        if s[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return (IntMatrix.from_rows(u, R), IntMatrix.from_rows(s, C), IntMatrix.from_rows(v, C))


def snf_diagonal(s: IntMatrix) -> list[int]:
    return [s[i, i] for i in range(min(s.rows, s.cols))]


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular matrix via its Smith form (which is ±identity)."""
    u, s, v = smith_normal_form(m)
    if any(d != 1 for d in snf_diagonal(s)) or m.rows != m.cols:
        raise ValueError("matrix is not unimodular")
    return v @ u


def integer_kernel(m: IntMatrix) -> list[Vector]:
    """A Z-basis of {x : m x = 0}."""
    _, s, v = smith_normal_form(m)
    r = sum(1 for d in snf_diagonal(s) if d)
    return [v.column(j) for j in range(r, m.cols)]


def solve_integer(m: IntMatrix, b: Sequence[int]) -> Vector | None:
    """Some integer x with m x = b, or None if no integer solution exists."""
    u, s, v = smith_normal_form(m)
    c = u.apply(b)
    diag = snf_diagonal(s)
    y = [0] * m.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci:
                return None
        elif ci % d:
            return None
        else:
            y[i] = ci // d
    return v.apply(y)


@dataclass(frozen=True)
class FgAbGroup:
    """Z/d_1 + ... + Z/d_t + Z^rank with d_i | d_(i+1) and every d_i >= 2.

    ``to_normal`` (n x n, unimodular) sends a row vector of coordinates over
    the presenting generators to normal coordinates before reduction;
    ``kept`` lists which of those coordinates survive (invariant factors of 1
    are dropped).
    """
    torsion: tuple[int, ...]
    rank: int
    to_normal: IntMatrix = field(default=None, compare=False, repr=False)
    from_normal: IntMatrix = field(default=None, compare=False, repr=False)
    kept: tuple[int, ...] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} do not form a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("invariant factors must be >= 2")
        if self.to_normal is None:
            n = self.ngens
            object.__setattr__(self, "to_normal", IntMatrix.identity(n))
            object.__setattr__(self, "from_normal", IntMatrix.identity(n))
            object.__setattr__(self, "kept", tuple(range(n)))

    @classmethod
    def from_invariants(cls, torsion: Sequence[int] = (), rank: int = 0) -> FgAbGroup:
        return cls(tuple(torsion), rank)

    @classmethod
    def cyclic(cls, d: int) -> FgAbGroup:
        if d == 0:
            return cls((), 1)
        return cls((d,) if d > 1 else (), 0)

    @classmethod
    def free(cls, rank: int) -> FgAbGroup:
        return cls((), rank)

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.rank

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.torsion + (0,) * self.rank

    @property
    def order(self) -> int | None:
        """Group order, or None if infinite."""
        return prod(self.torsion) if self.rank == 0 else None

    @property
    def exponent(self) -> int | None:
        if self.rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def reduce(self, x: Sequence[int]) -> Vector:
        if len(x) != self.ngens:
            raise ValueError(f"element of length {len(x)} in a group with {self.ngens} generators")
        return tuple(xi % d if d else int(xi) for xi, d in zip(x, self.moduli))

    def zero(self) -> Vector:
        return (0,) * self.ngens

    def gen(self, i: int) -> Vector:
        return self.reduce([int(i == j) for j in range(self.ngens)])

    def gens(self) -> list[Vector]:
        return [self.gen(i) for i in range(self.ngens)]

    def add(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x: Sequence[int]) -> Vector:
        return self.reduce([-a for a in x])

    def sub(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        return self.reduce([a - b for a, b in zip(x, y)])

    def scale(self, n: int, x: Sequence[int]) -> Vector:
        return self.reduce([n * a for a in x])

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.reduce(x))

    def element_order(self, x: Sequence[int]) -> int | None:
        x = self.reduce(x)
        if any(x[len(self.torsion):]):
            return None
        o = 1
        for xi, d in zip(x, self.torsion):
            o = o * (d // gcd(d, xi)) // gcd(o, d // gcd(d, xi))
        return o

    def elements(self) -> Iterator[Vector]:
        if self.rank:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.torsion))

    def from_generators(self, x: Sequence[int]) -> Vector:
        """Normal coordinates of the element with coordinates x over the presenting generators."""
        y = self.to_normal.T.apply(x)
        return self.reduce([y[k] for k in self.kept])

    def to_generators(self, y: Sequence[int]) -> Vector:
        """Coordinates over the presenting generators of a (lifted) normal-form element."""
        full = [0] * self.to_normal.rows
        for k, yk in zip(self.kept, y):
            full[k] = yk
        return self.from_normal.T.apply(full)

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "0"


def group_from_relations(rels: IntMatrix | Sequence[Sequence[int]], ngens: int | None = None) -> FgAbGroup:
    """Cokernel of the relation rows: Z^ngens / (row span of rels), in normal form."""
    if not isinstance(rels, IntMatrix):
        rels = IntMatrix.from_rows(rels, ngens)
    n = rels.cols if ngens is None else ngens
    if rels.cols != n:
        raise ValueError("relation matrix needs one column per generator")
    _, s, v = smith_normal_form(rels)
    diag = snf_diagonal(s) + [0] * max(0, n - min(rels.rows, rels.cols))
    kept = tuple(k for k in range(n) if diag[k] != 1)
    torsion = tuple(diag[k] for k in kept if diag[k] != 0)
    rank = sum(1 for k in kept if diag[k] == 0)
    # torsion coordinates first, then free
    kept = tuple(k for k in kept if diag[k] != 0) + tuple(k for k in kept if diag[k] == 0)
    return FgAbGroup(torsion, rank, v, unimodular_inverse(v), kept)


@dataclass(frozen=True)
class Hom:
    """Homomorphism given by the images of the normal generators of ``src`` (as columns)."""
    src: FgAbGroup
    dst: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.dst.ngens or self.matrix.cols != self.src.ngens:
            raise ValueError("hom matrix has the wrong shape")
        for j, d in enumerate(self.src.moduli):
            if d and not self.dst.is_zero([d * c for c in self.matrix.column(j)]):
                raise ValueError(f"generator {j} of order {d} maps to an element of larger order")

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.dst.reduce(self.matrix.apply(self.src.reduce(x)))

    def compose(self, other: Hom) -> Hom:
        """self after other."""
        return Hom(other.src, self.dst, self.matrix @ other.matrix)


def kernel_into(src: FgAbGroup, images: IntMatrix, moduli: Sequence[int]) -> list[Vector]:
    """Generators (in src coordinates) of the kernel of src -> Z^m/(moduli) given by images."""
    m = len(moduli)
    rel_cols = [tuple(int(i == k) * d for i in range(m)) for k, d in enumerate(moduli) if d]
    big = images
    if rel_cols:
        big = images.hstack(IntMatrix.from_columns(rel_cols, m))
    src_rel = [tuple(int(i == k) * d for i in range(src.ngens)) for k, d in enumerate(src.moduli) if d]
    gens = [tuple(v[:src.ngens]) for v in integer_kernel(big)]
    return [g for g in gens + src_rel if any(g)]


def subgroup(g: FgAbGroup, gens: Sequence[Sequence[int]]) -> tuple[FgAbGroup, Hom]:
    """Subgroup of g generated by gens, with its inclusion."""
    gens = [g.reduce(x) for x in gens]
    s = len(gens)
    if s == 0:
        sub = FgAbGroup.from_invariants()
        return sub, Hom(sub, g, IntMatrix.zeros(g.ngens, 0))
    cols = IntMatrix.from_columns(gens, g.ngens)
    rel_cols = [tuple(int(i == k) * d for i in range(g.ngens)) for k, d in enumerate(g.moduli) if d]
    big = cols.hstack(IntMatrix.from_columns(rel_cols, g.ngens)) if rel_cols else cols
    rels = [v[:s] for v in integer_kernel(big)]
    sub = group_from_relations(IntMatrix.from_rows(rels, s), s)
    images = [g.reduce(cols.apply(sub.to_generators(e))) for e in sub.gens()]
    return sub, Hom(sub, g, IntMatrix.from_columns(images, g.ngens))


def kernel(f: Hom) -> tuple[FgAbGroup, Hom]:
    return subgroup(f.src, kernel_into(f.src, f.matrix, f.dst.moduli))


def image_contains(f: Hom, y: Sequence[int]) -> Vector | None:
    """A preimage of y under f, or None."""
    y = f.dst.reduce(y)
    m = f.dst.ngens
    rel_cols = [tuple(int(i == k) * d for i in range(m)) for k, d in enumerate(f.dst.moduli) if d]
    big = f.matrix.hstack(IntMatrix.from_columns(rel_cols, m)) if rel_cols else f.matrix
    x = solve_integer(big, y)
    return None if x is None else f.src.reduce(x[:f.src.ngens])


def l_torsion(g: FgAbGroup, l: int) -> tuple[FgAbGroup, Hom]:
    """The subgroup {a : l a = 0}, with its inclusion."""
    if l < 1:
        raise ValueError("l must be positive")
    orders = [gcd(d, l) for d in g.torsion]
    sub = FgAbGroup.from_invariants([o for o in orders if o > 1])
    cols = []
    for k, (d, o) in enumerate(zip(g.torsion, orders)):
        if o > 1:
            cols.append(tuple((d // o) * int(i == k) for i in range(g.ngens)))
    return sub, Hom(sub, g, IntMatrix.from_columns(cols, g.ngens))


def tensor(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    """A tensor B: pairwise Z/gcd of the cyclic summands."""
    moduli = [gcd(x, y) for x in a.moduli for y in b.moduli]
    n = len(moduli)
    rels = [[int(i == k) * d for i in range(n)] for k, d in enumerate(moduli) if d]
    return group_from_relations(IntMatrix.from_rows(rels, n), n)


def check_pairing_table(h: FgAbGroup, k: FgAbGroup, n: FgAbGroup,
                        table: Sequence[Sequence[Sequence[int]]]) -> None:
    """Raise ValueError unless table[i][j] defines a bilinear map h x k -> n."""
    for i, d in enumerate(h.moduli):
        for j, e in enumerate(k.moduli):
            val = n.reduce(table[i][j])
            for order, side in ((d, "first"), (e, "second")):
                if order and not n.is_zero(n.scale(order, val)):
                    raise ValueError(
                        f"pairing not bilinear: generator pair ({i}, {j}) is not killed "
                        f"by the order {order} of the {side} generator")


def pairing_value(n: FgAbGroup, table, x: Sequence[int], y: Sequence[int]) -> Vector:
    acc = [0] * n.ngens
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if yj:
                acc = [a + xi * yj * t for a, t in zip(acc, table[i][j])]
    return n.reduce(acc)


def annihilator_subgroup(table: Sequence[Sequence[Sequence[int]]], h: FgAbGroup, k: FgAbGroup,
                         n: FgAbGroup) -> tuple[FgAbGroup, Hom]:
    """{x in h : pairing(x, y) = 0 for all y in k}.

    ``table[i][j]`` is the value in ``n`` on the i-th generator of h and the
    j-th generator of k.
    """
    check_pairing_table(h, k, n, table)
    rows = []
    for j in range(k.ngens):
        for c in range(n.ngens):
            rows.append([table[i][j][c] for i in range(h.ngens)])
    images = IntMatrix.from_rows(rows, h.ngens)
    return subgroup(h, kernel_into(h, images, n.moduli * k.ngens))


def enumerate_l_torsion(g: FgAbGroup, l: int) -> list[Vector]:
    return [x for x in g.elements() if g.is_zero(g.scale(l, x))]


def from_callable_pairing(h: FgAbGroup, k: FgAbGroup, pairing: Callable) -> list:
    return [[pairing(x, y) for y in k.gens()] for x in h.gens()]
