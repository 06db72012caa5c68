"""Complex tori of weight -1 Hodge structures and the Poincare biextension between them.

Vectors live in lattice coordinates: H_Z = Z^2g inside H_C = C^2g.  A dual
vector y pairs with x by <x, y> = exp(2 pi i x^T Q y), so with Q unimodular
the dual lattice is again Z^2g in the same coordinates and the basis dual to
e_j is Q^-1 e_j.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .biextension import (Biextension, BiextensionError, Bisubgroup, GroupOps,
                          Trivialization, build_quotient_biextension)

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class Tolerance:
    eps: float = 1e-9

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("tolerance must be positive")


DEFAULT_TOL = Tolerance()


class HodgeInvariantError(ValueError):
    def __init__(self, invariant: str, residual: float, detail: str = ""):
        super().__init__(f"invariant '{invariant}' fails (residual {residual:.3e}){': ' + detail if detail else ''}")
        self.invariant = invariant
        self.residual = residual


class DecompositionError(BiextensionError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class Residual:
    name: str
    value: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.value <= self.tol

    def to_json(self) -> dict:
        return {"name": self.name, "residual": repr(float(self.value)), "ok": self.ok}


def _as_complex_matrix(rows) -> np.ndarray:
    return np.array(rows, dtype=complex, ndmin=2)


@dataclass(frozen=True, eq=False)
class HodgeStructure:
    """F^0 (rows spanning a g-dimensional subspace of C^2g) and the integral duality matrix Q."""
    F0: np.ndarray
    Q: np.ndarray
    tol: Tolerance = DEFAULT_TOL
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        F0 = _as_complex_matrix(self.F0)
        Q = np.array(self.Q, dtype=np.int64, ndmin=2)
        object.__setattr__(self, "F0", F0)
        object.__setattr__(self, "Q", Q)
        if F0.shape[1] != 2 * F0.shape[0]:
            raise HodgeInvariantError("shape", float("inf"), f"F0 must be g x 2g, got {F0.shape}")
        if Q.shape != (F0.shape[1], F0.shape[1]):
            raise HodgeInvariantError("shape", float("inf"), f"Q must be {F0.shape[1]} x {F0.shape[1]}")
        if self.check:
            for r in self.invariants():
                if not r.ok:
                    raise HodgeInvariantError(r.name, r.value)

    @property
    def g(self) -> int:
        return self.F0.shape[0]

    @property
    def n(self) -> int:
        return 2 * self.g

    def invariants(self) -> list[Residual]:
        eps = self.tol.eps
        det = round(np.linalg.det(self.Q.astype(float)))
        out = [Residual("unimodular Q", float(abs(abs(det) - 1)), 0.5)]
        # both conditions are reported as condition numbers against the limit 1/eps
        out.append(Residual("F0 complementary to its conjugate", self.condition_number, 1 / eps))
        msv = np.linalg.svd(self._real_system, compute_uv=False)
        out.append(Residual("no lattice vector in F0", float(msv[0] / msv[-1]) if msv[-1] else math.inf, 1 / eps))
        return out

    @property
    def condition_number(self) -> float:
        sv = np.linalg.svd(np.vstack([self.F0, self.F0.conj()]), compute_uv=False)
        return float(sv[0] / sv[-1]) if sv[-1] else math.inf

    @cached_property
    def _real_system(self) -> np.ndarray:
        # phi = r + F0^T c: unknowns (r, Re c, Im c), equations (Re, Im).
        Ft = self.F0.T
        top = np.hstack([np.eye(self.n), Ft.real, -Ft.imag])
        bottom = np.hstack([np.zeros((self.n, self.n)), Ft.imag, Ft.real])
        return np.vstack([top, bottom])

    @cached_property
    def _real_inverse(self) -> np.ndarray:
        return np.linalg.inv(self._real_system)

    def decompose(self, phi) -> tuple[np.ndarray, np.ndarray]:
        """phi = r + eta with r real and eta = F0^T c in F0; returns (r, c)."""
        phi = np.asarray(phi, dtype=complex)
        sol = self._real_inverse @ np.concatenate([phi.real, phi.imag])
        n, g = self.n, self.g
        return sol[:n], sol[n:n + g] + 1j * sol[n + g:]

    def f0_vector(self, c) -> np.ndarray:
        return self.F0.T @ np.asarray(c, dtype=complex)

    def integral_decompose(self, phi) -> tuple[np.ndarray, np.ndarray, float]:
        """phi = gamma + eta with gamma integral; returns (gamma, eta, residual)."""
        r, c = self.decompose(phi)
        gamma = np.rint(r)
        return gamma.astype(np.int64), self.f0_vector(c), float(np.max(np.abs(r - gamma), initial=0.0))

    def in_lattice_plus_f0(self, phi) -> bool:
        return self.integral_decompose(phi)[2] <= self.tol.eps

    def pair(self, x, y) -> complex:
        """x^T Q y, before exponentiation."""
        return complex(np.asarray(x, dtype=complex) @ self.Q @ np.asarray(y, dtype=complex))

    def dual_basis(self, j: int) -> np.ndarray:
        e = np.zeros(self.n)
        e[j] = 1
        return np.linalg.solve(self.Q.astype(float), e)

    def point(self, vector) -> JacobianPoint:
        return JacobianPoint(self, np.asarray(vector, dtype=complex))

    def to_json(self) -> dict:
        return {"g": self.g,
                "F0": [[[repr(float(z.real)), repr(float(z.imag))] for z in row] for row in self.F0],
                "Q": [[str(int(x)) for x in row] for row in self.Q],
                "tolerance": repr(self.tol.eps)}


def same_subspace(A: np.ndarray, B: np.ndarray) -> float:
    """Distance between the row spaces of A and B (norm of the projector difference)."""
    def proj(M):
        q, _ = np.linalg.qr(M.conj().T)
        return q @ q.conj().T
    return float(np.linalg.norm(proj(A) - proj(B)))


def dual_hs(h: HodgeStructure) -> HodgeStructure:
    """H^v with F^0 H^v the annihilator of F^0 H under Q and duality matrix Q^T."""
    M = h.F0 @ h.Q
    _, sv, vh = np.linalg.svd(M)
    rank = int(np.sum(sv > h.tol.eps * max(1.0, sv[0])))
    if rank != h.g or np.linalg.matrix_rank(h.Q.astype(float)) < h.n:
        raise HodgeInvariantError("annihilator of dimension g", float(abs(h.n - rank - h.g)),
                                  "Q or F0 is degenerate")
    null = vh[h.g:].conj()
    dual = HodgeStructure(null, h.Q.T, h.tol, check=h.check)
    residual = float(np.max(np.abs(h.F0 @ h.Q @ null.T)))
    if residual > h.tol.eps:
        raise HodgeInvariantError("F0 pairs to zero with dual F0", residual)
    return dual


# -- Jacobian points ---------------------------------------------------------------

def _fold(r: np.ndarray, eps: float) -> np.ndarray:
    f = r - np.floor(r)
    f[np.abs(f - 1) <= eps] = 0.0
    f[np.abs(f) <= eps] = 0.0
    return f


@dataclass(frozen=True, eq=False)
class JacobianPoint:
    """A point of J(H) = H_C / (H_Z + F^0), carried by a representative vector."""
    h: HodgeStructure
    vector: np.ndarray

    @property
    def normal_form(self) -> np.ndarray:
        """Real-torus coordinates in [0, 1)^2g of the H_R-component."""
        r, _ = self.h.decompose(self.vector)
        return _fold(r, self.h.tol.eps)

    def canonical(self) -> JacobianPoint:
        return JacobianPoint(self.h, self.normal_form.astype(complex))

    def __add__(self, other: JacobianPoint) -> JacobianPoint:
        return JacobianPoint(self.h, self.vector + other.vector)

    def __neg__(self) -> JacobianPoint:
        return JacobianPoint(self.h, -self.vector)

    def __sub__(self, other: JacobianPoint) -> JacobianPoint:
        return self + (-other)

    def __rmul__(self, k: int) -> JacobianPoint:
        return JacobianPoint(self.h, k * self.vector)

    def distance(self, other: JacobianPoint) -> float:
        r, _ = self.h.decompose(self.vector - other.vector)
        return float(np.max(np.abs(r - np.rint(r)), initial=0.0))

    def is_zero(self) -> bool:
        return self.h.in_lattice_plus_f0(self.vector)

    def equals(self, other: JacobianPoint) -> bool:
        return self.distance(other) <= self.h.tol.eps

    def to_json(self) -> list:
        return [repr(float(x)) for x in self.normal_form]


# -- the Poincare biextension ------------------------------------------------------

def poincare_psi(h: HodgeStructure, first, second, slot: int, dual: HodgeStructure | None = None) -> complex:
    """psi(gamma + eta, y) = <gamma, y> (slot 1) and psi(x, gamma' + eta') = <x, eta'> (slot 2)."""
    if slot == 1:
        gamma, _, res = h.integral_decompose(first)
        if res > h.tol.eps:
            raise DecompositionError("first argument is not in H_Z + F0", res)
        return cmath.exp(TWO_PI_I * h.pair(gamma, second))
    if slot == 2:
        dual = dual or dual_hs(h)
        _, eta, res = dual.integral_decompose(second)
        if res > h.tol.eps:
            raise DecompositionError("second argument is not in H^v_Z + F0 H^v", res)
        return cmath.exp(TWO_PI_I * h.pair(first, eta))
    raise ValueError("slot must be 1 or 2")


def complex_units(tol: Tolerance) -> GroupOps:
    def eq(x, y):
        return abs(x - y) <= tol.eps * max(1.0, abs(x), abs(y))

    def sample(rng: random.Random):
        return cmath.exp(complex(rng.uniform(-1, 1), rng.uniform(-math.pi, math.pi)))
    return GroupOps.multiplicative(1 + 0j, lambda x, y: x * y, lambda x: 1 / x, eq, sample, "C*")


def vector_ops(h: HodgeStructure, name: str, scale: float = 1.0) -> GroupOps:
    n, eps = h.n, h.tol.eps

    def sample(rng: random.Random):
        return np.array([complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale)) for _ in range(n)])

    return GroupOps(np.zeros(n, dtype=complex), lambda x, y: x + y, lambda x: -x,
                    lambda x, y: bool(np.max(np.abs(x - y), initial=0.0) <= eps), sample, None, name)


def kernel_sampler(h: HodgeStructure, box: int = 2, scale: float = 0.5):
    """Random elements of H_Z + F0."""
    def sample(rng: random.Random):
        gamma = np.array([rng.randint(-box, box) for _ in range(h.n)], dtype=complex)
        c = np.array([complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale)) for _ in range(h.g)])
        return gamma + h.f0_vector(c)
    return sample


def poincare_trivialization(h: HodgeStructure, dual: HodgeStructure | None = None) -> Trivialization:
    dual = dual or dual_hs(h)

    def psi(x, y):
        if h.in_lattice_plus_f0(x):
            return poincare_psi(h, x, y, 1)
        return poincare_psi(h, x, y, 2, dual)
    return Trivialization(complex_units(h.tol), psi)


def poincare_biextension(h: HodgeStructure, *, samples: int = 200, seed: int = 0) -> Biextension:
    """P over (J(H), J(H^v)) by C^*, with T = H_C x H^v_C."""
    dual = dual_hs(h)
    T = Bisubgroup(
        vector_ops(h, "H_C"), vector_ops(dual, "H^v_C"),
        lambda x, y: True,
        h.in_lattice_plus_f0, dual.in_lattice_plus_f0,
        lambda x: tuple(JacobianPoint(h, x).normal_form),
        lambda y: tuple(JacobianPoint(dual, y).normal_form),
        lambda alpha, beta: (np.asarray(alpha, dtype=complex), np.asarray(beta, dtype=complex)),
        sample_ker_A=kernel_sampler(h), sample_ker_B=kernel_sampler(dual))
    return build_quotient_biextension(T, poincare_trivialization(h, dual), samples=samples,
                                      seed=seed, label="P_Hodge")


def analytic_weil(h: HodgeStructure, e: JacobianPoint | Sequence, f: JacobianPoint | Sequence, l: int,
                  dual: HodgeStructure | None = None) -> complex:
    """psi(l e~, f~) / psi(e~, l f~) for lifts e~, f~ of l-torsion points."""
    if l < 1:
        raise ValueError("l must be positive")
    dual = dual or dual_hs(h)
    ev = e.vector if isinstance(e, JacobianPoint) else np.asarray(e, dtype=complex)
    fv = f.vector if isinstance(f, JacobianPoint) else np.asarray(f, dtype=complex)
    for name, hs, v in (("e", h, ev), ("f", dual, fv)):
        res = hs.integral_decompose(l * v)[2]
        if res > h.tol.eps:
            raise DecompositionError(f"{l} * {name} is not zero in the torus", res)
    return poincare_psi(h, l * ev, fv, 1) / poincare_psi(h, ev, l * fv, 2, dual)


def symplectic_weil(h: HodgeStructure, x: Sequence[int], y: Sequence[int], l: int) -> complex:
    """exp(2 pi i x^T Q y / l): the pairing of the l-torsion points x/l and y/l, read off Q directly."""
    return cmath.exp(TWO_PI_I * (int(np.asarray(x) @ h.Q @ np.asarray(y)) % l) / l)


def height_trivialization(h: HodgeStructure, phi, phi_dual) -> float:
    """log|<r, phi^v>| = Re(2 pi i r^T Q phi^v) where phi = r + eta, r real."""
    r, _ = h.decompose(phi)
    return float((TWO_PI_I * h.pair(r, phi_dual)).real)


# -- constructors ------------------------------------------------------------------

def standard_symplectic(g: int) -> np.ndarray:
    Q = np.zeros((2 * g, 2 * g), dtype=np.int64)
    Q[:g, g:] = np.eye(g, dtype=np.int64)
    Q[g:, :g] = -np.eye(g, dtype=np.int64)
    return Q


def elliptic_hodge(omega1: complex, omega2: complex, tol: Tolerance = DEFAULT_TOL) -> HodgeStructure:
    """H_1 of C / (Z omega1 + Z omega2): F0 is the kernel of (u, v) -> u omega1 + v omega2."""
    return HodgeStructure([[omega2, -omega1]], standard_symplectic(1), tol)


def square_lattice(tol: Tolerance = DEFAULT_TOL) -> HodgeStructure:
    """The lattice Z + Zi, with F0 spanned by e1 + i e2."""
    return HodgeStructure([[1, 1j]], standard_symplectic(1), tol)


def siegel_hodge(Z: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> HodgeStructure:
    """F0 spanned by the rows of [Z | -I] for a symmetric Z with positive-definite imaginary part."""
    Z = np.asarray(Z, dtype=complex)
    g = Z.shape[0]
    return HodgeStructure(np.hstack([Z, -np.eye(g)]), standard_symplectic(g), tol)


def random_siegel(g: int, rng: random.Random, tol: Tolerance = DEFAULT_TOL) -> HodgeStructure:
    X = np.array([[rng.uniform(-0.5, 0.5) for _ in range(g)] for _ in range(g)])
    A = np.array([[rng.uniform(-0.5, 0.5) for _ in range(g)] for _ in range(g)])
    Y = A @ A.T + np.eye(g) * rng.uniform(0.6, 1.2)
    return siegel_hodge((X + X.T) / 2 + 1j * Y, tol)


def random_hodge(g: int, rng: random.Random, tol: Tolerance = DEFAULT_TOL) -> HodgeStructure:
    """A generic F0 (not isotropic for Q) paired against a random unimodular Q."""
    F0 = np.array([[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(2 * g)] for _ in range(g)])
    Q = standard_symplectic(g)
    for _ in range(4):
        i, j = rng.sample(range(2 * g), 2)
        E = np.eye(2 * g, dtype=np.int64)
        E[i, j] = rng.choice([-1, 1])
        Q = Q @ E
    return HodgeStructure(F0, Q, tol)


# -- Abel-Jacobi for elliptic curves -----------------------------------------------

def abel_jacobi_elliptic(lattice: tuple[complex, complex], divisor: Mapping[complex, int] | Iterable[tuple[complex, int]],
                         tol: Tolerance = DEFAULT_TOL) -> JacobianPoint:
    """sum n_i z_i modulo the lattice, as a point of J(H_1)."""
    items = list(divisor.items() if isinstance(divisor, Mapping) else divisor)
    if sum(n for _, n in items) != 0:
        raise ValueError("Abel-Jacobi needs a divisor of degree zero")
    w1, w2 = lattice
    h = elliptic_hodge(w1, w2, tol)
    z = sum(n * complex(p) for p, n in items)
    # real coordinates (s, t) with s w1 + t w2 = z
    M = np.array([[w1.real, w2.real], [w1.imag, w2.imag]])
    s, t = np.linalg.solve(M, [z.real, z.imag])
    return JacobianPoint(h, np.array([s, t], dtype=complex)).canonical()


# -- JSON ----------------------------------------------------------------------------

def parse_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", ""))
    return complex(v)


def hodge_from_json(data: Mapping[str, Any], tol: Tolerance | None = None) -> HodgeStructure:
    extra = set(data) - {"lattice", "F0", "Q", "tolerance"}
    if extra:
        raise ValueError(f"unknown field(s) in hodge structure: {', '.join(sorted(extra))}")
    tol = tol or Tolerance(float(data.get("tolerance", DEFAULT_TOL.eps)))
    if "lattice" in data:
        w1, w2 = (parse_complex(v) for v in data["lattice"])
        return elliptic_hodge(w1, w2, tol)
    F0 = [[parse_complex(v) for v in row] for row in data["F0"]]
    Q = [[int(x) for x in row] for row in data["Q"]]
    return HodgeStructure(F0, Q, tol)


def complex_to_json(z: complex) -> list[str]:
    return [repr(float(z.real)), repr(float(z.imag))]
