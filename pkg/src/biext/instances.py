"""Ready-made biextensions used by the test suite and by ``biextctl selftest``."""

from __future__ import annotations

import random

import numpy as np

from .abelian import FgAbGroup, Hom, IntMatrix
from .axioms import AxiomInstance, Restriction
from .biextension import GroupOps, Trivialization, build_quotient_biextension, fg_bisubgroup
from .chainpairing import biextension_from_chain_pairing, toy_chain_pairing
from .curves import EllipticCurve
from .fields import FiniteField
from .hodge import (HodgeStructure, complex_units, poincare_biextension, random_hodge,
                    random_siegel, square_lattice)
from .pairing import field_units, pe_biextension


# -- finite groups -----------------------------------------------------------------

def cyclic8_biextension():
    """Z/8 x Z/8 over Z/2 x Z/2 by Z/4, psi(2u, v) = uv and psi(u, 2v) = 3uv.

    The Weil pairing of the two generators at l = 2 is 2 in Z/4.
    """
    A, Z2, N = FgAbGroup.cyclic(8), FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)
    phi = Hom(A, Z2, IntMatrix.from_rows([[1]]))
    T = fg_bisubgroup(A, A, phi, phi)

    def psi(a, b):
        (x,), (y,) = a, b
        if x % 2 == 0:
            return N.reduce([(x // 2) * y])
        return N.reduce([3 * x * (y // 2)])
    return build_quotient_biextension(T, Trivialization(GroupOps.from_fg(N, "Z/4"), psi), label="P_8")


def product_biextension():
    """(Z/2 x Z/4) x Z/4 over Z/2 x Z/2 by Z/2.

    A-elements are (s, t) with s mod 2, t mod 4 and class t mod 2;
    psi((s, 2u), b) = (u + s) b and psi(a, 2v) = 0.
    """
    A, B = FgAbGroup.from_invariants([2, 4]), FgAbGroup.cyclic(4)
    Z2 = FgAbGroup.cyclic(2)
    T = fg_bisubgroup(A, B, Hom(A, Z2, IntMatrix.from_rows([[0, 1]])), Hom(B, Z2, IntMatrix.from_rows([[1]])))

    def psi(a, b):
        (s, t), (y,) = a, b
        if t % 2 == 0:
            return Z2.reduce([(t // 2 + s) * y])
        return Z2.zero()
    return build_quotient_biextension(T, Trivialization(GroupOps.from_fg(Z2, "Z/2"), psi), label="P_2x4")


def _fg_kernel(T, which: str) -> list:
    ops, in_ker = (T.A, T.in_ker_A) if which == "A" else (T.B, T.in_ker_B)
    return [x for x in ops.elements() if in_ker(x)]


def finite_instances() -> list[AxiomInstance]:
    p8 = cyclic8_biextension()
    N4 = FgAbGroup.cyclic(4)
    pp = product_biextension()
    Z2 = FgAbGroup.cyclic(2)
    return [
        AxiomInstance("Z/8 x Z/8 by Z/4", p8, lambda r: (r.randrange(4),),
                      twist=lambda a, b: N4.reduce([a[0] * b[0]]),
                      kernel_A=_fg_kernel(p8.T, "A"), kernel_B=_fg_kernel(p8.T, "B")),
        AxiomInstance("(Z/2 x Z/4) x Z/4 by Z/2", pp, lambda r: (r.randrange(2),),
                      restriction=Restriction(lambda a, b: a[0] == 0),
                      twist=lambda a, b: Z2.reduce([a[0] * b[0]]),
                      kernel_A=_fg_kernel(pp.T, "A"), kernel_B=_fg_kernel(pp.T, "B")),
    ]


def chain_instance(samples: int = 200) -> AxiomInstance:
    """The Z/4 chain-pairing toy, sampled over a box of integer cocycles."""
    cp = toy_chain_pairing()
    P = biextension_from_chain_pairing(cp, samples=samples)
    N = cp.N
    coboundaries = [(2 * k,) for k in range(-3, 4)]
    return AxiomInstance("chain-pairing toy", P, lambda r: (r.randrange(4),),
                         twist=lambda a, b: N.reduce([a[0] * b[0]]),
                         kernel_A=coboundaries, kernel_B=coboundaries)


# -- curves -------------------------------------------------------------------------

E_F61 = (61, 3, 5)


def curve_instance(p: int = 61, a: int = 3, b: int = 5, seed: int = 0) -> AxiomInstance:
    F = FiniteField(p)
    E = EllipticCurve(F, F(a), F(b))
    P = pe_biextension(E, seed=seed, audit_samples=100)
    R0, R1 = E.random_point(random.Random(seed)), E.random_point(random.Random(seed + 1))
    u = F(2)
    units = field_units(F)
    return AxiomInstance(
        f"P_E on {E}", P, units.sample,
        restriction=Restriction(lambda Z, W: Z.mult(R0) == 0),
        twist=lambda Z, W: u ** (Z.mult(R0) * W.mult(R1)))


# -- tori ------------------------------------------------------------------------

def hodge_examples(seed: int = 0) -> list[tuple[str, HodgeStructure]]:
    rng = random.Random(seed)
    return [("square lattice", square_lattice()),
            ("random g=1", random_siegel(1, rng)),
            ("random g=2", random_siegel(2, rng)),
            ("generic g=2", random_hodge(2, rng))]


def torus_instance(name: str, h: HodgeStructure, seed: int = 0) -> AxiomInstance:
    P = poincare_biextension(h, samples=200, seed=seed)
    rng = random.Random(seed)
    M = np.array([[rng.uniform(-0.3, 0.3) for _ in range(h.n)] for _ in range(h.n)])

    def real_pair(r: random.Random):
        return (np.array([r.uniform(-1, 1) for _ in range(h.n)], dtype=complex), P.T.B.sample(r))

    def lattice_shift(x, _y, r: random.Random):
        return x + np.array([r.randint(-2, 2) for _ in range(h.n)], dtype=complex)

    return AxiomInstance(
        f"Poincare biextension, {name}", P, complex_units(h.tol).sample,
        restriction=Restriction(lambda x, y: bool(np.max(np.abs(x.imag)) <= h.tol.eps), real_pair,
                                lattice_shift),
        twist=lambda x, y: complex(np.exp(0.1j * (x @ M @ y))))
