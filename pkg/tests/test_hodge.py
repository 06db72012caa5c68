import cmath
import itertools
import math
import random

import numpy as np
import pytest

from biext.axioms import check_axioms
from biext.hodge import (HodgeInvariantError, HodgeStructure, Tolerance, abel_jacobi_elliptic, analytic_weil,
                         dual_hs, elliptic_hodge, height_trivialization, random_hodge, random_siegel,
                         square_lattice, standard_symplectic, symplectic_weil)
from biext.instances import hodge_examples, torus_instance

EXAMPLES = hodge_examples(seed=7)


@pytest.mark.parametrize("name,h", EXAMPLES, ids=[n for n, _ in EXAMPLES])
def test_invariants_hold(name, h):
    assert all(r.ok for r in h.invariants())


def test_lattice_vector_in_f0_is_rejected():
    with pytest.raises(HodgeInvariantError) as info:
        HodgeStructure([[1, 1]], standard_symplectic(1))
    assert info.value.invariant == "F0 complementary to its conjugate"


def test_non_unimodular_q_is_rejected():
    with pytest.raises(HodgeInvariantError) as info:
        HodgeStructure([[1, 1j]], 2 * standard_symplectic(1))
    assert info.value.invariant == "unimodular Q"


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        Tolerance(0.0)


@pytest.mark.parametrize("name,h", EXAMPLES, ids=[n for n, _ in EXAMPLES])
def test_decomposition_reconstructs_the_vector(name, h):
    rng = np.random.default_rng(0)
    for _ in range(20):
        phi = rng.normal(size=h.n) + 1j * rng.normal(size=h.n)
        r, c = h.decompose(phi)
        assert np.allclose(r.imag if np.iscomplexobj(r) else 0, 0)
        assert np.max(np.abs(r + h.f0_vector(c) - phi)) < 1e-10


@pytest.mark.parametrize("name,h", EXAMPLES, ids=[n for n, _ in EXAMPLES])
def test_analytic_weil_matches_symplectic_formula(name, h):
    dual = dual_hs(h)
    for l in (2, 3):
        for x in itertools.product(range(l), repeat=h.n):
            y = tuple(reversed(x))
            v = analytic_weil(h, np.array(x, dtype=complex) / l, np.array(y, dtype=complex) / l, l, dual)
            assert abs(v - symplectic_weil(h, x, y, l)) < 1e-9


def test_weil_is_independent_of_lattice_shifts():
    h = square_lattice()
    e, f = np.array([0.5, 0]), np.array([0, 0.5])
    base = analytic_weil(h, e, f, 2)
    assert abs(base + 1) < 1e-12
    assert abs(analytic_weil(h, e + np.array([3, -1]), f + np.array([-2, 5]), 2) - base) < 1e-12


def test_weil_rejects_non_torsion_input():
    with pytest.raises(ValueError):
        analytic_weil(square_lattice(), [0.3, 0], [0, 0.5], 2)


def test_height_of_the_square_lattice():
    h = square_lattice()
    assert math.isclose(height_trivialization(h, [1, 0], [0, 1j]), -2 * math.pi, rel_tol=1e-12)
    assert height_trivialization(h, [1, 0], [0, 1]) == 0.0


def test_jacobian_points_modulo_lattice():
    h = random_siegel(2, random.Random(3))
    p = h.point(np.array([0.25, 0.5, -0.75, 1.0], dtype=complex))
    q = h.point(p.vector + np.array([1, -2, 3, 0]) + h.f0_vector([0.3 + 0.1j, -0.2j]))
    assert p.equals(q) and p.distance(q) < 1e-9
    assert h.point(np.array([1, 0, 2, -1], dtype=complex)).is_zero()


def test_abel_jacobi_of_lattice_point_is_zero():
    assert abel_jacobi_elliptic((1, 1j), {1 + 1j: 1, 0: -1}).is_zero()
    assert not abel_jacobi_elliptic((1, 1j), {0.5: 1, 0: -1}).is_zero()
    with pytest.raises(ValueError):
        abel_jacobi_elliptic((1, 1j), {0.5: 1})


def test_elliptic_hodge_from_periods():
    tau = cmath.exp(2j * math.pi / 3)
    assert all(r.ok for r in elliptic_hodge(1, tau).invariants())


@pytest.mark.parametrize("name,h", EXAMPLES[:2] + [("generic g=2", random_hodge(2, random.Random(9)))],
                         ids=["square", "random g=1", "generic g=2"])
def test_poincare_biextension_laws(name, h):
    report = check_axioms(torus_instance(name, h, seed=2), samples=40, seed=2)
    assert report.total >= 5 * 40
