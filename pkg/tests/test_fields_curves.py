import random

import pytest

from biext.curves import INF, Divisor, EllipticCurve, ProjectiveLine, divisor_sum, is_principal, translate
from biext.fields import FiniteField, find_irreducible, is_irreducible, poly_mul, poly_mod


def test_prime_field_arithmetic():
    F = FiniteField(7)
    assert F(3) * F(5) == F(1)
    assert F(3).inverse() == F(5)
    assert F(2) ** 3 == F(1)
    assert F(3).multiplicative_order() == 6


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (7, 2), (5, 3)])
def test_extension_field_is_a_field(p, k):
    F = FiniteField(p, k)
    assert is_irreducible(F.modulus, p)
    elems = list(F.elements())
    assert len(elems) == p ** k
    for x in elems:
        if x:
            assert x * x.inverse() == F.one
            assert x ** (F.q - 1) == F.one


def test_log_table_multiplication_matches_polynomials():
    F = FiniteField(7, 2)
    rng = random.Random(0)
    for _ in range(300):
        x, y = F.random(rng), F.random(rng)
        assert x * y == F(poly_mod(poly_mul(list(x.c), list(y.c), 7), list(F.modulus), 7))


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FiniteField(7, 2, (-1, 0, 1))  # x^2 - 1 splits
    assert FiniteField(7, 2, (1, 0, 1)).q == 49  # -1 is not a square mod 7
    assert len(find_irreducible(3, 3)) == 4


def test_elliptic_group_law():
    F = FiniteField(61)
    E = EllipticCurve(F, F(3), F(5))
    rng = random.Random(1)
    for _ in range(50):
        P, Q, R = (E.random_point(rng) for _ in range(3))
        assert E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R))
        assert E.add(P, Q) == E.add(Q, P)
        assert E.add(P, E.neg(P)) is INF
    n = E.order
    assert all(E.mul(n, P) is INF for P in list(E.points())[:20])


def test_singular_curve_rejected():
    F = FiniteField(7)
    with pytest.raises(ValueError):
        EllipticCurve(F, F(0), F(0))


def test_torsion_counts():
    F = FiniteField(7)
    E = EllipticCurve(F, F(-1), F(0))
    assert len(E.torsion(2)) == 4 and E.has_full_torsion(2)
    E3 = EllipticCurve(F, F(0), F(2))
    assert len(E3.torsion(3)) == 9


def test_principality_on_elliptic_and_projective_line():
    F = FiniteField(61)
    E = EllipticCurve(F, F(3), F(5))
    rng = random.Random(2)
    P, Q = E.random_point(rng), E.random_point(rng)
    d = Divisor([(P, 1), (Q, 1), (E.add(P, Q), -1), (INF, -1)])
    assert d.degree == 0 and divisor_sum(E, d) is INF and is_principal(E, d)
    assert not is_principal(E, Divisor([(P, 1), (INF, -1)])) or P is INF
    shifted = translate(E, d, P)
    assert shifted.degree == 0 and is_principal(E, shifted)
    L = ProjectiveLine(F)
    assert is_principal(L, Divisor([(F(1), 1), (INF, -1)]))
    assert not is_principal(L, Divisor([(F(1), 1)]))
