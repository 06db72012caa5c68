import itertools
import random

import pytest

from biext.curves import INF, Divisor, EllipticCurve, ProjectiveLine
from biext.fields import FiniteField
from biext.functions import (FunctionProgram, NotPrincipalError, SupportError, function_with_divisor,
                             random_function, tame_reciprocity, tame_symbol, weil_reciprocity_check)
from biext.pairing import (check_torsion, move_divisor, pe_biextension, weil_pairing_oracle,
                           weil_pairing_points)

F7 = FiniteField(7)
E7 = EllipticCurve(F7, F7(-1), F7(0))


def test_reciprocity_on_the_projective_line():
    L = ProjectiveLine(F7)
    f = FunctionProgram.make(L, 1, [(FunctionProgram.linear(L, 0).factors[0][0], 1),
                                    (FunctionProgram.linear(L, 2).factors[0][0], -1)])
    g = FunctionProgram.make(L, 1, [(FunctionProgram.linear(L, 1).factors[0][0], 1),
                                    (FunctionProgram.linear(L, 3).factors[0][0], -1)])
    lhs, rhs, equal = weil_reciprocity_check(f, g)
    assert equal and lhs == F7(2) == rhs


def test_function_with_divisor_has_that_divisor():
    F = FiniteField(61)
    E = EllipticCurve(F, F(3), F(5))
    rng = random.Random(4)
    for _ in range(20):
        P, Q = E.random_point(rng), E.random_point(rng)
        d = Divisor([(P, 2), (Q, -1), (E.add(E.mul(2, P), E.neg(Q)), -1)])
        assert function_with_divisor(E, d).divisor() == d


def test_function_with_divisor_rejects_non_principal():
    P = (F7(0), F7(0))
    with pytest.raises((NotPrincipalError, ValueError)):
        function_with_divisor(E7, Divisor([(P, 1), (INF, -1)]))


def test_evaluation_in_the_support_raises():
    L = ProjectiveLine(F7)
    f = FunctionProgram.linear(L, 3)
    with pytest.raises(SupportError):
        f(F7(3))


@pytest.mark.parametrize("curve", [ProjectiveLine(F7), E7,
                                   EllipticCurve(FiniteField(7, 2), FiniteField(7, 2)(1), FiniteField(7, 2)(3))],
                         ids=["P1/F7", "E/F7", "E/F49"])
def test_random_reciprocity(curve):
    rng = random.Random(5)
    for _ in range(25):
        f = random_function(curve, rng)
        g = random_function(curve, rng, avoid=f.divisor())
        assert weil_reciprocity_check(f, g)[2]
        assert tame_reciprocity(f, g)[0] == curve.F.one


def test_tame_symbol_of_x_with_itself_at_zero():
    L = ProjectiveLine(F7)
    x = FunctionProgram.linear(L, 0)
    assert tame_symbol(x, x, F7(0)) == F7(-1)


def test_forced_weil_value():
    P, Q = (F7(0), F7(0)), (F7(1), F7(0))
    assert weil_pairing_points(E7, P, Q, 2) == F7(6)
    assert weil_pairing_oracle(E7, P, Q, 2) == F7(6)


def test_pairing_agrees_with_oracle_on_all_of_e3():
    E = EllipticCurve(F7, F7(0), F7(2))
    biext = pe_biextension(E)
    pts = E.torsion(3)
    for P, Q in itertools.product(pts, pts):
        assert weil_pairing_points(E, P, Q, 3, biext=biext) == weil_pairing_oracle(E, P, Q, 3)


def test_pairing_is_alternating_and_bilinear():
    E = EllipticCurve(F7, F7(0), F7(2))
    biext = pe_biextension(E)
    pts = E.torsion(3)
    rng = random.Random(6)
    for _ in range(10):
        P, Q, R = rng.choice(pts), rng.choice(pts), rng.choice(pts)
        assert weil_pairing_points(E, P, P, 3, biext=biext) == F7(1)
        assert weil_pairing_points(E, E.add(P, R), Q, 3, biext=biext) == \
            weil_pairing_points(E, P, Q, 3, biext=biext) * weil_pairing_points(E, R, Q, 3, biext=biext)


def test_torsion_precondition():
    with pytest.raises(ValueError):
        check_torsion(E7, (F7(0), F7(0)), (F7(1), F7(0)), 3)


def test_move_divisor_avoids_support():
    P = (F7(0), F7(0))
    d = Divisor([(P, 1), (INF, -1)])
    moved = move_divisor(E7, d, [d], seed=1)
    assert moved.disjoint(d)
