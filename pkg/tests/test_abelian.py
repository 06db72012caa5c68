import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import invariant_factors

from biext.abelian import (FgAbGroup, Hom, IntMatrix, group_from_relations, kernel, l_torsion, smith_normal_form,
                           snf_diagonal, solve_integer, tensor)


def _mul(a: IntMatrix, b: IntMatrix) -> list[list[int]]:
    return (sympy.Matrix(a.to_rows()) * sympy.Matrix(b.to_rows())).tolist()


matrices = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-12, 12), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_is_a_factorization_with_divisibility_chain(rows):
    m = IntMatrix.from_rows(rows)
    U, S, V = smith_normal_form(m)
    assert _mul(IntMatrix.from_rows(_mul(U, m)), V) == S.to_rows()
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    d = snf_diagonal(S)
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    for i in range(S.rows):
        for j in range(S.cols):
            if i != j:
                assert S.to_rows()[i][j] == 0


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_snf_matches_sympy_invariant_factors(rows):
    ours = [x for x in snf_diagonal(smith_normal_form(IntMatrix.from_rows(rows))[1]) if x]
    theirs = [abs(int(x)) for x in invariant_factors(sympy.Matrix(rows), domain=sympy.ZZ) if x]
    assert ours == theirs


def test_group_from_relations_normal_form():
    g = group_from_relations([[2, 0], [0, 3]], 2)
    assert g.order == 6 and g.moduli == (6,)
    free = group_from_relations([[2, 4]], 2)
    assert free.order is None and free.moduli == (2, 0)


def test_group_arithmetic_and_orders():
    g = FgAbGroup.from_invariants([2, 4], rank=1)
    x = (1, 3, 5)
    assert g.is_zero(g.add(x, g.neg(x)))
    assert g.element_order((1, 2, 0)) == 2
    assert g.element_order((0, 1, 0)) == 4
    assert g.element_order((0, 0, 1)) is None
    assert len(list(FgAbGroup.from_invariants([2, 4]).elements())) == 8


def test_generator_coordinates_round_trip():
    g = group_from_relations([[4, 2], [0, 6]], 2)
    for x in g.elements():
        assert g.reduce(g.from_generators(g.to_generators(x))) == g.reduce(x)


def test_kernel_torsion_and_tensor():
    A, B = FgAbGroup.cyclic(8), FgAbGroup.cyclic(4)
    K, inc = kernel(Hom(A, B, IntMatrix.from_rows([[1]])))
    assert K.order == 2
    T, _ = l_torsion(FgAbGroup.from_invariants([2, 12]), 2)
    assert T.order == 4
    assert tensor(FgAbGroup.cyclic(4), FgAbGroup.cyclic(6)).order == 2


def test_solve_integer():
    m = IntMatrix.from_rows([[2, 4], [6, 8]])
    x = solve_integer(m, [2, 6])
    assert m.apply(x) == (2, 6)
    assert solve_integer(IntMatrix.from_rows([[2]]), [1]) is None


def test_json_round_trip():
    m = IntMatrix.from_rows([[1, -2], [3, 4]])
    assert IntMatrix.from_json(m.to_json()).to_rows() == m.to_rows()


def test_rejects_ragged_rows():
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_invariants_must_form_a_chain():
    with pytest.raises(ValueError):
        FgAbGroup.from_invariants([4, 6])
