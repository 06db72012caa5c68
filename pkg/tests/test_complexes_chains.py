import pytest

from biext.abelian import FgAbGroup
from biext.biextension import BiextensionError
from biext.chainpairing import (ChainConditionError, ChainPairing, biextension_from_chain_pairing, massey_weil,
                                toy_chain_pairing)
from biext.complexes import BoundedComplex, boundary_preimage, homology


def test_homology_of_multiplication_by_two():
    c = BoundedComplex.build(0, [1, 1], [[[2]]])
    assert homology(c, 0).group.order == 1
    h1 = homology(c, 1)
    assert h1.group.moduli == (2,)
    assert h1.group.is_zero(h1.class_of((2,)))
    assert not h1.group.is_zero(h1.class_of((1,)))
    assert h1.class_of(h1.lift(h1.class_of((3,)))) == h1.class_of((3,))


def test_homology_of_a_free_complex():
    c = BoundedComplex.build(0, [2, 1], [[[1, -1]]])
    h0 = homology(c, 0)
    assert h0.group.moduli == (0,)
    with pytest.raises(ValueError):
        h0.class_of((1, 0))


def test_differentials_compose_to_zero():
    with pytest.raises(ValueError):
        BoundedComplex.build(0, [1, 1, 1], [[[1]], [[1]]])


def test_boundary_preimage():
    c = BoundedComplex.build(0, [1, 1], [[[2]]])
    assert boundary_preimage(c, 1, (6,)) == (3,)
    assert boundary_preimage(c, 1, (3,)) is None


def test_toy_weil_pairing_and_massey_agree():
    cp = toy_chain_pairing()
    P = biextension_from_chain_pairing(cp)
    assert P.weil_pairing((1,), (1,), 2) == (2,)
    assert massey_weil(cp, (1,), (1,), 2, (1,), (1,)) == (2,)


def test_massey_rejects_bad_bounding_chain():
    with pytest.raises(BiextensionError):
        massey_weil(toy_chain_pairing(), (1,), (1,), 2, (2,), (1,))


def test_chain_condition_is_enforced():
    # 2 (phi0 + phi1) must vanish in Z/4; phi0 = 1, phi1 = 0 breaks it
    with pytest.raises(ChainConditionError):
        toy_chain_pairing(phi0=1, phi1=0)


def test_weil_pairing_over_the_integers_uses_sign_flip():
    cp = toy_chain_pairing(modulus=0, phi0=1, phi1=-1)
    assert isinstance(cp, ChainPairing) and cp.N == FgAbGroup.free(1)
    P = biextension_from_chain_pairing(cp)
    w = P.weil_pairing((1,), (1,), 2)
    assert massey_weil(cp, (1,), (1,), 2, (1,), (1,)) == w
