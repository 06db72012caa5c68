import pytest

from biext.abelian import FgAbGroup, Hom, IntMatrix
from biext.axioms import check_axioms
from biext.biextension import (AuditError, BiextensionError, GroupOps, Trivialization, audit,
                               build_quotient_biextension, fg_bisubgroup)
from biext.instances import chain_instance, cyclic8_biextension, finite_instances, product_biextension


def test_cyclic8_weil_pairing():
    P = cyclic8_biextension()
    assert P.weil_pairing((1,), (1,), 2) == (2,)
    assert P.weil_pairing((2,), (1,), 2) == (0,)


def test_product_weil_pairing_depends_only_on_classes():
    P = product_biextension()
    assert P.weil_pairing((0, 1), (1,), 2) == (1,)
    assert P.weil_pairing((1, 1), (1,), 2) == (1,)
    assert P.weil_pairing((0, 1), (3,), 2) == (1,)


def test_weil_pairing_preconditions():
    P = cyclic8_biextension()
    with pytest.raises(BiextensionError):
        P.weil_pairing((1,), (1,), 0)
    with pytest.raises(BiextensionError):
        P.weil_pairing((1,), (1,), 1)


@pytest.mark.parametrize("inst", finite_instances(), ids=lambda i: i.name)
def test_finite_instances_satisfy_every_law_exhaustively(inst):
    report = check_axioms(inst, seed=3)
    assert report.exhaustive
    assert set(report.counts) >= {"interchange", "unit", "group laws", "transport", "twist"}


def test_chain_instance_laws():
    report = check_axioms(chain_instance(), samples=60, seed=1)
    assert not report.exhaustive and report.total >= 240


def test_audit_rejects_non_additive_psi():
    A, Z2, N = FgAbGroup.cyclic(8), FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)
    phi = Hom(A, Z2, IntMatrix.from_rows([[1]]))
    T = fg_bisubgroup(A, A, phi, phi)
    bad = Trivialization(GroupOps.from_fg(N), lambda a, b: N.reduce([(a[0] // 2) ** 2 * b[0]]))
    with pytest.raises(AuditError):
        build_quotient_biextension(T, bad)
    assert audit(T)["exhaustive"]


def test_transport_is_path_independent_on_cyclic8():
    P = cyclic8_biextension()
    x = P.point((1,), (3,), (1,))
    direct = P.transport(x, (5,), (7,))
    via = P.transport_along(x, [((1,), (7,)), ((5,), (7,))])
    assert P.N.eq(direct.n, via.n)
    assert P.N.eq(P.transport(direct, (1,), (3,)).n, x.n)
