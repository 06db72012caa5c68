"""Biextensions of finitely generated abelian groups, curves and complex tori, and the Weil pairings they carry."""

from .abelian import FgAbGroup, Hom, IntMatrix, smith_normal_form
from .biextension import Biextension, BiextensionError, Bisubgroup, GroupOps, Trivialization, audit
from .chainpairing import ChainPairing, biextension_from_chain_pairing, massey_weil
from .complexes import BoundedComplex, homology
from .curves import INF, Divisor, EllipticCurve, ProjectiveLine
from .fields import FieldElement, FiniteField
from .functions import FunctionProgram, function_with_divisor, tame_symbol, weil_reciprocity_check
from .hodge import (HodgeStructure, JacobianPoint, Tolerance, abel_jacobi_elliptic, analytic_weil,
                    dual_hs, height_trivialization, poincare_biextension, poincare_psi)
from .pairing import pe_biextension, weil_pairing_oracle, weil_pairing_points

__all__ = [
    "FgAbGroup", "Hom", "IntMatrix", "smith_normal_form",
    "Biextension", "BiextensionError", "Bisubgroup", "GroupOps", "Trivialization", "audit",
    "ChainPairing", "biextension_from_chain_pairing", "massey_weil",
    "BoundedComplex", "homology",
    "INF", "Divisor", "EllipticCurve", "ProjectiveLine",
    "FieldElement", "FiniteField",
    "FunctionProgram", "function_with_divisor", "tame_symbol", "weil_reciprocity_check",
    "HodgeStructure", "JacobianPoint", "Tolerance", "abel_jacobi_elliptic", "analytic_weil",
    "dual_hs", "height_trivialization", "poincare_biextension", "poincare_psi",
    "pe_biextension", "weil_pairing_oracle", "weil_pairing_points",
]
