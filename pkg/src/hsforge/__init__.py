"""Exact computations with multi-variate Hasse-Schmidt derivations on finite algebras."""

from .algebra import FiniteAlgebra, LinOp, is_k_derivation, make_monomial_quotient, mult_operator, op_bracket
from .coideal import CoIdeal, box_coideal, total_degree_coideal, uni_coideal
from .decompose import (Decomposition, boxtimes_decompose, decompose, peel_ray, recompose,
                        tower_decompose)
from .diffop import OrderReport, lemma44_defect, order_leq
from .fields import FieldSpec
from .hs import HSDeriv, generate_hs, hs_compose, hs_inverse, leibniz_check
from .integrability import (IntegralCertificate, bracket_integral, derivation_basis, extend_one_step,
                            is_m_integrable, p_power_integral, ray_corollary_check)
from .rays import Cmp, multiplicity, ray_compare, sorted_rays

__all__ = [
    "FiniteAlgebra", "LinOp", "is_k_derivation", "make_monomial_quotient", "mult_operator", "op_bracket",
    "CoIdeal", "box_coideal", "total_degree_coideal", "uni_coideal",
    "Decomposition", "boxtimes_decompose", "decompose", "peel_ray", "recompose", "tower_decompose",
    "OrderReport", "lemma44_defect", "order_leq", "FieldSpec",
    "HSDeriv", "generate_hs", "hs_compose", "hs_inverse", "leibniz_check",
    "IntegralCertificate", "bracket_integral", "derivation_basis", "extend_one_step",
    "is_m_integrable", "p_power_integral", "ray_corollary_check",
    "Cmp", "multiplicity", "ray_compare", "sorted_rays",
]
