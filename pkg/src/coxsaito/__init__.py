"""coxsaito: exact verification of derivation-module identities for Coxeter arrangements."""

from .coxeter import (BasicInvariants, CoxeterDatum, anti_invariant_Q,
                      build_datum, builtin_invariants, poincare_closed_form,
                      poincare_equal, validate_invariants)
from .field import RATIONALS, FieldContext, Scalar, scalar_arith
from .fraction import FactoredFraction, fraction_simplify
from .invariants_io import DkxStore, ingest_invariants
from .matrix import Matrix, matrix_adjugate_inverse, matrix_det, matrix_mul
from .poly import (MultiPoly, exact_divide, lowest_power_in_form, poly_arith,
                   poly_partial, poly_subst_linear)
from .saito import (PolyDerivation, SaitoContext, bk_matrix, build_context,
                    christoffel_star, derivation_bracket, dkx, frame_convert,
                    hk_product, nabla_D, primitive_derivation_apply, xi_basis)
from .verify import (CheckReport, CheckResult, check_flat_remark, check_hodge,
                     check_lemma21, check_lemma22, check_metric,
                     check_thm24_thm25_prop26, contact_order_check, run_suites)

__all__ = [
    "RATIONALS", "FieldContext", "Scalar", "scalar_arith",
    "FactoredFraction", "fraction_simplify",
    "Matrix", "matrix_adjugate_inverse", "matrix_det", "matrix_mul",
    "MultiPoly", "exact_divide", "lowest_power_in_form", "poly_arith",
    "poly_partial", "poly_subst_linear",
    "BasicInvariants", "CoxeterDatum", "anti_invariant_Q", "build_datum",
    "builtin_invariants", "poincare_closed_form", "poincare_equal",
    "validate_invariants",
    "DkxStore", "ingest_invariants",
    "PolyDerivation", "SaitoContext", "bk_matrix", "build_context",
    "christoffel_star", "derivation_bracket", "dkx", "frame_convert",
    "hk_product", "nabla_D", "primitive_derivation_apply", "xi_basis",
    "CheckReport", "CheckResult", "check_flat_remark", "check_hodge",
    "check_lemma21", "check_lemma22", "check_metric",
    "check_thm24_thm25_prop26", "contact_order_check", "run_suites",
]
