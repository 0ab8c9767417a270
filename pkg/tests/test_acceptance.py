"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  The D4 battery is feature-gated by COXSAITO_RUN_D4=1 because its
exact rank-4 arithmetic takes far longer than the rest combined.
"""

import math
import os
import time
from fractions import Fraction

import pytest
from conftest import fresh_context, report_elapsed, shared_context, shared_report
from test_properties import (run_adjugate_inverse, run_exact_divide_roundtrip,
                             run_field_axioms, run_lowest_power_rescaling,
                             run_substitution_roundtrip)

from coxsaito.coxeter import (build_datum, builtin_invariants,
                              poincare_closed_form, poincare_equal,
                              validate_invariants)
from coxsaito.fraction import FactoredFraction
from coxsaito.matrix import Matrix
from coxsaito.poly import MultiPoly
from coxsaito.saito import (PolyDerivation, bk_matrix, build_context,
                            d_apply_matrix, derivation_degree, dkx,
                            primitive_derivation_apply, xi_basis)
from coxsaito.verify import (check_lemma21, check_metric,
                             check_thm24_thm25_prop26)

GROUPS = [("A", 2), ("A", 3), ("B", 2), ("B", 3),
          ("I2", 4), ("I2", 5), ("I2", 6)]
RANK_TWO = [("A", 2), ("B", 2), ("I2", 4), ("I2", 5), ("I2", 6)]
RUN_D4 = os.environ.get("COXSAITO_RUN_D4") == "1"
if RUN_D4:
    GROUPS.append(("D", 4))


def _announce(criterion: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] criterion {criterion}: {status} {detail}".rstrip())
    assert ok, f"criterion {criterion} failed: {detail}"


def test_criterion_1_rank_one_golden_values():
    t0 = time.perf_counter()
    datum = build_datum("A", 1)
    ctx = build_context(datum, builtin_invariants(datum))
    x = MultiPoly.variable(1, 0)

    assert dkx(1, ctx)[0] == FactoredFraction(MultiPoly.const(1, 1), ((x, 1),), 2)
    assert dkx(2, ctx)[0] == FactoredFraction(MultiPoly.const(1, -1), ((x, 3),), 4)
    for k, val in ((1, 2), (2, 6), (3, 10)):
        assert bk_matrix(k, ctx) == Matrix([[MultiPoly.const(1, val)]])
    golden_xi = {0: MultiPoly.const(1, 1), 1: 2 * x, 2: -2 * x * x, 3: -4 * x ** 3}
    for m, val in golden_xi.items():
        assert xi_basis(m, ctx)[0].coeffs[0].as_poly() == val

    quarter = validate_invariants(datum, [x * x * Fraction(1, 4)], source="custom")
    ctx_q = build_context(datum, quarter)
    for k in (1, 2, 3):
        assert bk_matrix(k, ctx_q) == Matrix(
            [[MultiPoly.const(1, Fraction(2 * k - 1, 2))]])
    dg = d_apply_matrix(ctx_q.metric_G, ctx_q)
    assert dg[0, 0].as_poly() == MultiPoly.const(1, 1)

    elapsed = time.perf_counter() - t0
    _announce("1", elapsed < 1.0,
              f"(rank-1 golden values exact, {elapsed:.3f}s < 1s)")


@pytest.mark.parametrize("label,rank", GROUPS)
def test_criterion_2_full_suites(label, rank):
    report = shared_report(label, rank)
    fails = [(r.name, r.witness) for r in report.results if r.status == "fail"]
    _announce(f"2[{report.group}]", not fails, f"{report.counts} {fails}")


def test_criterion_2_runtime_budget():
    for label, rank in RANK_TWO:
        elapsed = report_elapsed(label, rank)
        _announce(f"2-runtime[{label}{rank}]", elapsed < 5.0,
                  f"({elapsed:.2f}s < 5s)")
    # the budget covers the always-on set; the D4 battery is gated precisely
    # because its exact rank-4 arithmetic costs minutes on its own
    mandatory = [g for g in GROUPS if g != ("D", 4)]
    total = sum(report_elapsed(label, rank) for label, rank in mandatory)
    _announce("2-runtime[total]", total < 300.0, f"({total:.1f}s < 300s)")
    if RUN_D4:
        _announce("2-runtime[D4]", True,
                  f"({report_elapsed('D', 4):.1f}s, gated battery)")


@pytest.mark.parametrize("label,rank", GROUPS)
def test_criterion_3_degree_law(label, rank):
    ctx = shared_context(label, rank)
    h = ctx.datum.coxeter_number
    exps = ctx.datum.exponents
    for m in range(0, 8):
        k = m // 2
        for j, theta in enumerate(xi_basis(m, ctx)):
            want = k * h if m % 2 == 0 else k * h + exps[j]
            got = derivation_degree(theta, ctx)
            assert got == want, (label, rank, m, j, got, want)
    _announce(f"3[{ctx.datum.label()}]", True, "(degrees kh / kh+m_j, m <= 7)")


def test_criterion_4_b2_vanishing_corner():
    ctx = shared_context("B", 2)
    for k in (1, 2, 3):
        bk = bk_matrix(k, ctx)
        assert bk[0, 0].is_zero(), k
        det = bk.det().constant_value()
        assert det is not None and det != 0, k
    _announce("4", True, "(B2 corner entries vanish, determinants constant)")


@pytest.mark.parametrize("label,rank", GROUPS)
def test_criterion_5_saito_flatness(label, rank):
    report = shared_report(label, rank)
    by_name = {r.name: r for r in report.results}
    ok = (by_name["flat.detDG"].status == "pass"
          and by_name["flat.D2G"].status == "pass")
    _announce(f"5[{report.group}]", ok, "(det D[G] constant, D^2[G] = 0)")


@pytest.mark.parametrize("label,rank", GROUPS)
def test_criterion_6_poincare_identity(label, rank):
    ctx = shared_context(label, rank)
    h = ctx.datum.coxeter_number
    exps = ctx.datum.exponents
    for p in (1, 2, 3):
        gens = [(p - 1) * h + m for m in exps]
        lhs = poincare_closed_form(gens, [m + 1 for m in exps[:-1]] + [h])
        rhs = poincare_closed_form(gens, [m + 1 for m in exps])
        assert poincare_equal(lhs, rhs), (label, rank, p)
    report = shared_report(label, rank)
    hodge_poincare = [r for r in report.results
                      if r.name.startswith("hodge.poincare")]
    assert hodge_poincare and all(r.status == "pass" for r in hodge_poincare)
    _announce(f"6[{ctx.datum.label()}]", True, "(cross-multiplied, p <= 3)")


def test_criterion_7_mutation_b2_matrix():
    ctx = fresh_context("B", 2)
    bk_matrix(2, ctx)
    one = MultiPoly.const(2, 1)
    ctx.bk_table[2] = ctx.bk_table[2].with_entry(0, 0, ctx.bk_table[2][0, 0] + one)
    results = check_lemma21(ctx, 2)
    fails = [r for r in results if r.status == "fail"]
    located = [r for r in fails if r.witness and "(1,1)" in r.witness]
    _announce("7[B^(2)]", bool(located),
              f"({[r.name for r in fails]} locate the tampered entry)")


def test_criterion_7_mutation_metric():
    ctx = fresh_context("B", 2)
    one = MultiPoly.const(2, 1)
    ctx.metric_G = ctx.metric_G.with_entry(1, 0, ctx.metric_G[1, 0] + one)
    results = check_metric(ctx)
    fails = [r for r in results if r.status == "fail"]
    located = [r for r in fails if r.witness and "(2,1)" in r.witness
               or r.witness and "(1,2)" in r.witness]
    _announce("7[G]", bool(located),
              f"({[r.name for r in fails]} locate the tampered entry)")


def test_criterion_7_mutation_xi3():
    ctx = fresh_context("B", 2)
    xis = xi_basis(3, ctx)
    tampered = PolyDerivation(
        "X", [xis[0].coeffs[0] + MultiPoly.const(2, 1), xis[0].coeffs[1]])
    ctx.xi_table[3] = [tampered, xis[1]]
    results = check_thm24_thm25_prop26(ctx, 1, 3)
    fails = [r for r in results if r.status == "fail"]
    located = [r for r in fails
               if r.witness and ("xi^(3)_1" in r.witness or "(1,1)" in r.witness)]
    _announce("7[xi^(3)]", bool(located),
              f"({[r.name for r in fails]} locate the tampered coefficient)")


def test_criterion_8_property_suites():
    counts = {
        "field axioms": run_field_axioms(),
        "exact_divide roundtrip": run_exact_divide_roundtrip(),
        "adjugate inverse": run_adjugate_inverse(),
        "substitution roundtrip": run_substitution_roundtrip(),
        "lowest power rescaling": run_lowest_power_rescaling(),
    }
    ok = all(v >= 1000 for v in counts.values())
    _announce("8", ok, f"({counts} randomized instances, fixed seeds)")
