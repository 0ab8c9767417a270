"""Randomized kernel properties at >= 1000 instances each, fixed seed.

The generators draw small random polynomials and scalars so each instance is
cheap; every assertion is an exact identity.  The helper functions return the
number of instances exercised so the acceptance suite can re-check the count.
"""

import math
import random
from fractions import Fraction

from coxsaito.coxeter import build_datum, builtin_invariants, jacobian
from coxsaito.field import FieldContext, RATIONALS
from coxsaito.matrix import Matrix, smat_inverse
from coxsaito.poly import MultiPoly, lowest_power_in_form

SQRT5 = FieldContext((-5, 0, 1), "sqrt(5)")

ITERATIONS = 1000


def _random_scalar(rng, field):
    return field.from_coeffs([Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                              for _ in range(field.degree)])


def _random_homogeneous(rng, nvars, degree, field=RATIONALS, max_terms=4):
    items = []
    for _ in range(rng.randint(1, max_terms)):
        cuts = sorted(rng.randint(0, degree) for _ in range(nvars - 1))
        exps = []
        prev = 0
        for c in cuts:
            exps.append(c - prev)
            prev = c
        exps.append(degree - prev)
        items.append((exps, rng.randint(-9, 9)))
    return MultiPoly.from_terms(nvars, items, field)


def run_field_axioms(iterations=ITERATIONS, seed=20240229) -> int:
    rng = random.Random(seed)
    tested = 0
    while tested < iterations:
        a = _random_scalar(rng, SQRT5)
        b = _random_scalar(rng, SQRT5)
        c = _random_scalar(rng, SQRT5)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * SQRT5.invert(a) == SQRT5.one
        tested += 1
    return tested


def run_exact_divide_roundtrip(iterations=ITERATIONS, seed=57721566) -> int:
    rng = random.Random(seed)
    tested = 0
    while tested < iterations:
        f = _random_homogeneous(rng, 3, rng.randint(0, 3))
        g = _random_homogeneous(rng, 3, rng.randint(0, 3))
        if g.is_zero():
            continue
        assert (f * g).exact_divide(g) == f
        tested += 1
    return tested


def run_adjugate_inverse(iterations=ITERATIONS, seed=31415926) -> int:
    rng = random.Random(seed)
    ident = Matrix.identity(3, 3, RATIONALS)
    tested = 0
    while tested < iterations:
        # L (unit lower) * U (constant nonzero diagonal): scalar determinant
        lower = [[MultiPoly.zero(3) for _ in range(3)] for _ in range(3)]
        upper = [[MultiPoly.zero(3) for _ in range(3)] for _ in range(3)]
        for i in range(3):
            lower[i][i] = MultiPoly.const(3, 1)
            upper[i][i] = MultiPoly.const(3, rng.choice((-3, -2, -1, 1, 2, 3)))
            for j in range(i):
                lower[i][j] = _random_homogeneous(rng, 3, rng.randint(0, 2),
                                                  max_terms=2)
                upper[j][i] = _random_homogeneous(rng, 3, rng.randint(0, 2),
                                                  max_terms=2)
        m = Matrix(lower) * Matrix(upper)
        assert m.det().constant_value() is not None
        assert (m * m.inverse()).simplify() == ident
        tested += 1
    return tested


def run_substitution_roundtrip(iterations=ITERATIONS, seed=16180339) -> int:
    rng = random.Random(seed)
    tested = 0
    while tested < iterations:
        n = rng.choice((2, 3))
        rows = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        try:
            inverse = smat_inverse(rows, RATIONALS)
        except Exception:
            continue
        f = _random_homogeneous(rng, n, rng.randint(0, 4))
        assert f.subst_linear(rows).subst_linear(inverse) == f
        tested += 1
    return tested


def run_lowest_power_rescaling(iterations=ITERATIONS, seed=14142135) -> int:
    rng = random.Random(seed)
    tested = 0
    while tested < iterations:
        form = [Fraction(rng.randint(-3, 3)) for _ in range(3)]
        if not any(form):
            continue
        power = rng.randint(0, 3)
        base = _random_homogeneous(rng, 3, rng.randint(0, 2))
        if base.is_zero():
            continue
        alpha = MultiPoly.from_terms(
            3, [([1 if j == i else 0 for j in range(3)], c)
                for i, c in enumerate(form)])
        f = base * alpha ** power
        order = lowest_power_in_form(f, form)
        scale = Fraction(rng.randint(1, 7), rng.randint(1, 7))
        assert order == lowest_power_in_form(f, [c * scale for c in form])
        assert order >= power
        tested += 1
    return tested


def test_field_axioms_thousand():
    assert run_field_axioms() >= 1000


def test_exact_divide_roundtrip_thousand():
    assert run_exact_divide_roundtrip() >= 1000


def test_adjugate_inverse_thousand():
    assert run_adjugate_inverse() >= 1000


def test_adjugate_inverse_on_builtin_jacobians():
    for label, rank in (("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3),
                        ("D", 3), ("I2", 4), ("I2", 5), ("I2", 6)):
        datum = build_datum(label, rank)
        inv = builtin_invariants(datum)
        j = jacobian(inv.polys, datum.rank)
        ident = Matrix.identity(datum.rank, datum.rank, datum.field)
        assert (j * j.inverse()).simplify() == ident


def test_substitution_roundtrip_thousand():
    assert run_substitution_roundtrip() >= 1000


def test_lowest_power_rescaling_thousand():
    assert run_lowest_power_rescaling() >= 1000
