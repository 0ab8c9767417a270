from fractions import Fraction

import pytest

from coxsaito.errors import DivisionByZero, NonInvertible
from coxsaito.field import RATIONALS, FieldContext, scalar_arith

SQRT5 = FieldContext((-5, 0, 1), "sqrt(5)")


def test_rational_add():
    assert scalar_arith(Fraction(2, 3), Fraction(1, 6), "add", RATIONALS) == Fraction(5, 6)


def test_generator_squares_to_five():
    t = SQRT5.generator()
    assert t * t == 5


def test_golden_ratio_inverse():
    # 1 / ((1+sqrt5)/2) = (sqrt5-1)/2 since (1+sqrt5)(sqrt5-1) = 4
    phi = SQRT5.from_coeffs((Fraction(1, 2), Fraction(1, 2)))
    inv = scalar_arith(SQRT5.one, phi, "div", SQRT5)
    assert inv == SQRT5.from_coeffs((Fraction(-1, 2), Fraction(1, 2)))
    assert phi * inv == 1


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        scalar_arith(1, 0, "div", RATIONALS)
    with pytest.raises(DivisionByZero):
        scalar_arith(SQRT5.one, SQRT5.zero, "div", SQRT5)


def test_reducible_minpoly_surfaces_as_noninvertible():
    # t^2 - 1 is reducible; t - 1 is a zero divisor
    bad = FieldContext((-1, 0, 1), "not a field")
    elt = bad.from_coeffs((-1, 1))
    with pytest.raises(NonInvertible):
        bad.invert(elt)


def test_mixed_coercion_and_ops():
    t = SQRT5.generator()
    assert (t + 1) - 1 == t
    assert 2 * t == t + t
    assert (t ** 3) == 5 * t
    assert t / t == 1
    assert bool(SQRT5.zero) is False


def test_render_and_describe():
    t = SQRT5.generator()
    assert SQRT5.render(t + 1) == "(1+t)"
    assert SQRT5.describe() == "Q[t]/(t^2 - 5)"
    assert RATIONALS.describe() == "Q"
