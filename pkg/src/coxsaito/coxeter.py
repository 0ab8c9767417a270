"""Realizations of finite irreducible Coxeter groups and their basic invariants.

Built-in families: A, B, D in rational coordinates and the dihedral groups
I2(m) over Q(2cos(pi/2m)).  Everything a downstream computation needs --
Gram matrix, hyperplane forms, a generating set of reflections, exponents --
is constructed explicitly and cross-checked at build time, so a datum that
constructs successfully already satisfies all of its structural invariants.

Hyperplane forms are normalized so their first nonzero coefficient is 1; all
downstream checks are invariant under rescaling, the normalization only fixes
what reports print.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import (CoxsaitoError, JacobianCriterionFailed, NotInvariant,
                     RankOutOfRange, UnsupportedType, WrongDegrees)
from .field import RATIONALS, FieldContext
from .matrix import (Matrix, smat_eq, smat_identity, smat_mul, smat_transpose)
from .poly import MultiPoly

# minimal polynomial of 2cos(pi/(2m)), ascending coefficients
_I2_MINPOLY = {
    3: (-3, 0, 1),
    4: (2, 0, -4, 0, 1),
    5: (5, 0, -5, 0, 1),
    6: (1, 0, -4, 0, 1),
    7: (-7, 0, 14, 0, -7, 0, 1),
    8: (2, 0, -16, 0, 20, 0, -8, 0, 1),
    9: (-3, 0, 9, 0, -6, 0, 1),
    10: (1, 0, -12, 0, 19, 0, -8, 0, 1),
    11: (-11, 0, 55, 0, -77, 0, 44, 0, -11, 0, 1),
    12: (1, 0, -16, 0, 20, 0, -8, 0, 1),
}


def _normalize_form(coeffs, field: FieldContext):
    lead = next((c for c in coeffs if not field.is_zero(c)), None)
    if lead is None:
        raise CoxsaitoError("zero hyperplane form")
    inv = field.invert(lead)
    return tuple(c * inv for c in coeffs)


class CoxeterDatum:
    """A concrete reflection-group realization.

    Constructing a datum verifies all structural invariants (generator
    involutions, Gram compatibility, arrangement closure, exponent count);
    a successfully built datum can be trusted by every downstream module.
    """

    __slots__ = ("type_label", "rank", "field", "gram", "forms", "generators",
                 "subst", "exponents", "coxeter_number", "_form_polys", "_q")

    def __init__(self, type_label: str, rank: int, field: FieldContext,
                 gram, forms, generators, exponents):
        self.type_label = type_label
        self.rank = rank
        self.field = field
        self.gram = [tuple(field.coerce(v) for v in row) for row in gram]
        self.forms = [_normalize_form([field.coerce(c) for c in f], field)
                      for f in forms]
        # a generator maps the coefficient vector of a linear form to M * vector;
        # the induced substitution on polynomials uses the transpose
        self.generators = [[tuple(field.coerce(v) for v in row) for row in g]
                           for g in generators]
        self.subst = [smat_transpose(g) for g in self.generators]
        self.exponents = tuple(int(e) for e in exponents)
        self.coxeter_number = self.exponents[-1] + 1
        self._form_polys = None
        self._q = None
        self._check()

    def _check(self):
        ell, field = self.rank, self.field
        if ell < 1:
            raise RankOutOfRange("rank must be >= 1")
        if len(self.gram) != ell or any(len(r) != ell for r in self.gram):
            raise CoxsaitoError("Gram matrix must be rank x rank")
        if not smat_eq(self.gram, smat_transpose(self.gram)):
            raise CoxsaitoError("Gram matrix must be symmetric")
        from .matrix import smat_inverse  # det != 0 check
        smat_inverse(self.gram, field)
        if list(self.exponents) != sorted(self.exponents):
            raise CoxsaitoError("exponents must be ascending")
        h = self.coxeter_number
        if 2 * len(self.forms) != ell * h or sum(self.exponents) != len(self.forms):
            raise CoxsaitoError("hyperplane count must equal sum of exponents = rank*h/2")
        ident = smat_identity(ell, field)
        form_set = {tuple(field.to_coeffs(c) for c in f) for f in self.forms}
        for idx, g in enumerate(self.generators):
            if not smat_eq(smat_mul(g, g, field), ident):
                raise CoxsaitoError(f"generator {idx} is not an involution")
            if not smat_eq(smat_mul(smat_transpose(g),
                                    smat_mul(self.gram, g, field), field),
                           self.gram):
                raise CoxsaitoError(f"generator {idx} does not preserve the Gram matrix")
            for f in self.forms:
                image = [sum((g[j][i] * f[i] for i in range(ell)), field.coerce(0))
                         for j in range(ell)]
                image = _normalize_form(image, field)
                if tuple(field.to_coeffs(c) for c in image) not in form_set:
                    raise CoxsaitoError(
                        f"generator {idx} does not fix the arrangement setwise")

    # -- derived data ------------------------------------------------------------

    @property
    def size(self) -> int:
        """Number of reflecting hyperplanes."""
        return len(self.forms)

    def label(self) -> str:
        if self.type_label == "I2":
            return f"I2({self.coxeter_number})"
        if self.type_label in ("A", "B", "D"):
            return f"{self.type_label}{self.rank}"
        return f"custom:{self.type_label}"

    def form_poly(self, index: int) -> MultiPoly:
        return self.form_polys()[index]

    def form_polys(self) -> list[MultiPoly]:
        if self._form_polys is None:
            unit = [[1 if j == i else 0 for j in range(self.rank)]
                    for i in range(self.rank)]
            self._form_polys = [
                MultiPoly.from_terms(self.rank, zip(unit, f), self.field)
                for f in self.forms]
        return self._form_polys


class BasicInvariants:
    """An ordered, validated system of basic invariants P_1..P_l."""

    __slots__ = ("polys", "validated", "source")

    def __init__(self, polys, validated: bool, source: str = "builtin"):
        self.polys = tuple(polys)
        self.validated = validated
        self.source = source


# -- datum builders ---------------------------------------------------------------


def build_datum(type_label: str, rank_or_m: int) -> CoxeterDatum:
    t = type_label.upper().replace("I2(M)", "I2")
    if t in ("I2", "I"):
        return _build_i2(rank_or_m)
    if t == "A":
        return _build_a(rank_or_m)
    if t == "B":
        return _build_b(rank_or_m)
    if t == "D":
        return _build_d(rank_or_m)
    raise UnsupportedType(f"unsupported type {type_label!r}")


def _unit_forms(ell):
    return [[1 if j == i else 0 for j in range(ell)] for i in range(ell)]


def _swap_matrix(ell, i, j):
    m = [[1 if c == r else 0 for c in range(ell)] for r in range(ell)]
    m[i][i] = m[j][j] = 0
    m[i][j] = m[j][i] = 1
    return m


def _build_a(ell: int) -> CoxeterDatum:
    if ell < 1:
        raise RankOutOfRange("A requires rank >= 1")
    if ell == 1:
        return CoxeterDatum("A", 1, RATIONALS, [[1]], [[1]], [[[-1]]], (1,))
    gram = [[Fraction(1 if i == j else 0) - Fraction(1, ell + 1)
             for j in range(ell)] for i in range(ell)]
    forms = []
    for i in range(ell):
        for j in range(i + 1, ell):
            f = [0] * ell
            f[i], f[j] = 1, -1
            forms.append(f)
    for i in range(ell):
        f = [1] * ell
        f[i] = 2
        forms.append(f)
    gens = [_swap_matrix(ell, i, i + 1) for i in range(ell - 1)]
    # transposition with the projected-out coordinate: X_l -> -(X_1+...+X_l)
    last = [[1 if c == r else 0 for c in range(ell)] for r in range(ell)]
    for r in range(ell):
        last[r][ell - 1] = -1
    gens.append(last)
    return CoxeterDatum("A", ell, RATIONALS, gram, forms, gens,
                        tuple(range(1, ell + 1)))


def _build_b(ell: int) -> CoxeterDatum:
    if ell < 1:
        raise RankOutOfRange("B requires rank >= 1")
    gram = smat_identity(ell, RATIONALS)
    forms = _unit_forms(ell)
    for i in range(ell):
        for j in range(i + 1, ell):
            for sign in (-1, 1):
                f = [0] * ell
                f[i], f[j] = 1, sign
                forms.append(f)
    gens = [_swap_matrix(ell, i, i + 1) for i in range(ell - 1)]
    flip = smat_identity(ell, RATIONALS)
    flip[ell - 1][ell - 1] = Fraction(-1)
    gens.append(flip)
    return CoxeterDatum("B", ell, RATIONALS, gram, forms, gens,
                        tuple(range(1, 2 * ell, 2)))


def _build_d(ell: int) -> CoxeterDatum:
    if ell < 3:
        raise RankOutOfRange("D requires rank >= 3")
    gram = smat_identity(ell, RATIONALS)
    forms = []
    for i in range(ell):
        for j in range(i + 1, ell):
            for sign in (-1, 1):
                f = [0] * ell
                f[i], f[j] = 1, sign
                forms.append(f)
    gens = [_swap_matrix(ell, i, i + 1) for i in range(ell - 1)]
    signed_swap = [[1 if c == r else 0 for c in range(ell)] for r in range(ell)]
    signed_swap[ell - 2][ell - 2] = signed_swap[ell - 1][ell - 1] = 0
    signed_swap[ell - 2][ell - 1] = signed_swap[ell - 1][ell - 2] = -1
    gens.append(signed_swap)
    exponents = sorted(list(range(1, 2 * ell - 2, 2)) + [ell - 1])
    return CoxeterDatum("D", ell, RATIONALS, gram, forms, gens, tuple(exponents))


def _build_i2(m: int) -> CoxeterDatum:
    if m < 3:
        raise RankOutOfRange("I2(m) requires m >= 3")
    if m not in _I2_MINPOLY:
        raise UnsupportedType(f"no minimal-polynomial preset for I2({m}); presets cover m <= 12")
    field = FieldContext(_I2_MINPOLY[m], f"2cos(pi/{2 * m})")
    gamma = field.generator()
    # v[k] = 2cos(k*pi/(2m)) by the three-term recurrence
    v = [field.coerce(2), gamma]
    for _ in range(2 * m):
        v.append(gamma * v[-1] - v[-2])
    half = Fraction(1, 2)

    def cos_m(k):  # cos(k*pi/m)
        return v[2 * k] * half

    def sin_m(k):  # sin(k*pi/m)
        return v[abs(m - 2 * k)] * half

    forms = [[sin_m(k), -cos_m(k)] for k in range(m)]
    gens = [
        [[field.one, field.coerce(0)], [field.coerce(0), -field.one]],
        [[cos_m(2), sin_m(2)], [sin_m(2), -cos_m(2)]],
    ]
    gram = smat_identity(2, field)
    return CoxeterDatum("I2", 2, field, gram, forms, gens, (1, m - 1))


# -- invariants ---------------------------------------------------------------------


def _power_sum(ell, k, field):
    return MultiPoly.from_terms(
        ell, [([k if j == i else 0 for j in range(ell)], 1) for i in range(ell)], field)


def builtin_invariants(datum: CoxeterDatum) -> BasicInvariants:
    t = datum.type_label
    ell = datum.rank
    field = datum.field
    if t == "A":
        if ell == 1:
            x = MultiPoly.variable(1, 0, field)
            polys = [x * x]
        else:
            total = MultiPoly.from_terms(
                ell, [([1 if j == i else 0 for j in range(ell)], 1) for i in range(ell)],
                field)
            polys = []
            for k in range(2, ell + 2):
                p = _power_sum(ell, k, field) + (total ** k) * ((-1) ** k)
                polys.append(p)
    elif t == "B":
        polys = [_power_sum(ell, 2 * k, field) for k in range(1, ell + 1)]
    elif t == "D":
        elementary = MultiPoly.from_terms(ell, [([1] * ell, 1)], field)
        polys = [_power_sum(ell, 2 * k, field) for k in range(1, ell)]
        polys.append(elementary)
        polys.sort(key=lambda p: p.total_degree())
    elif t == "I2":
        m = datum.coxeter_number
        x, y = (MultiPoly.variable(2, i, field) for i in (0, 1))
        p1 = x * x + y * y
        p2 = MultiPoly.from_terms(
            2, [((m - 2 * j, 2 * j), (-1) ** j * comb(m, 2 * j))
                for j in range(m // 2 + 1)], field)
        polys = [p1, p2]
    else:
        raise UnsupportedType(
            f"no invariant catalogue for type {datum.type_label!r}; "
            "supply an invariants file")
    return validate_invariants(datum, polys)


def jacobian(polys, nvars: int) -> Matrix:
    """J[i][j] = d(polys[j]) / d(x_i)."""
    return Matrix([[p.partial(i) for p in polys] for i in range(nvars)])


def validate_invariants(datum: CoxeterDatum, polys,
                        source: str = "builtin") -> BasicInvariants:
    """Certify candidate basic invariants; raises a ValidationError subclass."""
    polys = list(polys)
    ell = datum.rank
    if len(polys) != ell:
        raise WrongDegrees(f"expected {ell} polynomials, got {len(polys)}")
    for idx, s in enumerate(datum.subst):
        for j, p in enumerate(polys):
            if p.subst_linear(s) != p:
                raise NotInvariant(
                    f"P_{j + 1} is not invariant under generator {idx}")
    for j, p in enumerate(polys):
        want = datum.exponents[j] + 1
        if p.is_zero() or p.homogeneous_degree() != want:
            raise WrongDegrees(
                f"P_{j + 1} must be homogeneous of degree {want}")
    det = jacobian(polys, ell).det()
    rem = det
    for f in datum.form_polys():
        if rem is None:
            break
        rem = rem.exact_divide(f)
    constant = rem.constant_value() if rem is not None else None
    if constant is None or datum.field.is_zero(constant):
        raise JacobianCriterionFailed(
            "det J(P) is not a nonzero constant multiple of the arrangement polynomial")
    return BasicInvariants(polys, True, source)


def anti_invariant_Q(datum: CoxeterDatum) -> MultiPoly:
    """Product of all hyperplane forms; certified anti-invariant."""
    if datum._q is None:
        q = MultiPoly.const(datum.rank, 1, datum.field)
        for f in datum.form_polys():
            q = q * f
        for idx, s in enumerate(datum.subst):
            if q.subst_linear(s) != -q:
                raise CoxsaitoError(
                    f"arrangement polynomial is not anti-invariant under generator {idx}")
        datum._q = q
    return datum._q


# -- Poincare series -----------------------------------------------------------------


def _uni_mul(a, b):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poincare_closed_form(generator_degrees, ring_degrees):
    """(sum_j t^g_j) / prod_i (1 - t^d_i) as a pair of integer polynomials."""
    if generator_degrees:
        num = [0] * (max(generator_degrees) + 1)
        for g in generator_degrees:
            num[g] += 1
        while num and num[-1] == 0:
            num.pop()
        num = tuple(num)
    else:
        num = ()
    den = (1,)
    for d in ring_degrees:
        factor = [0] * (d + 1)
        factor[0], factor[d] = 1, -1
        den = _uni_mul(den, tuple(factor))
    return num, den


def poincare_equal(a, b) -> bool:
    """Equality of two closed-form series by cross multiplication."""
    return _uni_mul(a[0], b[1]) == _uni_mul(b[0], a[1])
