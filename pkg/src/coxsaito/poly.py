"""Exact sparse multivariate polynomials over a number field.

Terms are stored in a dict keyed by a packed monomial: each exponent occupies
a fixed-width limb of one Python int, with the total degree in the topmost
limb.  Under this packing

  * monomial product is integer addition of keys,
  * graded-lexicographic comparison (x1 > x2 > ...) is integer comparison,

so the leading term is simply max(terms).  Coefficients are Fractions over Q
or `field.Scalar` values over an extension; no zero coefficient is ever
stored.  There is no floating point and no multivariate gcd anywhere: the
only reduction primitive is `exact_divide`, which either produces the exact
quotient or reports that none exists.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DimensionMismatch, DivisionByZero, ZeroForm
from .field import RATIONALS, FieldContext, Scalar

LIMB = 24
MASK = (1 << LIMB) - 1


def pack(exps) -> int:
    """Pack an exponent vector into a single grlex-ordered key."""
    n = len(exps)
    key = sum(exps) << (n * LIMB)
    for i, e in enumerate(exps):
        key |= e << ((n - 1 - i) * LIMB)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> ((nvars - 1 - i) * LIMB)) & MASK for i in range(nvars))


def key_degree(key: int, nvars: int) -> int:
    return key >> (nvars * LIMB)


def _limb_divides(a: int, b: int, nvars: int) -> bool:
    for i in range(nvars):
        shift = i * LIMB
        if ((a >> shift) & MASK) > ((b >> shift) & MASK):
            return False
    return True


class MultiPoly:
    """A multivariate polynomial with exact coefficients in a fixed field."""

    __slots__ = ("nvars", "terms", "field", "_ckey")

    def __init__(self, nvars: int, terms: dict, field: FieldContext = RATIONALS):
        self.nvars = nvars
        self.terms = terms
        self.field = field
        self._ckey = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, field: FieldContext = RATIONALS) -> "MultiPoly":
        return cls(nvars, {}, field)

    @classmethod
    def const(cls, nvars: int, value, field: FieldContext = RATIONALS) -> "MultiPoly":
        c = field.coerce(value)
        if not c:
            return cls(nvars, {}, field)
        return cls(nvars, {0: c}, field)

    @classmethod
    def variable(cls, nvars: int, index: int, field: FieldContext = RATIONALS) -> "MultiPoly":
        if not 0 <= index < nvars:
            raise DimensionMismatch(f"variable index {index} out of range")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {pack(exps): field.one}, field)

    @classmethod
    def from_terms(cls, nvars: int, items, field: FieldContext = RATIONALS) -> "MultiPoly":
        """Build from (exponent-vector, coefficient) pairs; merges duplicates."""
        terms: dict = {}
        for exps, c in items:
            if len(exps) != nvars:
                raise DimensionMismatch("exponent vector length != nvars")
            c = field.coerce(c)
            if not c:
                continue
            k = pack(exps)
            cur = terms.get(k)
            acc = c if cur is None else cur + c
            if acc:
                terms[k] = acc
            elif cur is not None:
                del terms[k]
        return cls(nvars, terms, field)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self):
        """Maximum total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return key_degree(max(self.terms), self.nvars)

    def homogeneous_degree(self):
        """Common total degree of all terms; None if zero or inhomogeneous."""
        if not self.terms:
            return None
        degs = {key_degree(k, self.nvars) for k in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        return self.homogeneous_degree() is not None

    def leading(self):
        """Leading (key, coefficient) in graded-lex order."""
        k = max(self.terms)
        return k, self.terms[k]

    def constant_value(self):
        """The scalar value if this polynomial is constant, else None."""
        if not self.terms:
            return self.field.coerce(0)
        if len(self.terms) == 1 and 0 in self.terms:
            return self.terms[0]
        return None

    def iter_terms(self):
        for k in sorted(self.terms, reverse=True):
            yield unpack(k, self.nvars), self.terms[k]

    def canonical_key(self):
        """Hashable snapshot identifying this polynomial exactly."""
        if self._ckey is None:
            self._ckey = (self.nvars,
                          frozenset((k, self.field.to_coeffs(c))
                                    for k, c in self.terms.items()))
        return self._ckey

    def sort_key(self):
        """Deterministic total order on polynomials (for canonical listings)."""
        return (self.total_degree() if self.terms else -1,
                sorted((k, self.field.to_coeffs(c)) for k, c in self.terms.items()))

    # -- arithmetic ---------------------------------------------------------

    def _check_compat(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise DimensionMismatch("nvars mismatch")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_compat(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, c in other.terms.items():
            cur = out.get(k)
            if cur is None:
                out[k] = c
            else:
                acc = cur + c
                if acc:
                    out[k] = acc
                else:
                    del out[k]
        return MultiPoly(self.nvars, out, self.field)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return MultiPoly(self.nvars, {k: -c for k, c in self.terms.items()}, self.field)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            self._check_compat(other)
            if not self.terms or not other.terms:
                return MultiPoly.zero(self.nvars, self.field)
            a, b = self.terms, other.terms
            if self.field.degree == 1 and len(a) * len(b) > 256:
                return self._mul_rational(other)
            if len(a) > len(b):
                a, b = b, a
            out: dict = {}
            get = out.get
            for ka, ca in a.items():
                for kb, cb in b.items():
                    k = ka + kb
                    prod = ca * cb
                    cur = get(k)
                    if cur is None:
                        out[k] = prod
                    else:
                        acc = cur + prod
                        if acc:
                            out[k] = acc
                        else:
                            del out[k]
            return MultiPoly(self.nvars, out, self.field)
        if not isinstance(other, (int, Fraction, Scalar)):
            return NotImplemented
        c = self.field.coerce(other)
        if not c:
            return MultiPoly.zero(self.nvars, self.field)
        return MultiPoly(self.nvars, {k: v * c for k, v in self.terms.items()}, self.field)

    __rmul__ = __mul__

    def _int_cleared(self):
        """(common denominator, integer-coefficient term dict) over Q."""
        den = 1
        for c in self.terms.values():
            d = c.denominator
            if d != 1:
                den = den * d // math.gcd(den, d)
        if den == 1:
            return 1, {k: c.numerator for k, c in self.terms.items()}
        return den, {k: (c.numerator * den) // c.denominator
                     for k, c in self.terms.items()}

    def _mul_rational(self, other: "MultiPoly") -> "MultiPoly":
        """Product over Q via integer arithmetic; Fraction gcds only on output."""
        da, a = self._int_cleared()
        db, b = other._int_cleared()
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                cur = get(k)
                out[k] = ca * cb if cur is None else cur + ca * cb
        den = da * db
        terms = {}
        for k, v in out.items():
            if v:
                terms[k] = Fraction(v, den)
        return MultiPoly(self.nvars, terms, self.field)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(self.nvars, 1, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.canonical_key())

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and substitution ------------------------------------------

    def partial(self, index: int) -> "MultiPoly":
        """Partial derivative with respect to variable `index`."""
        if not 0 <= index < self.nvars:
            raise DimensionMismatch(f"variable index {index} out of range")
        shift = (self.nvars - 1 - index) * LIMB
        dec = (1 << shift) + (1 << (self.nvars * LIMB))
        out = {}
        for k, c in self.terms.items():
            e = (k >> shift) & MASK
            if e:
                out[k - dec] = c * e
        return MultiPoly(self.nvars, out, self.field)

    def subst_linear(self, matrix) -> "MultiPoly":
        """Substitute x_i -> sum_j matrix[i][j] * x_j."""
        n = self.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise DimensionMismatch("substitution matrix must be nvars x nvars")
        unit = [[1 if j == t else 0 for t in range(n)] for j in range(n)]
        forms = [MultiPoly.from_terms(n, zip(unit, row), self.field) for row in matrix]
        # cache powers of each substituted form on demand
        powers: list[list[MultiPoly]] = [[MultiPoly.const(n, 1, self.field)] for _ in range(n)]
        result = MultiPoly.zero(n, self.field)
        for exps, c in self.iter_terms():
            term = MultiPoly.const(n, c, self.field)
            for i, e in enumerate(exps):
                if not e:
                    continue
                cache = powers[i]
                while len(cache) <= e:
                    cache.append(cache[-1] * forms[i])
                term = term * cache[e]
            result = result + term
        return result

    def exact_divide(self, divisor: "MultiPoly"):
        """Exact quotient self / divisor, or None when no quotient exists.

        Leading-term elimination under the fixed graded-lex order; a division
        step that cannot proceed proves non-divisibility for a single divisor.
        """
        if not isinstance(divisor, MultiPoly):
            raise TypeError("divisor must be a MultiPoly")
        self._check_compat(divisor)
        if divisor.is_zero():
            raise DivisionByZero("exact_divide by zero polynomial")
        if self.is_zero():
            return MultiPoly.zero(self.nvars, self.field)
        gl_key, gl_coeff = divisor.leading()
        inv_lead = self.field.invert(gl_coeff)
        g_items = list(divisor.terms.items())
        n = self.nvars
        r = dict(self.terms)
        q: dict = {}
        while r:
            m = max(r)
            if not _limb_divides(gl_key, m, n):
                return None
            qk = m - gl_key
            qc = r[m] * inv_lead
            q[qk] = qc
            for k, c in g_items:
                nk = k + qk
                cur = r.get(nk)
                sub = qc * c
                if cur is None:
                    r[nk] = -sub
                else:
                    acc = cur - sub
                    if acc:
                        r[nk] = acc
                    else:
                        del r[nk]
        return MultiPoly(self.nvars, q, self.field)

    def monic(self):
        """Split off the leading coefficient: returns (monic poly, leading coeff)."""
        if self.is_zero():
            return self, self.field.one
        _, lead = self.leading()
        inv = self.field.invert(lead)
        return MultiPoly(self.nvars, {k: c * inv for k, c in self.terms.items()},
                         self.field), lead

    # -- rendering -----------------------------------------------------------

    def render(self, names=None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = default_names(self.nvars)
        parts = []
        for exps, c in self.iter_terms():
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            cs = self.field.render(c)
            if factors:
                if cs == "1":
                    body = "*".join(factors)
                elif cs == "-1":
                    body = "-" + "*".join(factors)
                else:
                    body = cs + "*" + "*".join(factors)
            else:
                body = cs
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += ("-" + p[1:]) if p.startswith("-") else ("+" + p)
        return out

    def __repr__(self):
        return f"MultiPoly({self.render()})"


def default_names(nvars: int) -> tuple[str, ...]:
    if nvars <= 3:
        return ("x", "y", "z")[:nvars]
    return tuple(f"x{i + 1}" for i in range(nvars))


# -- spec-level operation aliases ---------------------------------------------

def poly_arith(f: MultiPoly, g: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def poly_partial(f: MultiPoly, index: int) -> MultiPoly:
    return f.partial(index)


def poly_subst_linear(f: MultiPoly, matrix) -> MultiPoly:
    return f.subst_linear(matrix)


def exact_divide(f: MultiPoly, g: MultiPoly):
    return f.exact_divide(g)


def lowest_power_in_form(f: MultiPoly, form) -> int | float:
    """Largest m such that the linear form divides f m times (inf for f = 0).

    Computed by an invertible linear change of variables that turns the form
    into the pivot coordinate, then reading off the minimum pivot exponent.
    """
    field = f.field
    coeffs = [field.coerce(c) for c in form]
    if len(coeffs) != f.nvars:
        raise DimensionMismatch("form length != nvars")
    pivot = next((i for i, c in enumerate(coeffs) if c), None)
    if pivot is None:
        raise ZeroForm("the zero form divides nothing")
    if f.is_zero():
        return math.inf
    inv_p = field.invert(coeffs[pivot])
    zero, one = field.coerce(0), field.one
    matrix = []
    for i in range(f.nvars):
        if i == pivot:
            row = [-(c * inv_p) for c in coeffs]
            row[pivot] = inv_p
        else:
            row = [one if j == i else zero for j in range(f.nvars)]
        matrix.append(row)
    g = f.subst_linear(matrix)
    shift = (f.nvars - 1 - pivot) * LIMB
    return min((k >> shift) & MASK for k in g.terms)
