"""Small exact matrices over polynomials or factored fractions.

Everything here is sized by the group rank (<= 5 in practice), so
determinants use memoized Laplace expansion and inverses go through the
adjugate, keeping every entry exact.  A second family of helpers operates on
bare scalar matrices (lists of field elements) for reflection matrices and
Gram matrices.
"""

from __future__ import annotations

from .errors import DimensionMismatch, SingularMatrix
from .field import FieldContext
from .fraction import FactoredFraction
from .poly import MultiPoly


class Matrix:
    """Rectangular matrix with MultiPoly or FactoredFraction entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise DimensionMismatch("empty matrix")
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise DimensionMismatch("ragged rows")
        if any(isinstance(e, FactoredFraction) for row in entries for e in row):
            entries = tuple(
                tuple(e if isinstance(e, FactoredFraction)
                      else FactoredFraction.from_poly(e) for e in row)
                for row in entries)
        self.entries = entries
        self.rows = len(entries)
        self.cols = cols

    # -- constructors ---------------------------------------------------------

    @classmethod
    def identity(cls, n: int, nvars: int, field: FieldContext) -> "Matrix":
        one = MultiPoly.const(nvars, 1, field)
        zero = MultiPoly.zero(nvars, field)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_scalars(cls, scalar_rows, nvars: int, field: FieldContext) -> "Matrix":
        return cls([[MultiPoly.const(nvars, field.coerce(v), field) for v in row]
                    for row in scalar_rows])

    # -- structure -------------------------------------------------------------

    @property
    def is_fraction_mode(self) -> bool:
        return isinstance(self.entries[0][0], FactoredFraction)

    def _zero_one(self):
        sample = self.entries[0][0]
        nvars = sample.nvars
        field = sample.field
        zero = MultiPoly.zero(nvars, field)
        one = MultiPoly.const(nvars, 1, field)
        if self.is_fraction_mode:
            return FactoredFraction.from_poly(zero), FactoredFraction.from_poly(one)
        return zero, one

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self.entries)))

    def map_entries(self, fn) -> "Matrix":
        return Matrix([[fn(e) for e in row] for row in self.entries])

    def simplify(self) -> "Matrix":
        if not self.is_fraction_mode:
            return self
        return self.map_entries(lambda e: e.simplify())

    def with_entry(self, i: int, j: int, value) -> "Matrix":
        grid = [list(row) for row in self.entries]
        grid[i][j] = value
        return Matrix(grid)

    def column(self, j: int):
        return tuple(row[j] for row in self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(a == b for ra, rb in zip(self.entries, other.entries)
                   for a, b in zip(ra, rb))

    def __hash__(self):
        raise TypeError("matrices are not hashable")

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in add")
        return Matrix([[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in sub")
        return Matrix([[a - b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map_entries(lambda e: -e)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionMismatch("inner dimensions do not match")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = None
                    for t in range(self.cols):
                        a = self.entries[i][t]
                        b = other.entries[t][j]
                        if not a or not b:
                            continue
                        term = a * b
                        acc = term if acc is None else acc + term
                    if acc is None:
                        acc = self._zero_one()[0]
                    row.append(acc)
                out.append(row)
            return Matrix(out)
        # entrywise scaling by a polynomial, fraction or scalar
        return self.map_entries(lambda e: e * other)

    __rmul__ = __mul__

    # -- determinant / inverse ------------------------------------------------------

    def det(self):
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of non-square matrix")
        zero, one = self._zero_one()
        n = self.rows
        memo: dict = {}

        def minor(mask: int):
            if mask == 0:
                return one
            cached = memo.get(mask)
            if cached is not None:
                return cached
            r = n - bin(mask).count("1")
            acc = zero
            sign = 1
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    e = self.entries[r][j]
                    if e:
                        term = e * minor(mask & ~bit)
                        acc = acc + term if sign > 0 else acc - term
                    sign = -sign
            memo[mask] = acc
            return acc

        return minor((1 << n) - 1)

    def submatrix(self, drop_row: int, drop_col: int) -> "Matrix":
        return Matrix([[e for j, e in enumerate(row) if j != drop_col]
                       for i, row in enumerate(self.entries) if i != drop_row])

    def adjugate(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("adjugate of non-square matrix")
        n = self.rows
        if n == 1:
            _, one = self._zero_one()
            return Matrix([[one]])
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                cof = self.submatrix(i, j).det()
                out[j][i] = cof if (i + j) % 2 == 0 else -cof
        return Matrix(out)

    def inverse(self) -> "Matrix":
        """Adjugate-over-determinant inverse, entries as factored fractions."""
        det = self.det()
        if not det:
            raise SingularMatrix("matrix has zero determinant")
        adj = self.adjugate()
        if isinstance(det, FactoredFraction):
            inv_det = det.reciprocal()
            return adj.map_entries(lambda e: (e * inv_det).simplify())
        return adj.map_entries(lambda e: FactoredFraction(e, ((det, 1),)))

    def __repr__(self):
        body = "; ".join(", ".join(e.render() for e in row) for row in self.entries)
        return f"Matrix[{body}]"


# -- plain scalar matrices -----------------------------------------------------


def smat_identity(n: int, field: FieldContext):
    return [[field.one if i == j else field.coerce(0) for j in range(n)]
            for i in range(n)]


def smat_mul(a, b, field: FieldContext):
    n, k, m = len(a), len(b), len(b[0])
    if any(len(row) != k for row in a):
        raise DimensionMismatch("inner dimensions do not match")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = field.coerce(0)
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def smat_transpose(a):
    return [list(col) for col in zip(*a)]


def smat_eq(a, b) -> bool:
    return len(a) == len(b) and all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb))
        for ra, rb in zip(a, b))


def smat_inverse(a, field: FieldContext):
    """Gauss-Jordan inverse of a scalar matrix; raises SingularMatrix."""
    n = len(a)
    work = [list(row) + list(ident_row)
            for row, ident_row in zip([list(r) for r in a], smat_identity(n, field))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not field.is_zero(work[r][col])), None)
        if pivot is None:
            raise SingularMatrix("scalar matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = field.invert(work[col][col])
        work[col] = [v * inv for v in work[col]]
        for r in range(n):
            if r != col and not field.is_zero(work[r][col]):
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[col])]
    return [row[n:] for row in work]


def matrix_det(m: Matrix):
    return m.det()


def matrix_adjugate_inverse(m: Matrix) -> Matrix:
    return m.inverse()


def matrix_mul(a: Matrix, b: Matrix) -> Matrix:
    return a * b
