"""Jacobian, metric, primitive derivation, connection and basis machinery.

Everything is evaluated over the exact fraction field and then certified:
whenever a theorem guarantees a matrix is polynomial, the entries are pushed
through exact division against their accumulated denominator factors and a
failure aborts with NonPolynomialEntry.  That certification is a free
integrity check on the entire pipeline.

All row/column conventions follow the row-vector style of the source
identities: a tuple of derivations is a row, coefficient matrices multiply it
from the right, and a single derivation's coefficients form a column.
"""

from __future__ import annotations

from .coxeter import BasicInvariants, CoxeterDatum, jacobian
from .errors import (CoxsaitoError, NonPolynomialCoefficients,
                     NonPolynomialEntry, SingularMatrix)
from .fraction import FactoredFraction
from .matrix import Matrix
from .poly import MultiPoly


class PolyDerivation:
    """A derivation written in the coordinate frame ('X') or invariant frame ('P')."""

    __slots__ = ("frame", "coeffs")

    def __init__(self, frame: str, coeffs):
        if frame not in ("X", "P"):
            raise ValueError("frame must be 'X' or 'P'")
        self.frame = frame
        self.coeffs = tuple(
            c if isinstance(c, FactoredFraction) else FactoredFraction.from_poly(c)
            for c in coeffs)

    def poly_coeffs(self) -> list[MultiPoly]:
        out = []
        for c in self.coeffs:
            p = c.as_poly()
            if p is None:
                raise NonPolynomialCoefficients(
                    "derivation has a non-polynomial coefficient")
            out.append(p)
        return out

    def is_zero(self) -> bool:
        return all(c.simplify().is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, PolyDerivation):
            return NotImplemented
        return (self.frame == other.frame
                and len(self.coeffs) == len(other.coeffs)
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def render(self, names=None) -> str:
        from .poly import default_names
        if self.frame == "X":
            names = names or default_names(len(self.coeffs))
            basis = [f"d/d{n}" for n in names]
        else:
            basis = [f"d/dP{i + 1}" for i in range(len(self.coeffs))]
        parts = [f"({c.render(names)})*{basis[i]}"
                 for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"PolyDerivation[{self.frame}]({self.render()})"


def derivation_degree(theta: PolyDerivation, ctx: "SaitoContext"):
    """Homogeneity degree of a derivation; None if inhomogeneous."""
    degs = set()
    for j, c in enumerate(theta.coeffs):
        s = c.simplify()
        if s.is_zero():
            continue
        d = s.homogeneous_degree()
        if d is None:
            return None
        if theta.frame == "P":
            d -= ctx.datum.exponents[j] + 1
        degs.add(d)
    if len(degs) != 1:
        return None
    return degs.pop()


class SaitoContext:
    """Cached data for one (group realization, basic invariants) pair.

    The caches are plain dicts filled on demand; fills are idempotent and
    value-identical, so a context can be shared across concurrent readers.
    """

    __slots__ = ("datum", "invariants", "jac_P", "jac_P_inv", "gram_poly",
                 "metric_G", "dkx_table", "jdkx_table", "jdkx_inv_table",
                 "bk_table", "christoffel_table", "xi_table", "hk_table",
                 "_metric_G_inv", "_gamma_conn", "dkx_store", "det_jp_monic",
                 "_qm_powers")

    def __init__(self, datum: CoxeterDatum, invariants: BasicInvariants,
                 dkx_store=None):
        if not invariants.validated:
            raise CoxsaitoError("invariants must be validated before use")
        self.datum = datum
        self.invariants = invariants
        ell = datum.rank
        self.jac_P = jacobian(invariants.polys, ell)
        self.jac_P_inv = self.jac_P.inverse()
        self.det_jp_monic, _ = self.jac_P.det().monic()
        self._qm_powers = {0: MultiPoly.const(ell, 1, datum.field),
                           1: self.det_jp_monic}
        self.gram_poly = Matrix.from_scalars(datum.gram, ell, datum.field)
        self.metric_G = self.jac_P.transpose() * self.gram_poly * self.jac_P
        if self.metric_G != self.metric_G.transpose():
            raise CoxsaitoError("metric is not symmetric")
        xs = tuple(FactoredFraction.from_poly(
            MultiPoly.variable(ell, i, datum.field)) for i in range(ell))
        self.dkx_table: dict = {0: xs}
        self.jdkx_table: dict = {}
        self.jdkx_inv_table: dict = {0: Matrix.identity(ell, ell, datum.field)}
        self.bk_table: dict = {0: Matrix.identity(ell, ell, datum.field)}
        self.christoffel_table: dict = {}
        self.xi_table: dict = {}
        self.hk_table: dict = {0: Matrix.identity(ell, ell, datum.field)}
        self._metric_G_inv = None
        self._gamma_conn = None
        self.dkx_store = dkx_store

    @property
    def rank(self) -> int:
        return self.datum.rank

    def metric_G_inv(self) -> Matrix:
        if self._metric_G_inv is None:
            self._metric_G_inv = self.metric_G.inverse()
        return self._metric_G_inv

    def dp_column(self, k: int):
        """Coefficient vector of d/dP_k on coordinates: row k of J(P)^-1."""
        return tuple(self.jac_P_inv[k - 1, i] for i in range(self.rank))

    def qm_power(self, e: int) -> MultiPoly:
        """Cached powers of the monic Jacobian determinant."""
        table = self._qm_powers
        if e not in table:
            table[e] = self.qm_power(e - 1) * self.det_jp_monic
        return table[e]


def build_context(datum: CoxeterDatum, invariants: BasicInvariants,
                  dkx_store=None) -> SaitoContext:
    return SaitoContext(datum, invariants, dkx_store)


# -- the primitive derivation and its powers -------------------------------------


def dp_apply(f, k: int, ctx: SaitoContext) -> FactoredFraction:
    """Apply d/dP_k through the chain rule; k is 1-based."""
    if isinstance(f, MultiPoly):
        f = FactoredFraction.from_poly(f)
    col = ctx.dp_column(k)
    acc = None
    for i, c in enumerate(col):
        if not c:
            continue
        df = f.partial(i)
        if df.is_zero():
            continue
        term = c * df
        acc = term if acc is None else acc + term
    if acc is None:
        return FactoredFraction.zero(ctx.rank, ctx.datum.field)
    return acc.simplify()


def primitive_derivation_apply(f, ctx: SaitoContext) -> FactoredFraction:
    """The primitive derivation: d/dP_l, the unique one with D[P_i] = delta_il."""
    return dp_apply(f, ctx.rank, ctx)


def d_apply_matrix(m: Matrix, ctx: SaitoContext) -> Matrix:
    """Entrywise primitive derivation of a matrix."""
    return m.map_entries(lambda e: primitive_derivation_apply(e, ctx))


def dkx(k: int, ctx: SaitoContext):
    """The vector D^k[X] of factored fractions; cached (and optionally persisted)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    table = ctx.dkx_table
    if k in table:
        return table[k]
    if ctx.dkx_store is not None:
        loaded = ctx.dkx_store.load(k)
        if loaded is not None:
            table[k] = loaded
            return loaded
    prev = dkx(k - 1, ctx)
    cur = tuple(primitive_derivation_apply(f, ctx) for f in prev)
    table[k] = cur
    if ctx.dkx_store is not None:
        ctx.dkx_store.save(k, cur)
    return cur


def jdkx(k: int, ctx: SaitoContext) -> Matrix:
    """Jacobian matrix of D^k[X]: entry (i, j) = d(D^k[X_j]) / dX_i."""
    if k == 0:
        return Matrix.identity(ctx.rank, ctx.rank, ctx.datum.field)
    table = ctx.jdkx_table
    if k not in table:
        vec = dkx(k, ctx)
        table[k] = Matrix([[vec[j].partial(i).simplify() for j in range(ctx.rank)]
                           for i in range(ctx.rank)])
    return table[k]


def jdkx_inv(k: int, ctx: SaitoContext) -> Matrix:
    table = ctx.jdkx_inv_table
    if k not in table:
        fast = _jdkx_inv_cleared(k, ctx)
        table[k] = fast if fast is not None else jdkx(k, ctx).inverse()
    return table[k]


def _divide_out(p: MultiPoly, qm: MultiPoly, times: int):
    for _ in range(times):
        if p is None:
            return None
        p = p.exact_divide(qm)
    return p


def _jdkx_inv_cleared(k: int, ctx: SaitoContext):
    """Invert J(D^k[X]) by clearing the shared det-J(P) denominator first.

    The cleared matrix N = J(D^k[X]) * q^(2k) is polynomial (q the monic
    Jacobian determinant) and, by the Jacobi minor identity, every t x t
    minor of N is divisible by q^(2k(t-1)); dividing the power out at each
    level of the Laplace ladder keeps every intermediate as small as the
    final answer, which is polynomial.  Returns None when the denominators
    are not plain det-J(P) powers or an expected division fails (then the
    generic adjugate-over-determinant route applies).
    """
    ell = ctx.rank
    if ell == 1:
        return None
    qm = ctx.det_jp_monic
    qkey = qm.canonical_key()
    field = ctx.datum.field
    jd = jdkx(k, ctx)
    cleared = []
    for i in range(ell):
        row = []
        for j in range(ell):
            e = jd[i, j].simplify()
            exp = 0
            for f, fe in e.factors:
                if f.canonical_key() != qkey:
                    return None
                exp = fe
            if exp > 2 * k:
                return None
            p = e.numerator * field.invert(e.scalar)
            if exp < 2 * k:
                p = p * ctx.qm_power(2 * k - exp)
            row.append(p)
        cleared.append(row)

    from itertools import combinations
    zero = MultiPoly.zero(ell, field)
    # level[t][(rows, cols)] = (t x t minor of the cleared matrix) / q^(2k(t-1))
    level = {((i,), (j,)): cleared[i][j]
             for i in range(ell) for j in range(ell)}
    for t in range(2, ell):
        new = {}
        for rows in combinations(range(ell), t):
            rest = rows[1:]
            for cols in combinations(range(ell), t):
                acc = zero
                sign = 1
                for pos, s in enumerate(cols):
                    e = cleared[rows[0]][s]
                    if e:
                        sub = level[(rest, cols[:pos] + cols[pos + 1:])]
                        term = e * sub
                        acc = acc + term if sign > 0 else acc - term
                    sign = -sign
                reduced = _divide_out(acc, qm, 2 * k)
                if reduced is None:
                    return None
                new[(rows, cols)] = reduced
        level = new

    all_rows = tuple(range(ell))
    det_acc = zero
    sign = 1
    for j in range(ell):
        e = cleared[0][j]
        if e:
            sub = level[(all_rows[1:], all_rows[:j] + all_rows[j + 1:])]
            term = e * sub
            det_acc = det_acc + term if sign > 0 else det_acc - term
        sign = -sign
    det_reduced = _divide_out(det_acc, qm, 2 * k)
    c = det_reduced.constant_value() if det_reduced is not None else None
    if c is None:
        return None
    if field.is_zero(c):
        raise SingularMatrix("J(D^k[X]) is singular")
    inv_c = field.invert(c)
    out = []
    for i in range(ell):
        row = []
        for j in range(ell):
            minor = level[(all_rows[:j] + all_rows[j + 1:],
                           all_rows[:i] + all_rows[i + 1:])]
            signed = minor if (i + j) % 2 == 0 else -minor
            row.append(FactoredFraction.from_poly(signed * inv_c))
        out.append(row)
    return Matrix(out)


# -- B^(k), Christoffel matrices, connection ----------------------------------------


def _certify_poly_matrix(m: Matrix, what: str) -> Matrix:
    out = []
    for i in range(m.rows):
        row = []
        for j in range(m.cols):
            e = m[i, j]
            p = e.as_poly() if isinstance(e, FactoredFraction) else e
            if p is None:
                raise NonPolynomialEntry(
                    f"{what} entry ({i + 1},{j + 1}) is not polynomial: {e.render()}")
            row.append(p)
        out.append(row)
    return Matrix(out)


def bk_matrix(k: int, ctx: SaitoContext) -> Matrix:
    """-J(P)^T A J(D^k[X]) J(D^(k-1)[X])^{-1} J(P), certified polynomial."""
    if k < 0:
        raise ValueError("k must be >= 0")
    table = ctx.bk_table
    if k not in table:
        prod = (ctx.jac_P.transpose() * ctx.gram_poly * jdkx(k, ctx)
                * jdkx_inv(k - 1, ctx) * ctx.jac_P)
        table[k] = _certify_poly_matrix(-prod, f"B^({k})")
    return table[k]


def christoffel_star(k: int, ctx: SaitoContext) -> Matrix:
    """J(P)^T A (d/dP_k)[J(P)], certified polynomial; k is 1-based."""
    if not 1 <= k <= ctx.rank:
        raise ValueError("k must be between 1 and the rank")
    table = ctx.christoffel_table
    if k not in table:
        dj = ctx.jac_P.map_entries(lambda e: dp_apply(e, k, ctx))
        prod = ctx.jac_P.transpose() * ctx.gram_poly * dj
        table[k] = _certify_poly_matrix(prod, f"Gamma*_{k}")
    return table[k]


def gamma_connection(ctx: SaitoContext) -> Matrix:
    """Gamma_l = -G^{-1} Gamma*_l, the connection matrix of the covariant
    derivative along the primitive derivation in the invariant frame."""
    if ctx._gamma_conn is None:
        star = christoffel_star(ctx.rank, ctx)
        ctx._gamma_conn = (-(ctx.metric_G_inv() * star)).simplify()
    return ctx._gamma_conn


def nabla_D(theta: PolyDerivation, ctx: SaitoContext) -> PolyDerivation:
    """Covariant derivative along the primitive derivation, invariant frame.

    Coefficient columns map by c -> Gamma_l^T c + D[c].
    """
    if theta.frame != "P":
        raise ValueError("nabla_D expects an invariant-frame derivation")
    gamma = gamma_connection(ctx)
    c = theta.coeffs
    out = []
    for i in range(ctx.rank):
        acc = primitive_derivation_apply(c[i], ctx)
        for j in range(ctx.rank):
            g = gamma[j, i]
            if not g or not c[j]:
                continue
            acc = acc + g * c[j]
        out.append(acc.simplify())
    return PolyDerivation("P", out)


def nabla_D_power(theta: PolyDerivation, times: int, ctx: SaitoContext) -> PolyDerivation:
    for _ in range(times):
        theta = nabla_D(theta, ctx)
    return theta


# -- frames, application, bracket ------------------------------------------------------


def frame_convert(theta: PolyDerivation, target: str, ctx: SaitoContext) -> PolyDerivation:
    if target not in ("X", "P"):
        raise ValueError("target frame must be 'X' or 'P'")
    if theta.frame == target:
        return theta
    ell = ctx.rank
    c = theta.coeffs
    out = []
    if target == "P":
        # c_P = J(P)^T c_X
        for i in range(ell):
            acc = None
            for j in range(ell):
                entry = ctx.jac_P[j, i]
                if entry.is_zero() or not c[j]:
                    continue
                term = c[j] * entry
                acc = term if acc is None else acc + term
            out.append(acc.simplify() if acc is not None
                       else FactoredFraction.zero(ell, ctx.datum.field))
    else:
        # c_X = J(P)^{-T} c_P
        for i in range(ell):
            acc = None
            for j in range(ell):
                entry = ctx.jac_P_inv[j, i]
                if not entry or not c[j]:
                    continue
                term = c[j] * entry
                acc = term if acc is None else acc + term
            out.append(acc.simplify() if acc is not None
                       else FactoredFraction.zero(ell, ctx.datum.field))
    return PolyDerivation(target, out)


def derivation_apply(theta: PolyDerivation, f, ctx: SaitoContext) -> FactoredFraction:
    """theta(f) for a coordinate-frame derivation."""
    if theta.frame != "X":
        theta = frame_convert(theta, "X", ctx)
    if isinstance(f, MultiPoly):
        f = FactoredFraction.from_poly(f)
    acc = None
    for i, c in enumerate(theta.coeffs):
        if not c:
            continue
        df = f.partial(i)
        if df.is_zero():
            continue
        term = c * df
        acc = term if acc is None else acc + term
    if acc is None:
        return FactoredFraction.zero(ctx.rank, ctx.datum.field)
    return acc.simplify()


def derivation_bracket(theta: PolyDerivation, eta: PolyDerivation,
                       ctx: SaitoContext) -> PolyDerivation:
    """Lie bracket, computed coefficientwise in the coordinate frame."""
    tx = frame_convert(theta, "X", ctx)
    ex = frame_convert(eta, "X", ctx)
    out = []
    for i in range(ctx.rank):
        a = derivation_apply(tx, ex.coeffs[i], ctx)
        b = derivation_apply(ex, tx.coeffs[i], ctx)
        out.append((a - b).simplify())
    return PolyDerivation("X", out)


def primitive_derivation(ctx: SaitoContext) -> PolyDerivation:
    """The primitive derivation as a coordinate-frame derivation."""
    return PolyDerivation("X", dkx(1, ctx))


def dp_basis_derivation(k: int, ctx: SaitoContext) -> PolyDerivation:
    """d/dP_k as an invariant-frame derivation; k is 1-based."""
    ell = ctx.rank
    field = ctx.datum.field
    coeffs = [FactoredFraction.from_poly(
        MultiPoly.const(ell, 1 if j == k - 1 else 0, field)) for j in range(ell)]
    return PolyDerivation("P", coeffs)


# -- the basis construction ------------------------------------------------------------


def xi_basis(m: int, ctx: SaitoContext):
    """The l basis derivations of contact order m, coordinate frame, certified
    polynomial.  Coefficient matrix: A J(D^k[X])^{-1} (m = 2k), with a trailing
    J(P) factor for odd m = 2k+1."""
    if m < 0:
        raise ValueError("m must be >= 0")
    table = ctx.xi_table
    if m not in table:
        k = m // 2
        prod = ctx.gram_poly * jdkx_inv(k, ctx)
        if m % 2 == 1:
            prod = prod * ctx.jac_P
        coeff = _certify_poly_matrix(prod, f"xi^({m})")
        table[m] = [PolyDerivation("X", coeff.column(j)) for j in range(ctx.rank)]
    return table[m]


def xi_coefficient_matrix(m: int, ctx: SaitoContext) -> Matrix:
    """Columns are the coordinate-frame coefficient vectors of xi^(m)_j."""
    xis = xi_basis(m, ctx)
    return Matrix([[xis[j].coeffs[i].as_poly() for j in range(ctx.rank)]
                   for i in range(ctx.rank)])


def hk_product(k: int, ctx: SaitoContext) -> Matrix:
    """H_k = (-1)^k (B^(1))^{-1} G ... (B^(k))^{-1} G (fraction matrix)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    table = ctx.hk_table
    if k not in table:
        prev = hk_product(k - 1, ctx)
        step = bk_matrix(k, ctx).inverse() * ctx.metric_G
        table[k] = (-(prev * step)).simplify()
    return table[k]


# -- group action on derivations ----------------------------------------------------


def derivation_transform(theta: PolyDerivation, ctx: SaitoContext,
                         gen_index: int) -> PolyDerivation:
    """Image of a polynomial coordinate-frame derivation under one generator."""
    theta = frame_convert(theta, "X", ctx)
    polys = theta.poly_coeffs()
    datum = ctx.datum
    sub = datum.subst[gen_index]
    ell = ctx.rank
    field = datum.field
    mixed = []
    for i in range(ell):
        acc = MultiPoly.zero(ell, field)
        for j in range(ell):
            v = sub[i][j]
            if not field.is_zero(v):
                acc = acc + polys[j] * v
        mixed.append(acc)
    return PolyDerivation("X", [p.subst_linear(sub) for p in mixed])
