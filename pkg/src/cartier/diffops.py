"""Differential operators in delta = z d/dz and their solution machinery.

Operators enter in raw form, a list of (zdeg, deltapoly) terms meaning
sum_t z^(zdeg_t) * Q_t(delta) with the z-power on the left, which is how the
classical operators are written down. monicize divides by the leading series
to get L = delta^n + a_1 delta^(n-1) + .. + a_n, keeping exact rational forms
of the a_i alongside their series expansions whenever the input was raw.

The MOM property (all a_i vanish at 0) is what makes the unit power-series
solution recursion solvable: the z^j coefficient equation reads
j^n f_j = -(contributions of lower f's), and j^n never vanishes for j >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadParameters,
    LeadingNotUnit,
    NotAUnit,
    NotMOM,
    NotNilpotent,
    OrderExhausted,
)
from .rational import Polynomial, RationalFunction
from .rings import Coefficient, PadicContext
from .series import TruncSeries


def _solve_coeff_system(matrix, rhs):
    """Gauss elimination over Coefficient entries; matrix must be invertible."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col].inverse()
        a[col] = [inv * x for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


@dataclass(frozen=True)
class SeriesMatrix:
    """Square matrix of TruncSeries, all entries at one common order."""

    rows: tuple
    ctx: PadicContext

    @classmethod
    def from_rows(cls, rows) -> "SeriesMatrix":
        if not rows or any(len(r) != len(rows) for r in rows):
            raise BadParameters("matrix must be square and nonempty")
        ctx = rows[0][0].ctx
        order = min(entry.order for row in rows for entry in row)
        normalized = tuple(
            tuple(entry.truncate(order) for entry in row) for row in rows
        )
        return cls(normalized, ctx)

    @classmethod
    def identity(cls, ctx: PadicContext, n: int, order: int) -> "SeriesMatrix":
        return cls.from_rows(
            [
                [
                    TruncSeries.one(ctx, order) if i == j else TruncSeries.zero(ctx, order)
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )

    @classmethod
    def zero(cls, ctx: PadicContext, n: int, order: int) -> "SeriesMatrix":
        return cls.from_rows(
            [[TruncSeries.zero(ctx, order)] * n for _ in range(n)]
        )

    @classmethod
    def from_const(cls, ctx: PadicContext, entries, order: int) -> "SeriesMatrix":
        """Constant matrix, embedded as series of the given order."""
        rows = []
        for row in entries:
            rows.append(
                [
                    TruncSeries((ctx.coeff(c),) + (ctx.zero(),) * (order - 1), ctx)
                    for c in row
                ]
            )
        return cls.from_rows(rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def order(self) -> int:
        return self.rows[0][0].order

    def entry(self, i: int, j: int) -> TruncSeries:
        return self.rows[i][j]

    def map_entries(self, fn) -> "SeriesMatrix":
        return SeriesMatrix.from_rows(
            [[fn(entry) for entry in row] for row in self.rows]
        )

    def __add__(self, other):
        return SeriesMatrix.from_rows(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ]
        )

    def __sub__(self, other):
        return SeriesMatrix.from_rows(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ]
        )

    def __neg__(self):
        return self.map_entries(lambda e: -e)

    def scale(self, c) -> "SeriesMatrix":
        return self.map_entries(lambda e: e * c)

    def matmul(self, other: "SeriesMatrix") -> "SeriesMatrix":
        n = self.size
        order = min(self.order, other.order)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = TruncSeries.zero(self.ctx, order)
                for k in range(n):
                    acc = acc + self.entry(i, k) * other.entry(k, j)
                row.append(acc)
            rows.append(row)
        return SeriesMatrix.from_rows(rows)

    def matmul_const(self, const_rows) -> "SeriesMatrix":
        """Right-multiply by a constant matrix (list of Coefficient rows)."""
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = TruncSeries.zero(self.ctx, self.order)
                for k in range(n):
                    c = const_rows[k][j]
                    if not c.is_zero():
                        acc = acc + self.entry(i, k) * c
                row.append(acc)
            rows.append(row)
        return SeriesMatrix.from_rows(rows)

    def const_matmul(self, const_rows) -> "SeriesMatrix":
        """Left-multiply by a constant matrix."""
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = TruncSeries.zero(self.ctx, self.order)
                for k in range(n):
                    c = const_rows[i][k]
                    if not c.is_zero():
                        acc = acc + self.entry(k, j) * c
                row.append(acc)
            rows.append(row)
        return SeriesMatrix.from_rows(rows)

    def delta(self) -> "SeriesMatrix":
        return self.map_entries(lambda e: e.delta())

    def cartier(self) -> "SeriesMatrix":
        return self.map_entries(lambda e: e.cartier())

    def subst_zpk(self, k: int) -> "SeriesMatrix":
        return self.map_entries(lambda e: e.subst_zpk(k))

    def truncate(self, order: int) -> "SeriesMatrix":
        return self.map_entries(lambda e: e.truncate(order))

    def constant_matrix(self):
        return [[self.entry(i, j)[0] for j in range(self.size)] for i in range(self.size)]

    def coefficient_matrix(self, l: int):
        return [[self.entry(i, j)[l] for j in range(self.size)] for i in range(self.size)]

    def invert_series(self) -> "SeriesMatrix":
        """Inverse as a series matrix; constant term must be invertible."""
        n = self.size
        order = self.order
        inv0 = _invert_const(self.constant_matrix(), self.ctx)
        zero = self.ctx.zero()
        # X_j = -M0^-1 * sum_{l=1..j} M_l X_{j-l}, X_0 = M0^-1
        x = [inv0]
        for j in range(1, order):
            acc = [[zero for _ in range(n)] for _ in range(n)]
            for l in range(1, j + 1):
                ml = self.coefficient_matrix(l)
                xl = x[j - l]
                for i in range(n):
                    for c in range(n):
                        s = acc[i][c]
                        for k in range(n):
                            a = ml[i][k]
                            b = xl[k][c]
                            if not a.is_zero() and not b.is_zero():
                                s = s + a * b
                        acc[i][c] = s
            xj = [[zero for _ in range(n)] for _ in range(n)]
            for i in range(n):
                for c in range(n):
                    s = zero
                    for k in range(n):
                        a = inv0[i][k]
                        b = acc[k][c]
                        if not a.is_zero() and not b.is_zero():
                            s = s + a * b
                    xj[i][c] = -s
            x.append(xj)
        rows = [
            [
                TruncSeries(tuple(x[j][i][c] for j in range(order)), self.ctx)
                for c in range(n)
            ]
            for i in range(n)
        ]
        return SeriesMatrix.from_rows(rows)

    def min_valuation(self):
        return min(entry.min_valuation() for row in self.rows for entry in row)

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.rows for entry in row)

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.rows == other.rows


def _invert_const(const_rows, ctx):
    """Inverse of a constant Coefficient matrix via Gauss-Jordan."""
    n = len(const_rows)
    cols = []
    for j in range(n):
        rhs = [ctx.one() if i == j else ctx.zero() for i in range(n)]
        try:
            cols.append(_solve_coeff_system([row[:] for row in const_rows], rhs))
        except ZeroDivisionError:
            raise NotAUnit("constant term matrix is singular") from None
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# -- operators ---------------------------------------------------------------


def _normalize_raw_terms(terms, ctx):
    """Merge duplicate z-degrees, coerce coefficients, strip zero tails."""
    merged = {}
    for zdeg, deltapoly in terms:
        if zdeg < 0:
            raise BadParameters("z-degree must be >= 0")
        poly = [ctx.coeff(c) for c in deltapoly]
        while poly and poly[-1].is_zero():
            poly.pop()
        if not poly:
            continue
        if zdeg in merged:
            old = merged[zdeg]
            size = max(len(old), len(poly))
            old += [ctx.zero()] * (size - len(old))
            for i, c in enumerate(poly):
                old[i] = old[i] + c
            merged[zdeg] = old
        else:
            merged[zdeg] = poly
    return tuple(sorted((z, tuple(p)) for z, p in merged.items()))


def raw_terms_from_json(data: dict, ctx: PadicContext):
    """Read the operator exchange format: {"terms": [{zdeg, deltapoly}]}."""
    terms = []
    for item in data["terms"]:
        terms.append((int(item["zdeg"]), [ctx.coeff(c) for c in item["deltapoly"]]))
    return _normalize_raw_terms(terms, ctx)


@dataclass(frozen=True)
class DiffOp:
    """Monic operator delta^n + a_1 delta^(n-1) + .. + a_n.

    coeffs holds a_1..a_n as truncated series. rational_coeffs (same order)
    and raw_terms are carried along when the operator came from a raw term
    list; they enable exact Gauss-norm checks and the fast banded recursion.
    """

    coeffs: tuple
    ctx: PadicContext
    rational_coeffs: tuple = None
    raw_terms: tuple = None

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def series_order(self) -> int:
        return min(a.order for a in self.coeffs) if self.coeffs else 0

    @property
    def is_mom(self) -> bool:
        """All coefficients vanish at z = 0."""
        return all(a[0].is_zero() for a in self.coeffs)

    @property
    def gauss_norm_bounded(self):
        """Whether every |a_i| is <= 1 under the Gauss norm.

        Decidable only when exact rational forms are present; None otherwise.
        """
        if self.rational_coeffs is None:
            return None
        return all(r.gauss_valuation() >= 0 for r in self.rational_coeffs)

    def companion(self) -> SeriesMatrix:
        """Shift structure with last row (-a_n, .., -a_1)."""
        n = self.order
        order = self.series_order
        rows = []
        for i in range(n - 1):
            rows.append(
                [
                    TruncSeries.one(self.ctx, order)
                    if j == i + 1
                    else TruncSeries.zero(self.ctx, order)
                    for j in range(n)
                ]
            )
        rows.append([-self.coeffs[n - 1 - j].truncate(order) for j in range(n)])
        return SeriesMatrix.from_rows(rows)

    def apply(self, f: TruncSeries) -> TruncSeries:
        """delta^n f + sum a_i delta^(n-i) f, to the common reliable order."""
        powers = [f]
        for _ in range(self.order):
            powers.append(powers[-1].delta())
        out = powers[self.order]
        for i, a in enumerate(self.coeffs, start=1):
            out = out + a * powers[self.order - i]
        return out

    def unit_solution(self, order: int) -> TruncSeries:
        """The solution with constant term 1, to the requested order.

        Uses the banded recursion on raw terms when available (cost linear in
        the order), otherwise the generic convolution against the a_i series.
        """
        if not self.is_mom:
            raise NotMOM("coefficients do not all vanish at 0")
        if self.raw_terms is not None:
            return _unit_solution_raw(self.raw_terms, self.ctx, self.order, order)
        if self.series_order < order:
            raise OrderExhausted(
                f"coefficients reliable to {self.series_order} < requested {order}"
            )
        n = self.order
        f = [self.ctx.one()]
        for j in range(1, order):
            s = self.ctx.zero()
            for i in range(1, n + 1):
                a = self.coeffs[i - 1]
                for l in range(1, j + 1):
                    c = a[l]
                    if not c.is_zero():
                        s = s + c * (Fraction(j - l) ** (n - i)) * f[j - l]
            f.append(-s * Fraction(1, j**n))
        return TruncSeries(tuple(f), self.ctx)


def _unit_solution_raw(raw_terms, ctx, n, order):
    # zdeg-0 term must be c * delta^n with c a unit: that is exactly MOM
    # plus leading-unit, both established by monicize
    head = dict(raw_terms).get(0)
    lead = head[-1]
    f = [ctx.one()]
    tail = [(z, poly) for z, poly in raw_terms if z > 0]
    for j in range(1, order):
        s = ctx.zero()
        for zdeg, poly in tail:
            if zdeg > j:
                continue
            arg = Fraction(j - zdeg)
            q = ctx.zero()
            power = Fraction(1)
            for c in poly:
                if not c.is_zero():
                    q = q + c * power
                power = power * arg
            if not q.is_zero():
                s = s + q * f[j - zdeg]
        f.append(-s / (lead * Fraction(j) ** n))
    return TruncSeries(tuple(f), ctx)


def monicize(terms, ctx: PadicContext, order: int) -> DiffOp:
    """Divide a raw term list by its leading series to get a monic operator.

    The leading delta^n series must be a unit at 0; its exact polynomial form
    becomes the common denominator of the rational coefficient forms.
    """
    raw = _normalize_raw_terms(terms, ctx)
    if not raw:
        raise BadParameters("empty operator")
    n = max(len(poly) for _, poly in raw) - 1
    if n < 1:
        raise BadParameters("operator must have positive delta-order")
    max_z = max(z for z, _ in raw)
    numerators = []
    for k in range(n + 1):
        coeffs = [ctx.zero()] * (max_z + 1)
        for z, poly in raw:
            if k < len(poly):
                coeffs[z] = coeffs[z] + poly[k]
        numerators.append(Polynomial.from_coeffs(ctx, coeffs))
    lead = numerators[n]
    if lead.constant_term().is_zero():
        raise LeadingNotUnit("leading delta coefficient vanishes at z = 0")
    lead_series_inv = lead.to_series(order).invert_unit()
    series_coeffs = []
    rational_coeffs = []
    for i in range(1, n + 1):
        num = numerators[n - i]
        series_coeffs.append(num.to_series(order) * lead_series_inv)
        rational_coeffs.append(RationalFunction.make(num, lead))
    return DiffOp(
        tuple(series_coeffs), ctx, tuple(rational_coeffs), raw
    )


def uniform_part(A: SeriesMatrix, order: int) -> SeriesMatrix:
    """The log-free factor Y of the fundamental solution of delta X = A X:
    Y(0) = I and delta Y = A Y - Y A(0).

    Solved coefficient by coefficient: for j >= 1 the Sylvester equation
    j*Y_j + Y_j A0 - A0 Y_j = sum_{l=1..j} A_l Y_{j-l} is lifted to a dense
    n^2 linear system, which is invertible because A0 is nilpotent (its
    adjoint action has nilpotent spectrum, so j + ad has none of 0).
    """
    n = A.size
    ctx = A.ctx
    order = min(order, A.order)
    a0 = A.constant_matrix()
    _require_nilpotent(a0, ctx, n)
    zero = ctx.zero()
    ident = [[ctx.one() if i == j else zero for j in range(n)] for i in range(n)]
    y = [ident]
    # build the n^2 x n^2 Sylvester matrix for E -> E A0 - A0 E once;
    # per-coefficient system just adds j on the diagonal
    basis_images = []
    for a in range(n):
        for b in range(n):
            e = [[zero] * n for _ in range(n)]
            e[a][b] = ctx.one()
            image = [
                [
                    sum((e[i][k] * a0[k][j] for k in range(n)), zero)
                    - sum((a0[i][k] * e[k][j] for k in range(n)), zero)
                    for j in range(n)
                ]
                for i in range(n)
            ]
            basis_images.append([image[i][j] for i in range(n) for j in range(n)])
    sylvester = [
        [basis_images[col][row] for col in range(n * n)] for row in range(n * n)
    ]
    for j in range(1, order):
        rhs = [[zero] * n for _ in range(n)]
        for l in range(1, j + 1):
            al = A.coefficient_matrix(l)
            yl = y[j - l]
            for i in range(n):
                for c in range(n):
                    s = rhs[i][c]
                    for k in range(n):
                        a = al[i][k]
                        b = yl[k][c]
                        if not a.is_zero() and not b.is_zero():
                            s = s + a * b
                    rhs[i][c] = s
        system = [
            [
                sylvester[row][col] + (ctx.coeff(j) if row == col else zero)
                for col in range(n * n)
            ]
            for row in range(n * n)
        ]
        flat = _solve_coeff_system(system, [rhs[i][c] for i in range(n) for c in range(n)])
        y.append([[flat[i * n + c] for c in range(n)] for i in range(n)])
    rows = [
        [
            TruncSeries(tuple(y[j][i][c] for j in range(order)), ctx)
            for c in range(n)
        ]
        for i in range(n)
    ]
    return SeriesMatrix.from_rows(rows)


def _require_nilpotent(const_rows, ctx, n):
    power = const_rows
    for _ in range(n):
        if all(c.is_zero() for row in power for c in row):
            return
        power = [
            [
                sum((power[i][k] * const_rows[k][j] for k in range(n)), ctx.zero())
                for j in range(n)
            ]
            for i in range(n)
        ]
    if not all(c.is_zero() for row in power for c in row):
        raise NotNilpotent("constant term of the system matrix is not nilpotent")
