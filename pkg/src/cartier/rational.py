"""Polynomials and rational functions over a p-adic context, plus the Pade
reconstruction engine used by every certificate search.

The certificate story is always the same: some truncated series is supposed
to be congruent, modulo pi^m, to a rational function with controlled degrees
and no poles in the open unit disc. Candidates come from the extended
Euclidean algorithm run on (z^T, first T coefficients); each candidate is
then re-verified against the full reliable window, never trusted. Windows
are tried smallest first so the least complex certificate wins and the
result is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInK0, ReconstructionFailed
from .rings import Coefficient, PadicContext
from .series import TruncSeries


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial; coeffs[j] is the z^j coefficient, no trailing zeros."""

    coeffs: tuple
    ctx: PadicContext

    @classmethod
    def from_coeffs(cls, ctx: PadicContext, values) -> "Polynomial":
        coeffs = [ctx.coeff(v) for v in values]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        return cls(tuple(coeffs), ctx)

    @classmethod
    def zero(cls, ctx: PadicContext) -> "Polynomial":
        return cls((), ctx)

    @classmethod
    def one(cls, ctx: PadicContext) -> "Polynomial":
        return cls((ctx.one(),), ctx)

    @classmethod
    def monomial(cls, ctx: PadicContext, degree: int) -> "Polynomial":
        return cls((ctx.zero(),) * degree + (ctx.one(),), ctx)

    @classmethod
    def from_series_prefix(cls, f: TruncSeries, upto: int) -> "Polynomial":
        return cls.from_coeffs(f.ctx, f.coeffs[:upto])

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, j: int) -> Coefficient:
        if j >= len(self.coeffs):
            return self.ctx.zero()
        return self.coeffs[j]

    def constant_term(self) -> Coefficient:
        return self[0]

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial.from_coeffs(
            self.ctx, [self[j] + other[j] for j in range(n)]
        )

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial.from_coeffs(
            self.ctx, [self[j] - other[j] for j in range(n)]
        )

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs), self.ctx)

    def __mul__(self, other):
        if isinstance(other, Coefficient):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return Polynomial.zero(self.ctx)
        out = [self.ctx.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return Polynomial.from_coeffs(self.ctx, out)

    def scale(self, c) -> "Polynomial":
        c = self.ctx.coeff(c)
        return Polynomial.from_coeffs(self.ctx, [c * a for a in self.coeffs])

    def divmod(self, other):
        """Euclidean division; coefficients form a field so this is exact."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        lead_inv = other.coeffs[-1].inverse()
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial.zero(self.ctx), self
        quot = [self.ctx.zero()] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * lead_inv
            if not c.is_zero():
                quot[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return (
            Polynomial.from_coeffs(self.ctx, quot),
            Polynomial.from_coeffs(self.ctx, rem),
        )

    def gcd(self, other) -> "Polynomial":
        """Monic gcd via Euclid."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a.scale(a.coeffs[-1].inverse())

    def derivative(self) -> "Polynomial":
        return Polynomial.from_coeffs(
            self.ctx, [c * j for j, c in enumerate(self.coeffs)][1:]
        )

    def subst_zpk(self, k: int) -> "Polynomial":
        """Substitute z -> z^(p^k)."""
        if k == 0 or self.is_zero():
            return self
        q = self.ctx.prime**k
        out = [self.ctx.zero()] * (self.degree * q + 1)
        for j, c in enumerate(self.coeffs):
            out[j * q] = c
        return Polynomial.from_coeffs(self.ctx, out)

    def to_series(self, order: int) -> TruncSeries:
        return TruncSeries(
            tuple(self[j] for j in range(order)), self.ctx
        )

    def gauss_valuation(self):
        """min coefficient valuation; INF for the zero polynomial."""
        return min((c.valuation() for c in self.coeffs), default=float("inf"))

    def render(self) -> list:
        return [c.render() for c in self.coeffs]

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            body = c.render()
            if ("+" in body[1:]) or ("-" in body[1:]):
                body = f"({body})"
            parts.append(body if j == 0 else f"{body}*z^{j}" if j > 1 else f"{body}*z")
        return " + ".join(parts)


def no_roots_in_open_unit_disc(b: Polynomial) -> bool:
    """Newton-polygon test: nonzero at 0 and every slope from the left end
    is >= 0, i.e. v(b_j) >= v(b_0) for all j. Exactly characterizes
    denominators admissible for the unit-disc rational ring."""
    if b.is_zero() or b.constant_term().is_zero():
        return False
    v0 = b.constant_term().valuation()
    return all(c.valuation() >= v0 for c in b.coeffs)


@dataclass(frozen=True)
class RationalFunction:
    """Reduced fraction of polynomials, denominator normalized to den(0) = 1
    when the constant term is a unit (always the case for certificates)."""

    num: Polynomial
    den: Polynomial

    @classmethod
    def make(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not num.is_zero():
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        c = den.constant_term()
        if c.is_zero():
            c = next(x for x in den.coeffs if not x.is_zero())
        inv = c.inverse()
        return cls(num.scale(inv), den.scale(inv))

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "RationalFunction":
        return cls(poly, Polynomial.one(poly.ctx))

    @classmethod
    def constant(cls, ctx: PadicContext, value) -> "RationalFunction":
        return cls.from_polynomial(Polynomial.from_coeffs(ctx, [value]))

    @property
    def ctx(self) -> PadicContext:
        return self.num.ctx if not self.num.is_zero() else self.den.ctx

    def gauss_valuation(self):
        if self.num.is_zero():
            return float("inf")
        return self.num.gauss_valuation() - self.den.gauss_valuation()

    def has_gauss_norm_one(self) -> bool:
        return self.gauss_valuation() == 0

    def denominator_unit_disc_free(self) -> bool:
        return no_roots_in_open_unit_disc(self.den)

    def series_coefficients(self):
        """Stream the Taylor coefficients via den * S = num; needs den(0) != 0."""
        d0 = self.den.constant_term()
        if d0.is_zero():
            raise ZeroDivisionError("denominator vanishes at 0")
        inv = d0.inverse()
        out = []
        n = 0
        while True:
            s = self.num[n]
            for k in range(1, min(n, self.den.degree) + 1):
                s = s - self.den[k] * out[n - k]
            value = inv * s
            out.append(value)
            yield value
            n += 1

    def to_series(self, order: int) -> TruncSeries:
        gen = self.series_coefficients()
        return TruncSeries(tuple(next(gen) for _ in range(order)), self.den.ctx)

    def derivative(self) -> "RationalFunction":
        num = self.num.derivative() * self.den - self.num * self.den.derivative()
        return RationalFunction.make(num, self.den * self.den)

    def divide(self, other: "RationalFunction") -> "RationalFunction":
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction.make(self.num * other.den, self.den * other.num)

    def subst_zpk(self, k: int) -> "RationalFunction":
        return RationalFunction.make(self.num.subst_zpk(k), self.den.subst_zpk(k))

    def key(self):
        return (
            tuple(c.parts for c in self.num.coeffs),
            tuple(c.parts for c in self.den.coeffs),
        )

    def render(self) -> dict:
        return {"num": self.num.render(), "den": self.den.render()}

    def __str__(self):
        if self.den.degree <= 0:
            return str(self.num)
        return f"({self.num})/({self.den})"


# -- Pade reconstruction -----------------------------------------------------

VERIFY_OK = "ok"
VERIFY_FAIL = "fail"
VERIFY_NOT_K0 = "not-in-k0"


def pade_pairs(f: TruncSeries, window: int):
    """Extended Euclid on (z^window, f mod z^window).

    Yields (r, t) pairs with t*f = r mod z^window, in order of increasing
    denominator degree. Each pair is canonical only up to a nonzero scalar
    (consumers normalize via RationalFunction.make); for an integral prefix
    the first pair is the truncation itself with t = 1.
    """
    ctx = f.ctx
    if ctx.e == 1:
        # rational coefficients: run the chain fraction-free over the
        # integers, which avoids the gcd storm of exact Fraction remainders
        yield from _pade_pairs_prs(f, window)
        return
    r_prev = Polynomial.monomial(ctx, window)
    r_cur = Polynomial.from_series_prefix(f, window)
    t_prev = Polynomial.zero(ctx)
    t_cur = Polynomial.one(ctx)
    if r_cur.is_zero():
        yield r_cur, t_cur
        return
    while not r_cur.is_zero():
        yield r_cur, t_cur
        q, rem = r_prev.divmod(r_cur)
        r_prev, r_cur = r_cur, rem
        t_prev, t_cur = t_cur, t_prev - q * t_cur


def _int_poly(ctx: PadicContext, values) -> Polynomial:
    return Polynomial(
        tuple(Coefficient((Fraction(v),), ctx) for v in values), ctx
    )


def _content_normalized(r, t):
    g = math.gcd(*(abs(x) for x in r), *(abs(x) for x in t))
    if g > 1:
        r = [x // g for x in r]
        t = [x // g for x in t]
    return r, t


def _pade_pairs_prs(f: TruncSeries, window: int):
    """pade_pairs over plain rationals as a primitive integer remainder
    sequence: denominators cleared once, pseudo-division over the integers,
    each row divided by its content. Every yielded pair is an integer scalar
    multiple of the exact-division pair of the same chain position, so the
    projective stream (and everything downstream of make) is unchanged while
    coefficient growth stays linear instead of compounding.
    """
    ctx = f.ctx
    prefix = [c.parts[0] for c in f.coeffs[:window]]
    scale = math.lcm(*(fr.denominator for fr in prefix)) if prefix else 1
    r_cur = [int(fr * scale) for fr in prefix]
    while r_cur and r_cur[-1] == 0:
        r_cur.pop()
    r_cur, t_cur = _content_normalized(r_cur, [scale])
    r_prev = [0] * window + [1]
    t_prev: list = []
    if not r_cur:
        yield _int_poly(ctx, r_cur), _int_poly(ctx, t_cur)
        return
    while r_cur:
        yield _int_poly(ctx, r_cur), _int_poly(ctx, t_cur)
        lead = r_cur[-1]
        deg = len(r_cur) - 1
        shift = len(r_prev) - len(r_cur)
        rem = list(r_prev)
        quot = [0] * (shift + 1)
        lam = 1
        for k in range(shift, -1, -1):
            c = rem[k + deg]
            if c == 0:
                continue
            # row op: rem <- lead*rem - c*z^k*r_cur, same multiplier on quot
            lam *= lead
            quot = [lead * x for x in quot]
            quot[k] = c
            rem = [lead * x for x in rem]
            for j, b in enumerate(r_cur):
                rem[k + j] -= c * b
        while rem and rem[-1] == 0:
            rem.pop()
        t_new = [lam * x for x in t_prev] + [0] * max(
            0, len(quot) + len(t_cur) - 1 - len(t_prev)
        )
        for i, qc in enumerate(quot):
            if qc == 0:
                continue
            for j, tc in enumerate(t_cur):
                t_new[i + j] -= qc * tc
        while t_new and t_new[-1] == 0:
            t_new.pop()
        if rem or t_new:
            rem, t_new = _content_normalized(rem, t_new)
        r_prev, t_prev = r_cur, t_cur
        r_cur, t_cur = rem, t_new


def raw_congruence_check(num, den, target, m, upto) -> bool:
    """Congruence screen on an unreduced (num, den) pair.

    Equivalent to the congruence part of congruence_outcome (the pair and
    its reduced form expand to the same series), but skips the gcd, so it
    is the cheap first look at a Pade pair.
    """
    ctx = target.ctx
    if ctx.e == 1 and m < 4096:
        fast = _raw_congruence_residues(num, den, target, m, upto, ctx)
        if fast is not None:
            return fast
    inv = den.constant_term().inverse()
    out = []
    for n in range(upto):
        s = num[n]
        for k in range(1, min(n, den.degree) + 1):
            s = s - den[k] * out[n - k]
        value = inv * s
        out.append(value)
        if (value - target[n]).valuation() < m:
            return False
    return True


def _raw_congruence_residues(num, den, target, m, upto, ctx):
    """raw_congruence_check in the residue ring Z/p^m.

    Sound when pi = p up to a unit and everything in sight is p-integral
    with an invertible denominator constant: the quotient stream is then
    p-integral, reduction mod p^m commutes with the recurrence, and two
    integral values differ by valuation < m exactly when their residues
    differ. Returns None (caller falls back to exact arithmetic) whenever a
    precondition fails.
    """
    p = ctx.prime
    pm = p**m

    def residue(fr):
        d = fr.denominator
        if d == 1:
            return fr.numerator % pm
        if d % p == 0:
            return None
        return fr.numerator * pow(d, -1, pm) % pm

    nres = []
    for c in num.coeffs:
        r = residue(c.parts[0])
        if r is None:
            return None
        nres.append(r)
    dres = []
    for c in den.coeffs:
        r = residue(c.parts[0])
        if r is None:
            return None
        dres.append(r)
    if not dres or dres[0] % p == 0:
        return None
    inv0 = pow(dres[0], -1, pm)
    dd = len(dres) - 1
    out = []
    for n in range(upto):
        s = nres[n] if n < len(nres) else 0
        for k in range(1, min(n, dd) + 1):
            dk = dres[k]
            if dk:
                s -= dk * out[n - k]
        value = inv0 * s % pm
        out.append(value)
        want = residue(target[n].parts[0])
        if want is None:
            return None
        if value != want:
            return False
    return True


def reconstruct_rational(
    sources, deg_bound: int, verify, what: str, raw_verify=None
) -> RationalFunction:
    """Search for a verified rational certificate of degrees <= deg_bound.

    sources is a list of TruncSeries to run the window sweep on (typically
    the exact series and the canonical lift of its residue). verify is a
    callback returning one of the VERIFY_* outcomes; the first candidate to
    verify is returned. Raises NotInK0 if candidates matched the congruence
    but only ever failed the unit-disc test, else ReconstructionFailed.

    raw_verify, when given, is a fast rejector taking the unreduced
    (num, den) pair; returning False must imply verify would fail, and the
    reduction to lowest terms is then skipped for that pair.
    """
    seen = set()
    saw_k0_reject = False
    for src in sources:
        max_window = min(2 * deg_bound + 1, src.order)
        for window in range(1, max_window + 1):
            for r, t in pade_pairs(src, window):
                if t.degree > deg_bound:
                    break  # denominator degrees only grow along the pairs
                if r.degree > deg_bound:
                    continue
                if t.constant_term().is_zero():
                    continue
                if raw_verify is not None and not raw_verify(r, t):
                    continue
                cand = RationalFunction.make(r, t)
                key = cand.key()
                if key in seen:
                    continue
                seen.add(key)
                outcome = verify(cand)
                if outcome == VERIFY_OK:
                    return cand
                if outcome == VERIFY_NOT_K0:
                    saw_k0_reject = True
    if saw_k0_reject:
        raise NotInK0(f"{what}: congruence held but a denominator root lies in the open unit disc")
    raise ReconstructionFailed(
        f"{what}: no certificate of degree <= {deg_bound}", deg_bound=deg_bound
    )


def congruence_outcome(cand, target, m, upto, require_norm_one):
    """Shared verification: congruence on the window, then norm and poles.

    Streams the candidate's coefficients and exits at the first discrepancy,
    so junk candidates (which agree only on their Pade window) are cheap.
    """
    if cand.den.constant_term().is_zero():
        return VERIFY_FAIL
    gen = cand.series_coefficients()
    for j in range(upto):
        if (next(gen) - target[j]).valuation() < m:
            return VERIFY_FAIL
    if require_norm_one and not cand.has_gauss_norm_one():
        return VERIFY_FAIL
    if not cand.denominator_unit_disc_free():
        return VERIFY_NOT_K0
    return VERIFY_OK


def product_congruence_outcome(cand, mult, target, m, upto, require_norm_one):
    """Verification for congruences of the shape cand * mult = target.

    Same contract as congruence_outcome, but the candidate is checked through
    a running convolution with the series mult, again exiting at the first
    discrepancy.
    """
    if cand.den.constant_term().is_zero():
        return VERIFY_FAIL
    gen = cand.series_coefficients()
    head = []
    for j in range(upto):
        head.append(next(gen))
        s = target[j]
        for i, c in enumerate(head):
            if not c.is_zero():
                m_coeff = mult[j - i]
                if not m_coeff.is_zero():
                    s = s - c * m_coeff
        if s.valuation() < m:
            return VERIFY_FAIL
    if require_norm_one and not cand.has_gauss_norm_one():
        return VERIFY_FAIL
    if not cand.denominator_unit_disc_free():
        return VERIFY_NOT_K0
    return VERIFY_OK


def canonical_lift(f: TruncSeries, m: int) -> TruncSeries:
    """Coefficientwise canonical residue representative mod pi^m.

    Exposes rational structure that only exists modulo pi^m; used as the
    second Pade source. Requires integral coefficients.
    """
    return TruncSeries(tuple(c.reduce_mod(m) for c in f.coeffs), f.ctx)


def doubling_search(attempt, start: int = 4, cap: int = 64):
    """Run attempt(deg_bound) with doubling bounds until success or the cap.

    The certificate degrees are not predictable in advance, so this helper
    makes the honest search explicit instead of hiding a magic bound.
    """
    bound = start
    while True:
        try:
            return attempt(bound)
        except ReconstructionFailed:
            if bound >= cap:
                raise
            bound = min(2 * bound, cap)
