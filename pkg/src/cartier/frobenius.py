"""Frobenius antecedents, passage matrices, and rational congruence
certificates.

The central construction: given a MOM operator L with companion A, one step
produces an operator L1 whose unit solution is the Cartier transform of L's,
together with a passage matrix H with H(0) = diag(1, p, .., p^(n-1)) and

    delta(H) = A H - p H A1(z^p).

Iterating the step on L1, L2, .. and composing passages gives the level-m
data. Every identity is re-verified on the truncations before anything is
returned; a failure means the input operator lies outside the class the
construction is valid for, and is reported with the first offending order.

Certificates are rational functions congruent, modulo a power of pi, to
structured ratios of a series and its Cartier/Frobenius transforms. They are
searched for by Pade reconstruction and always re-verified against the
defining congruence, coefficient by coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diffops import DiffOp, SeriesMatrix, uniform_part
from .errors import (
    BadParameters,
    NotInK0,
    NotMOM,
    OrderExhausted,
    ReconstructionFailed,
    VerificationFailed,
)
from .rational import (
    RationalFunction,
    VERIFY_NOT_K0,
    VERIFY_OK,
    canonical_lift,
    congruence_outcome,
    product_congruence_outcome,
    reconstruct_rational,
)
from .rings import INF, PadicContext
from .series import TruncSeries


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _power_diag(ctx: PadicContext, n: int, exponent: int):
    p = ctx.prime
    return [
        [ctx.coeff(p ** (exponent * i)) if i == j else ctx.zero() for j in range(n)]
        for i in range(n)
    ]


def _first_nonzero_order(m: SeriesMatrix):
    for j in range(m.order):
        for row in m.rows:
            for entry in row:
                if not entry[j].is_zero():
                    return j
    return None


@dataclass(frozen=True)
class AntecedentLevel:
    """One level of the antecedent chain, with its verification data."""

    level: int
    operator: DiffOp
    companion: SeriesMatrix
    passage: SeriesMatrix
    residual: SeriesMatrix
    checked_order: int
    passage_min_valuation: object

    def to_json_dict(self) -> dict:
        rv = self.residual.min_valuation()
        return {
            "level": self.level,
            "operator_order": self.operator.order,
            "checked_order": self.checked_order,
            "passage_min_valuation": _json_val(self.passage_min_valuation),
            "residual_min_valuation": _json_val(rv),
        }


def _json_val(v):
    return None if v == INF else v


def antecedent_step(L: DiffOp, order: int) -> AntecedentLevel:
    """One Cartier descent step.

    Computes the uniform part Y of the companion system, reads the descended
    operator off the last row of F = (delta(C) + (1/p) C A(0)) C^(-1) with
    C the Cartier transform of Y, and builds the passage matrix
    H = Y (C(z^p))^(-1) diag(1, p, .., p^(n-1)). The defining identity, the
    value at 0, entry integrality, and annihilation of the transformed
    solution are all checked on the truncations.
    """
    if not L.is_mom:
        raise NotMOM("antecedent step needs vanishing coefficients at 0")
    if L.series_order < order:
        raise OrderExhausted(
            f"operator coefficients reliable to {L.series_order} < {order}"
        )
    ctx = L.ctx
    p = ctx.prime
    n = L.order
    A = L.companion().truncate(order)
    Y = uniform_part(A, order)
    C = Y.cartier()
    a0_over_p = [[c * Fraction(1, p) for c in row] for row in A.constant_matrix()]
    F = (C.delta() + C.matmul_const(a0_over_p)).matmul(C.invert_series())
    # monic coefficient of delta^(n-k) is -(1/p^(k-1)) * F[n, n-k+1]
    coeffs = tuple(
        F.entry(n - 1, n - k) * Fraction(-1, p ** (k - 1)) for k in range(1, n + 1)
    )
    L1 = DiffOp(coeffs, ctx)
    A1 = L1.companion()
    passage = (
        Y.matmul(C.subst_zpk(1).invert_series())
        .matmul_const(_power_diag(ctx, n, 1))
        .truncate(order)
    )
    return _verified_level(1, L, L1, A1, passage, A, L.unit_solution(order).cartier())


def _verified_level(level, L, Lk, Ak, passage, A, transformed) -> AntecedentLevel:
    """Run every level invariant; raise VerificationFailed on the first miss."""
    ctx = L.ctx
    p = ctx.prime
    n = L.order
    residual = (
        passage.delta()
        - A.matmul(passage)
        + passage.matmul(Ak.subst_zpk(level)).scale(ctx.coeff(p**level))
    )
    bad = _first_nonzero_order(residual)
    if bad is not None:
        raise VerificationFailed(
            f"passage identity fails at level {level}", order=bad
        )
    if passage.constant_matrix() != _power_diag(ctx, n, level):
        raise VerificationFailed(
            f"passage matrix at level {level} has the wrong value at 0", order=0
        )
    min_val = passage.min_valuation()
    if min_val < 0:
        raise VerificationFailed(
            f"passage matrix at level {level} has a negative-valuation entry"
        )
    ann = Lk.apply(transformed.truncate(Lk.series_order))
    bad = next((j for j in range(ann.order) if not ann[j].is_zero()), None)
    if bad is not None:
        raise VerificationFailed(
            f"level-{level} operator does not annihilate the transformed solution",
            order=bad,
        )
    return AntecedentLevel(
        level, Lk, Ak, passage, residual, residual.order, min_val
    )


def antecedent_chain(L: DiffOp, levels: int, order: int) -> list:
    """Iterate the descent, composing passages: H_(k) = H_(k-1) G(z^(p^(k-1)))
    where G is the single-step passage of the level k-1 operator.
    """
    if levels == 0:
        return []
    ctx = L.ctx
    p = ctx.prime
    if _ceil_div(order, p**levels) < 2:
        raise OrderExhausted(
            f"order {order} cannot support {levels} levels at p = {p}"
        )
    out = [antecedent_step(L, order)]
    A = L.companion().truncate(order)
    transformed = L.unit_solution(order).cartier()
    for k in range(2, levels + 1):
        prev = out[-1]
        step = antecedent_step(prev.operator, prev.operator.series_order)
        passage = prev.passage.matmul(step.passage.subst_zpk(k - 1)).truncate(order)
        transformed = transformed.cartier()
        out.append(
            _verified_level(
                k, L, step.operator, step.companion, passage, A, transformed
            )
        )
    return out


# -- optional series-kernel cross-check --------------------------------------


def cartier_kernel_terms(A: SeriesMatrix, count: int) -> list:
    """Terms of the iterated-derivation sequence: T_0 = I and
    T_(j+1) = delta(T_j) + T_j (A - jI). Used only as a consistency check
    on small j; the full kernel series is never summed.
    """
    ctx = A.ctx
    terms = [SeriesMatrix.identity(ctx, A.size, A.order)]
    for j in range(count - 1):
        t = terms[-1]
        shift = [
            [
                -ctx.coeff(j) if a == b else ctx.zero()
                for b in range(A.size)
            ]
            for a in range(A.size)
        ]
        terms.append(t.delta() + t.matmul(A) + t.matmul_const(shift))
    return terms


def cyclotomic_weight(ctx: PadicContext, j: int):
    """Weight attached to the j-th kernel term; only j = 0 is provided
    (value 1), which is all the consistency check consumes."""
    if j != 0:
        raise BadParameters("only the j = 0 weight is available")
    return ctx.one()


# -- integrality -------------------------------------------------------------


@dataclass(frozen=True)
class IntegralityReport:
    level: int
    checked_upto: int
    min_valuation: object
    first_failure: object

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "checked_upto": self.checked_upto,
            "min_valuation": _json_val(self.min_valuation),
            "first_failure": self.first_failure,
            "passed": self.passed,
        }


def integrality_check(f: TruncSeries, level: int) -> IntegralityReport:
    """Valuations of f_1 .. f_(p^level - 1), capped by the reliable order.

    Passes when every checked coefficient has valuation >= 0; the first
    failing index is reported, never raised: a failure is a finding.
    """
    _require_unit_start(f)
    upto = min(f.ctx.prime**level - 1, f.order - 1)
    min_val = INF
    first_failure = None
    for j in range(1, upto + 1):
        v = f[j].valuation()
        if v < min_val:
            min_val = v
        if v < 0 and first_failure is None:
            first_failure = j
            break
    checked = upto if first_failure is None else first_failure
    return IntegralityReport(level, max(checked, 0), min_val, first_failure)


def _require_unit_start(f: TruncSeries):
    if f.order == 0 or f[0] != 1:
        raise ValueError("series must have constant term 1")


# -- certificates ------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """A verified rational congruence, with its diagnostics.

    min_residual_valuation is the smallest valuation of the defining
    congruence's residual over the checked window; INF means the certificate
    is exact at this truncation.
    """

    kind: str
    level: int
    rational: RationalFunction
    verified_order: int
    min_residual_valuation: object

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "level": self.level,
            "rational": self.rational.render(),
            "verified_order": self.verified_order,
            "min_residual_valuation": _json_val(self.min_residual_valuation),
        }


def _sources(g: TruncSeries, m: int) -> list:
    out = [g]
    if g.min_valuation() >= 0:
        out.append(canonical_lift(g, m))
    return out


def _product_residual(cand, mult, target, upto):
    resid = cand.to_series(upto) * mult.truncate(upto) - target.truncate(upto)
    return resid.min_valuation()


def _direct_residual(cand, target, upto):
    return (cand.to_series(upto) - target.truncate(upto)).min_valuation()


def ratio_certificate(f: TruncSeries, m: int, deg_bound: int) -> Certificate:
    """D with D(z) (Cartier f)(z^p) congruent to f mod pi^m."""
    _require_unit_start(f)
    u = f.cartier().subst_zpk(1)
    upto = min(f.order, u.order)
    u = u.truncate(upto)
    target = f.truncate(upto)
    g = target * u.invert_unit()

    def verify(cand):
        return product_congruence_outcome(cand, u, target, m, upto, require_norm_one=True)

    cand = reconstruct_rational(_sources(g, m), deg_bound, verify, "ratio certificate")
    return Certificate("ratio", m, cand, upto, _product_residual(cand, u, target, upto))


def period_ratio_certificate(f: TruncSeries, h: int, k: int, deg_bound: int) -> Certificate:
    """Q with Q congruent to (Cartier^(kh) f) / f mod pi^(kh)."""
    _require_unit_start(f)
    kh = k * h
    lam = f
    for _ in range(kh):
        lam = lam.cartier()
    if lam.order < 2:
        raise OrderExhausted(
            f"{kh}-fold Cartier transform leaves order {lam.order} < 2"
        )
    upto = lam.order
    g = lam * f.truncate(upto).invert_unit()

    def verify(cand):
        return congruence_outcome(cand, g, kh, upto, require_norm_one=True)

    cand = reconstruct_rational(_sources(g, kh), deg_bound, verify, "period certificate")
    return Certificate("period-ratio", kh, cand, upto, _direct_residual(cand, g, upto))


def frobenius_ratio_certificate(f: TruncSeries, h: int, k: int, deg_bound: int) -> Certificate:
    """B with f congruent to B(z) f(z^(p^(kh))) mod pi^(kh)."""
    _require_unit_start(f)
    kh = k * h
    if k == 0:
        return Certificate(
            "frobenius-ratio", 0, RationalFunction.constant(f.ctx, 1), f.order, INF
        )
    u = f.subst_zpk(kh).truncate(f.order)
    upto = f.order
    g = f * u.invert_unit()

    def verify(cand):
        return product_congruence_outcome(cand, u, f, kh, upto, require_norm_one=True)

    cand = reconstruct_rational(
        _sources(g, kh), deg_bound, verify, "frobenius ratio certificate"
    )
    return Certificate("frobenius-ratio", kh, cand, upto, _product_residual(cand, u, f, upto))


def successive_frobenius_quotient(f: TruncSeries, h: int, k: int, deg_bound: int) -> Certificate:
    """The quotient B_((k+1)h) / B_(kh)(z^(p^h)), verified against
    f / f(z^(p^h)) mod pi^(kh). Derived from two ratio certificates rather
    than searched, then re-checked like everything else.
    """
    kh = k * h
    b_next = frobenius_ratio_certificate(f, h, k + 1, deg_bound).rational
    b_cur = frobenius_ratio_certificate(f, h, k, deg_bound).rational
    quot = b_next.divide(b_cur.subst_zpk(h))
    u = f.subst_zpk(h).truncate(f.order)
    upto = f.order
    outcome = product_congruence_outcome(quot, u, f, kh, upto, require_norm_one=True)
    if outcome == VERIFY_NOT_K0:
        raise NotInK0("successive quotient denominator has a root in the open unit disc")
    if outcome != VERIFY_OK:
        raise VerificationFailed("successive quotient fails its congruence")
    return Certificate(
        "frobenius-quotient", kh, quot, upto, _product_residual(quot, u, f, upto)
    )


def logderiv_certificate(f: TruncSeries, h: int, level: int, deg_bound: int) -> Certificate:
    """R congruent to f'/f mod pi^level, denominator pole-free on the open
    unit disc. No Gauss-norm requirement: f'/f need not have norm 1.

    Falls back to differentiating a Frobenius ratio certificate when direct
    reconstruction finds nothing at this degree bound.
    """
    _require_unit_start(f)
    g = f.log_derivative()
    upto = g.order

    def verify(cand):
        return congruence_outcome(cand, g, level, upto, require_norm_one=False)

    try:
        cand = reconstruct_rational(
            _sources(g, level), deg_bound, verify, "log-derivative certificate"
        )
    except ReconstructionFailed:
        return logderiv_from_frobenius(f, h, level, deg_bound)
    return Certificate("logderiv", level, cand, upto, _direct_residual(cand, g, upto))


def logderiv_from_frobenius(f: TruncSeries, h: int, level: int, deg_bound: int) -> Certificate:
    """Alternate route: R = B'/B for a Frobenius ratio certificate B at a
    level covering pi^level, re-verified against f'/f directly."""
    k = _ceil_div(level, h)
    b = frobenius_ratio_certificate(f, h, k, deg_bound).rational
    cand = b.derivative().divide(b)
    g = f.log_derivative()
    upto = g.order
    outcome = congruence_outcome(cand, g, level, upto, require_norm_one=False)
    if outcome == VERIFY_NOT_K0:
        raise NotInK0("log-derivative denominator has a root in the open unit disc")
    if outcome != VERIFY_OK:
        raise VerificationFailed("differentiated certificate misses the congruence")
    return Certificate("logderiv", level, cand, upto, _direct_residual(cand, g, upto))
