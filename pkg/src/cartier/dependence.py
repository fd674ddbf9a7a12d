"""Multiplicative-relation scan over integer exponent boxes.

A tuple (a_1, .., a_m) is a candidate relation when prod f_i^(a_i) is
congruent, modulo pi^M, to a rational function with no poles in the open
unit disc. The scan walks primitive sign-normalized rays of the box and
reports the smallest certified multiple on each ray; a report always carries
both the product certificate and the certificate for the linear combination
sum a_i f_i'/f_i, which is checked first since a failure there rules the
ray multiple out cheaply.

Absence of findings is bounded evidence, not a proof: the report embeds the
box, the level, and the degree bound it was computed with.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import NotAUnit, NotInK0, ReconstructionFailed
from .frobenius import Certificate
from .rational import (
    canonical_lift,
    congruence_outcome,
    raw_congruence_check,
    reconstruct_rational,
)
from .series import TruncSeries


def product_power(fs, exps) -> TruncSeries:
    """prod f_i^(a_i) at the common reliable order.

    Zero exponents contribute nothing; negative ones go through the series
    inverse, so those factors need a unit constant term.
    """
    fs = list(fs)
    if len(fs) != len(exps):
        raise ValueError("one exponent per series")
    if not fs:
        raise ValueError("empty product has no context to live in")
    order = min(f.order for f in fs)
    acc = TruncSeries.one(fs[0].ctx, order)
    for f, a in zip(fs, exps):
        if a == 0:
            continue
        acc = acc * f.truncate(order).pow_int(a)
    return acc


def _certificate(g: TruncSeries, level: int, deg_bound: int, kind: str):
    """Certified rational congruent to g mod pi^level, or None."""
    upto = g.order
    sources = [g]
    if g.min_valuation() >= 0:
        sources.append(canonical_lift(g, level))

    def verify(cand):
        return congruence_outcome(cand, g, level, upto, require_norm_one=False)

    def raw_verify(num, den):
        return raw_congruence_check(num, den, g, level, upto)

    try:
        cand = reconstruct_rational(sources, deg_bound, verify, kind, raw_verify)
    except (ReconstructionFailed, NotInK0):
        return None
    resid = (cand.to_series(upto) - g.truncate(upto)).min_valuation()
    return Certificate(kind, level, cand, upto, resid)


def analytic_element_certificate(g: TruncSeries, level: int, deg_bound: int):
    """Rational witness that g is, to this precision, an analytic element:
    R with no poles in the open unit disc and R congruent to g mod pi^level.
    Returns None when the search space is exhausted; that is a bounded
    negative, not an error.
    """
    if g.min_valuation() < 0:
        raise ValueError("certificate search expects integral coefficients")
    cert = _certificate(g, level, deg_bound, "analytic-element")
    return None if cert is None else cert.rational


@dataclass(frozen=True)
class Finding:
    exponents: tuple
    product: Certificate
    screen: Certificate

    def to_json_dict(self) -> dict:
        return {
            "exponents": list(self.exponents),
            "product": self.product.to_json_dict(),
            "logderiv": self.screen.to_json_dict(),
        }


@dataclass(frozen=True)
class DependenceReport:
    series_names: tuple
    exp_bound: int
    level: int
    deg_bound: int
    derivative_orders: object
    findings: tuple
    stats: dict

    def to_json_dict(self) -> dict:
        return {
            "series": list(self.series_names),
            "exp_bound": self.exp_bound,
            "level": self.level,
            "deg_bound": self.deg_bound,
            "derivative_orders": None
            if self.derivative_orders is None
            else list(self.derivative_orders),
            "findings": [f.to_json_dict() for f in self.findings],
            "stats": dict(self.stats),
        }


def _primitive_rays(m: int, bound: int) -> list:
    out = []
    for cand in itertools.product(range(-bound, bound + 1), repeat=m):
        if all(x == 0 for x in cand):
            continue
        first = next(x for x in cand if x != 0)
        if first < 0:
            continue
        if math.gcd(*(abs(x) for x in cand)) != 1:
            continue
        out.append(cand)
    out.sort()
    return out


def _normalized_derivative(f: TruncSeries, r: int) -> TruncSeries:
    """r-th derivative divided by its leading term c z^k, so it starts at 1."""
    g = f
    for _ in range(r):
        g = g.d_dz()
    lead = next((j for j in range(g.order) if not g[j].is_zero()), None)
    if lead is None:
        raise ValueError("derivative vanished to the reliable order")
    inv = g[lead].inverse()
    return TruncSeries(tuple(inv * c for c in g.coeffs[lead:]), g.ctx)


def kolchin_scan(
    fs,
    exp_bound: int,
    level: int,
    deg_bound: int,
    derivative_orders=None,
    names=None,
) -> DependenceReport:
    """Walk the exponent box and certify multiplicative relations.

    Per primitive sign-normalized ray u, multiples d*u are tried in
    increasing d while they fit the box, and the first certified multiple is
    the ray's report. Worker count is capped by the PADIC_THREADS
    environment variable; results are merged in lexicographic tuple order
    either way.
    """
    fs = list(fs)
    m = len(fs)
    if m == 0:
        raise ValueError("at least one series is required")
    if names is None:
        names = tuple(f"f{i + 1}" for i in range(m))
    else:
        names = tuple(names)
        if len(names) != m:
            raise ValueError("one name per series")
    if derivative_orders is not None:
        if len(derivative_orders) != m:
            raise ValueError("one derivative order per series")
        gs = [_normalized_derivative(f, r) for f, r in zip(fs, derivative_orders)]
        derivative_orders = tuple(derivative_orders)
    else:
        for f in fs:
            if f.order == 0 or f[0] != 1:
                raise NotAUnit("scan needs constant term 1 (or derivative orders)")
        gs = fs
    logs = [g.log_derivative() for g in gs]
    screen_order = min(l.order for l in logs)
    rays = _primitive_rays(m, exp_bound)

    def eval_ray(u):
        tested = 0
        screened_out = 0
        d = 1
        while d * max(abs(x) for x in u) <= exp_bound:
            a = tuple(d * x for x in u)
            tested += 1
            combo = TruncSeries.zero(gs[0].ctx, screen_order)
            for coeff, l in zip(a, logs):
                if coeff:
                    combo = combo + l.truncate(screen_order) * coeff
            screen = None
            if combo.min_valuation() >= 0:
                screen = _certificate(combo, level, deg_bound, "logderiv-screen")
            if screen is None:
                screened_out += 1
                d += 1
                continue
            prod = product_power(gs, a)
            product = None
            if prod.min_valuation() >= 0:
                product = _certificate(prod, level, deg_bound, "product")
            if product is None:
                d += 1
                continue
            return Finding(a, product, screen), tested, screened_out
        return None, tested, screened_out

    workers = max(1, int(os.environ.get("PADIC_THREADS", "1")))
    if workers == 1:
        results = [eval_ray(u) for u in rays]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(eval_ray, rays))

    findings = sorted(
        (r[0] for r in results if r[0] is not None), key=lambda f: f.exponents
    )
    stats = {
        "rays": len(rays),
        "tuples_tested": sum(r[1] for r in results),
        "screened_out": sum(r[2] for r in results),
        "findings": len(findings),
    }
    return DependenceReport(
        names, exp_bound, level, deg_bound, derivative_orders, tuple(findings), stats
    )
