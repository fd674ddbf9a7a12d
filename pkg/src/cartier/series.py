"""Truncated power series over a p-adic context.

A TruncSeries stores exactly the coefficients it is reliable for: index j is
the coefficient of z^j and the length of the tuple is the reliable order.
Every operation returns a series whose length reflects how far the result can
be trusted; in particular the Cartier operator divides the order by p and
substitution z -> z^(p^k) multiplies it, so chained computations keep honest
bookkeeping without a separate precision field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParameters, NotAUnit
from .rings import Coefficient, PadicContext


@dataclass(frozen=True)
class TruncSeries:
    coeffs: tuple
    ctx: PadicContext

    # -- construction --------------------------------------------------------

    @classmethod
    def from_coeffs(cls, ctx: PadicContext, values) -> "TruncSeries":
        return cls(tuple(ctx.coeff(v) for v in values), ctx)

    @classmethod
    def zero(cls, ctx: PadicContext, order: int) -> "TruncSeries":
        return cls((ctx.zero(),) * order, ctx)

    @classmethod
    def one(cls, ctx: PadicContext, order: int) -> "TruncSeries":
        return cls((ctx.one(),) + (ctx.zero(),) * (order - 1), ctx)

    @property
    def order(self) -> int:
        """Number of reliable coefficients (the series is known mod z^order)."""
        return len(self.coeffs)

    def __getitem__(self, j: int) -> Coefficient:
        return self.coeffs[j]

    def constant_term(self) -> Coefficient:
        return self.coeffs[0]

    def truncate(self, upto: int) -> "TruncSeries":
        if upto > self.order:
            raise ValueError(f"only {self.order} coefficients are reliable")
        return TruncSeries(self.coeffs[:upto], self.ctx)

    # -- ring operations (result order = what both operands support) --------

    def _common(self, other):
        if isinstance(other, TruncSeries):
            if other.ctx != self.ctx:
                raise BadParameters("mixed contexts")
            return other
        raise TypeError("expected a TruncSeries")

    def __add__(self, other):
        o = self._common(other)
        n = min(self.order, o.order)
        return TruncSeries(
            tuple(a + b for a, b in zip(self.coeffs[:n], o.coeffs[:n])), self.ctx
        )

    def __sub__(self, other):
        o = self._common(other)
        n = min(self.order, o.order)
        return TruncSeries(
            tuple(a - b for a, b in zip(self.coeffs[:n], o.coeffs[:n])), self.ctx
        )

    def __neg__(self):
        return TruncSeries(tuple(-a for a in self.coeffs), self.ctx)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Coefficient)):
            c = self.ctx.coeff(other)
            return TruncSeries(tuple(c * a for a in self.coeffs), self.ctx)
        o = self._common(other)
        n = min(self.order, o.order)
        zero = self.ctx.zero()
        acc = [zero] * n
        for i in range(n):
            a = self.coeffs[i]
            if a.is_zero():
                continue
            for j in range(n - i):
                b = o.coeffs[j]
                if not b.is_zero():
                    acc[i + j] = acc[i + j] + a * b
        return TruncSeries(tuple(acc), self.ctx)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Coefficient)):
            return self * other
        return NotImplemented

    def pow_int(self, n: int) -> "TruncSeries":
        """Integer power; negative exponents go through invert_unit."""
        if n < 0:
            return self.invert_unit().pow_int(-n)
        out = TruncSeries.one(self.ctx, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.ctx.prime, self.ctx.ramification))

    def agrees_with(self, other, upto: int) -> bool:
        o = self._common(other)
        if upto > min(self.order, o.order):
            raise ValueError("comparison window beyond reliable order")
        return all(self.coeffs[j] == o.coeffs[j] for j in range(upto))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    # -- derivations and the Cartier operator --------------------------------

    def delta(self) -> "TruncSeries":
        """The derivation z d/dz: multiplies coefficient j by j."""
        return TruncSeries(
            tuple(c * j for j, c in enumerate(self.coeffs)), self.ctx
        )

    def d_dz(self) -> "TruncSeries":
        """Ordinary derivative; reliable order drops by one."""
        return TruncSeries(
            tuple(c * j for j, c in enumerate(self.coeffs))[1:], self.ctx
        )

    def cartier(self) -> "TruncSeries":
        """Coefficient extraction along multiples of p: a_n -> a_(np).

        The result is reliable to ceil(order/p).
        """
        p = self.ctx.prime
        return TruncSeries(self.coeffs[::p], self.ctx)

    def subst_zpk(self, k: int) -> "TruncSeries":
        """Substitute z -> z^(p^k); reliable order grows to order * p^k.

        The gaps are exact zeros, and the first unknown coefficient is the
        one at z^(order * p^k).
        """
        if k < 0:
            raise BadParameters("substitution exponent must be >= 0")
        if k == 0:
            return self
        q = self.ctx.prime**k
        zero = self.ctx.zero()
        out = [zero] * (self.order * q)
        for j, c in enumerate(self.coeffs):
            out[j * q] = c
        return TruncSeries(tuple(out), self.ctx)

    # -- units ---------------------------------------------------------------

    def invert_unit(self) -> "TruncSeries":
        """Multiplicative inverse mod z^order; needs a unit constant term."""
        if self.order == 0:
            return self
        f0 = self.coeffs[0]
        if f0.is_zero():
            raise NotAUnit("constant term vanishes")
        inv0 = f0.inverse()
        out = [inv0]
        for n in range(1, self.order):
            s = self.ctx.zero()
            for k in range(1, n + 1):
                fk = self.coeffs[k]
                if not fk.is_zero():
                    s = s + fk * out[n - k]
            out.append(-inv0 * s)
        return TruncSeries(tuple(out), self.ctx)

    def log_derivative(self) -> "TruncSeries":
        """f'/f, reliable to order - 1."""
        return self.d_dz() * self.invert_unit()

    def hadamard(self, other) -> "TruncSeries":
        o = self._common(other)
        n = min(self.order, o.order)
        return TruncSeries(
            tuple(a * b for a, b in zip(self.coeffs[:n], o.coeffs[:n])), self.ctx
        )

    # -- congruences ---------------------------------------------------------

    def first_discrepancy(self, other, m: int, upto: int):
        """Smallest j < upto with v(f_j - g_j) < m, or None."""
        o = self._common(other)
        if upto > min(self.order, o.order):
            raise ValueError("congruence window beyond reliable order")
        for j in range(upto):
            if (self.coeffs[j] - o.coeffs[j]).valuation() < m:
                return j
        return None

    def congruent_mod(self, other, m: int, upto: int) -> bool:
        return self.first_discrepancy(other, m, upto) is None

    def min_valuation(self, upto=None):
        """Smallest coefficient valuation on the window (INF if all zero)."""
        window = self.coeffs if upto is None else self.coeffs[:upto]
        vals = [c.valuation() for c in window]
        return min(vals, default=float("inf"))

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "p": self.ctx.prime,
            "ramification": self.ctx.ramification.value,
            "N": self.order,
            "coeffs": [c.render() for c in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TruncSeries":
        from .rings import Ramification

        ctx = PadicContext(int(data["p"]), Ramification(data["ramification"]))
        coeffs = [ctx.coeff(text) for text in data["coeffs"]]
        if len(coeffs) != int(data["N"]):
            raise BadParameters("coefficient count does not match N")
        return cls.from_coeffs(ctx, coeffs)

    def __str__(self):
        shown = ", ".join(c.render() for c in self.coeffs[:6])
        tail = ", .." if self.order > 6 else ""
        return f"[{shown}{tail}] mod z^{self.order}"
