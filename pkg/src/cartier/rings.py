"""Exact coefficient arithmetic over the two supported p-adic contexts.

A context is either unramified (elements are plain rationals, uniformizer p)
or Dwork-Eisenstein ramified: elements of Q[pi]/(pi^(p-1) + p), stored as
e = p - 1 exact rational coordinates c0..c_(e-1) on the basis 1, pi, ..,
pi^(e-1). All arithmetic is exact; nothing is ever rounded. Reduction to a
residue happens only when a congruence is actually being checked.

Valuations are reported in integer pi-units, v(pi) = 1 and v(p) = e, so that
"congruent mod pi^m" is an integer comparison in every context. For a nonzero
element sum c_i pi^i the valuation is min_i (e*v_p(c_i) + i); the terms have
distinct residues mod e, so the minimum is attained exactly once and there is
no cancellation to account for.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadParameters, NegativeValuation

INF = math.inf


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def rational_valuation(x: Fraction, p: int):
    """p-adic valuation of a rational, INF for zero."""
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


class Ramification(enum.Enum):
    UNRAMIFIED = "unramified"
    DWORK = "dwork"


@dataclass(frozen=True)
class PadicContext:
    """Identity of the coefficient ring: the prime and the ramification.

    trunc_order and level are bookkeeping defaults for series built from this
    context; they do not participate in equality, so contexts that agree on
    the ring itself compare equal.
    """

    prime: int
    ramification: Ramification
    trunc_order: int = field(default=32, compare=False)
    level: int = field(default=1, compare=False)

    def __post_init__(self):
        if not _is_prime(self.prime):
            raise BadParameters(f"{self.prime} is not prime")
        if self.trunc_order < 1:
            raise BadParameters("truncation order must be >= 1")

    @classmethod
    def unramified(cls, p: int, trunc_order: int = 32, level: int = 1) -> "PadicContext":
        return cls(p, Ramification.UNRAMIFIED, trunc_order, level)

    @classmethod
    def dwork(cls, p: int, trunc_order: int = 32, level: int = 1) -> "PadicContext":
        """Context for Q_p(pi) with pi a root of X^(p-1) + p.

        For p = 2 the relation degenerates to pi = -2 and the field is Q_2
        again, with e = 1.
        """
        return cls(p, Ramification.DWORK, trunc_order, level)

    @property
    def e(self) -> int:
        """Ramification index; v(p) = e in pi-units."""
        if self.ramification is Ramification.UNRAMIFIED:
            return 1
        return max(self.prime - 1, 1)

    def coeff(self, x) -> "Coefficient":
        """Coerce an int, Fraction, component tuple, or text form."""
        if isinstance(x, Coefficient):
            if x.ctx != self:
                raise BadParameters("coefficient from a different context")
            return x
        if isinstance(x, str):
            return parse_coefficient(x, self)
        if isinstance(x, (list, tuple)):
            parts = [Fraction(c) for c in x]
            if len(parts) > self.e:
                raise BadParameters("too many pi-components for this context")
            parts += [Fraction(0)] * (self.e - len(parts))
            return Coefficient(tuple(parts), self)
        parts = (Fraction(x),) + (Fraction(0),) * (self.e - 1)
        return Coefficient(parts, self)

    def zero(self) -> "Coefficient":
        return self.coeff(0)

    def one(self) -> "Coefficient":
        return self.coeff(1)

    def pi(self) -> "Coefficient":
        """The uniformizer: p when unramified, else the Eisenstein root.

        Dwork p = 2 is the degenerate case pi = -2.
        """
        if self.ramification is Ramification.UNRAMIFIED:
            return self.coeff(self.prime)
        if self.e == 1:
            return self.coeff(-self.prime)
        return self.coeff((0, 1))


@dataclass(frozen=True)
class Coefficient:
    """An exact element sum_i parts[i] * pi^i of the context's field."""

    parts: tuple
    ctx: PadicContext

    def __post_init__(self):
        if len(self.parts) != self.ctx.e:
            raise BadParameters("component count must equal the ramification index")

    # -- ring structure -----------------------------------------------------

    def _lift(self, other) -> "Coefficient":
        if isinstance(other, Coefficient):
            if other.ctx != self.ctx:
                raise BadParameters("mixed contexts")
            return other
        return self.ctx.coeff(other)

    def __add__(self, other):
        o = self._lift(other)
        return Coefficient(tuple(a + b for a, b in zip(self.parts, o.parts)), self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(tuple(-a for a in self.parts), self.ctx)

    def __sub__(self, other):
        o = self._lift(other)
        return Coefficient(tuple(a - b for a, b in zip(self.parts, o.parts)), self.ctx)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        e = self.ctx.e
        if e == 1:
            return Coefficient((self.parts[0] * o.parts[0],), self.ctx)
        p = self.ctx.prime
        acc = [Fraction(0)] * e
        for i, a in enumerate(self.parts):
            if a == 0:
                continue
            for j, b in enumerate(o.parts):
                if b == 0:
                    continue
                k = i + j
                if k < e:
                    acc[k] += a * b
                else:
                    # pi^e = -p folds the overflow back down
                    acc[k - e] += -p * a * b
        return Coefficient(tuple(acc), self.ctx)

    __rmul__ = __mul__

    def inverse(self) -> "Coefficient":
        """Exact field inverse, by solving the multiplication matrix."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        e = self.ctx.e
        if e == 1:
            return Coefficient((1 / self.parts[0],), self.ctx)
        pi = self.ctx.pi()
        cols = []
        power = self
        for _ in range(e):
            cols.append(power.parts)
            power = power * pi
        # rows[i][j] = component i of self*pi^j; solve M x = e_0
        m = [[cols[j][i] for j in range(e)] for i in range(e)]
        rhs = [Fraction(1)] + [Fraction(0)] * (e - 1)
        sol = _solve_exact(m, rhs)
        return Coefficient(tuple(sol), self.ctx)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ctx.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.coeff(other)
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.ctx == other.ctx and self.parts == other.parts

    def __hash__(self):
        return hash((self.parts, self.ctx.prime, self.ctx.ramification))

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.parts)

    # -- valuation and residues ---------------------------------------------

    def valuation(self):
        """pi-adic valuation as an integer, INF for zero."""
        p = self.ctx.prime
        e = self.ctx.e
        best = INF
        for i, c in enumerate(self.parts):
            if c == 0:
                continue
            v = e * rational_valuation(c, p) + i
            if v < best:
                best = v
        return best

    def reduce_mod(self, m: int) -> "Coefficient":
        """Canonical residue representative modulo pi^m.

        Component i is reduced modulo p^ceil((m-i)/e); integrality of the
        element makes every component p-integral, so denominators invert.
        Two elements reduce equally iff their difference has valuation >= m.
        """
        if m < 1:
            raise BadParameters("level must be >= 1")
        if self.valuation() < 0:
            raise NegativeValuation(f"valuation {self.valuation()} < 0")
        p = self.ctx.prime
        e = self.ctx.e
        out = []
        for i, c in enumerate(self.parts):
            k = -((i - m) // e)  # ceil((m - i)/e)
            if k <= 0:
                out.append(Fraction(0))
                continue
            mod = p**k
            num = c.numerator % mod
            inv = pow(c.denominator, -1, mod)
            out.append(Fraction(num * inv % mod))
        return Coefficient(tuple(out), self.ctx)

    def congruent_mod(self, other, m: int) -> bool:
        return (self - self._lift(other)).valuation() >= m

    # -- text form -----------------------------------------------------------

    def render(self) -> str:
        """Canonical text: "a/b" terms joined with signs, pi powers marked.

        Examples: "3", "-1/2", "2 + 1/3*pi", "1 - pi^2".
        """
        pieces = []
        for i, c in enumerate(self.parts):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            elif i == 1:
                body = "pi" if mag == 1 else f"{mag}*pi"
            else:
                body = f"pi^{i}" if mag == 1 else f"{mag}*pi^{i}"
            pieces.append(("-" if c < 0 else "+", body))
        if not pieces:
            return "0"
        sign, body = pieces[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Coefficient({self.render()!r}, p={self.ctx.prime}, {self.ctx.ramification.value})"


_TERM_RE = re.compile(
    r"^(?P<coef>[+-]?\d+(?:/\d+)?)?(?P<star>\*)?(?P<pi>pi(?:\^(?P<pow>\d+))?)?$"
)


def parse_coefficient(text: str, ctx: PadicContext) -> Coefficient:
    """Parse the canonical text form back, bit-exactly.

    Accepts any pi power (folded through pi^e = -p), so operator files may
    write e.g. "pi^3" even though the canonical form would not.
    """
    compact = text.replace(" ", "")
    if not compact:
        raise BadParameters("empty coefficient text")
    terms = re.findall(r"[+-]?[^+-]+", compact)
    if "".join(terms) != compact:
        raise BadParameters(f"cannot parse coefficient {text!r}")
    total = ctx.zero()
    for term in terms:
        sign = Fraction(1)
        if term[0] in "+-":
            if term[0] == "-":
                sign = Fraction(-1)
            term = term[1:]
        m = _TERM_RE.match(term)
        if not m or (m.group("star") and not (m.group("coef") and m.group("pi"))):
            raise BadParameters(f"cannot parse coefficient term {term!r}")
        if not m.group("coef") and not m.group("pi"):
            raise BadParameters(f"cannot parse coefficient term {term!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        value = ctx.coeff(sign * coef)
        if m.group("pi"):
            power = int(m.group("pow")) if m.group("pow") else 1
            value = value * ctx.pi() ** power
        total = total + value
    return total


def _solve_exact(matrix, rhs):
    """Gaussian elimination over Fractions; matrix must be invertible."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]
