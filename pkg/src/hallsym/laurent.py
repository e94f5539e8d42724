"""Exact coefficient arithmetic.

Laurent polynomials in ``v`` over the integers, quantum integers, factorials
and binomials, evaluation of ``v`` into ``Q(sqrt q)``, and the brute-force
subspace count used as an oracle by the Hall layer.
"""

from __future__ import annotations

import enum
import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Mapping

__all__ = [
    "InexactDivision",
    "LaurentPoly",
    "LaurentFraction",
    "SqrtQValue",
    "EvalConvention",
    "DEFAULT_CONVENTION",
    "V",
    "ONE",
    "ZERO",
    "qint",
    "qfact",
    "qbinom",
    "eval_sqrt_q",
    "gaussian_count",
    "parse_laurent",
]


class InexactDivision(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


class LaurentPoly:
    """Element of Z[v, v^-1], stored as ``{exponent: coefficient}``.

    Instances are immutable; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e)] = int(c)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls({0: x})
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return min(self._terms)

    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return max(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    # ring operations
    def __add__(self, other):
        if isinstance(other, LaurentFraction):
            return NotImplemented
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, LaurentFraction):
            return NotImplemented
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, LaurentFraction):
            return NotImplemented
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial() or abs(next(iter(self._terms.values()))) != 1:
                raise InexactDivision("only units ±v^k have negative powers")
            (e, c), = self._terms.items()
            return LaurentPoly({e * n: c ** abs(n)})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^-1."""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def exact_div(self, other) -> "LaurentPoly":
        """Quotient in Z[v, v^-1]; raises InexactDivision on a remainder."""
        other = LaurentPoly.coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return ZERO
        # strip powers of v so both sides are polynomials with nonzero
        # constant term, then run long division from the top degree
        lo_a, lo_b = self.min_exp(), other.min_exp()
        a = {e - lo_a: c for e, c in self._terms.items()}
        b = {e - lo_b: c for e, c in other._terms.items()}
        db = max(b)
        lead = b[db]
        quot: dict[int, int] = {}
        rem = dict(a)
        while rem:
            top = max(rem)
            if top < db:
                raise InexactDivision(f"{self} is not divisible by {other}")
            c, r = divmod(rem[top], lead)
            if r:
                raise InexactDivision(f"{self} is not divisible by {other}")
            k = top - db
            quot[k] = c
            for e, cb in b.items():
                val = rem.get(e + k, 0) - c * cb
                if val:
                    rem[e + k] = val
                else:
                    rem.pop(e + k, None)
        return LaurentPoly(quot).shift(lo_a - lo_b)

    def __truediv__(self, other):
        if isinstance(other, LaurentFraction):
            return LaurentFraction(self, ONE) / other
        try:
            return self.exact_div(other)
        except InexactDivision:
            return LaurentFraction(self, LaurentPoly.coerce(other))

    def __rtruediv__(self, other):
        return LaurentPoly.coerce(other) / self

    # comparison and display
    def __eq__(self, other):
        if isinstance(other, LaurentFraction):
            return other == self
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = "v" if e == 1 else f"v^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


class LaurentFraction:
    """Quotient of two Laurent polynomials, an element of Q(v).

    Only needed where a division by a quantum integer is not exact.
    Arithmetic results collapse back to :class:`LaurentPoly` whenever the
    denominator divides the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @staticmethod
    def make(num, den):
        """Build num/den, returning a LaurentPoly when the division is exact."""
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        try:
            return num.exact_div(den)
        except InexactDivision:
            return LaurentFraction(num, den)

    @staticmethod
    def _parts(x):
        if isinstance(x, LaurentFraction):
            return x.num, x.den
        return LaurentPoly.coerce(x), ONE

    def __add__(self, other):
        try:
            n2, d2 = self._parts(other)
        except TypeError:
            return NotImplemented
        if d2 == self.den:
            return LaurentFraction.make(self.num + n2, self.den)
        return LaurentFraction.make(self.num * d2 + n2 * self.den, self.den * d2)

    __radd__ = __add__

    def __neg__(self):
        return LaurentFraction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_coeff(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            n2, d2 = self._parts(other)
        except TypeError:
            return NotImplemented
        return LaurentFraction.make(self.num * n2, self.den * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        n2, d2 = self._parts(other)
        return LaurentFraction.make(self.num * d2, self.den * n2)

    def __rtruediv__(self, other):
        n2, d2 = self._parts(other)
        return LaurentFraction.make(n2 * self.den, d2 * self.num)

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def bar(self):
        return LaurentFraction(self.num.bar(), self.den.bar())

    def __eq__(self, other):
        try:
            n2, d2 = self._parts(other)
        except TypeError:
            return NotImplemented
        return self.num * d2 == n2 * self.den

    __hash__ = None

    def __repr__(self):
        return f"LaurentFraction({self})"

    def __str__(self):
        return f"({self.num})/({self.den})"


def _as_coeff(x):
    if isinstance(x, (LaurentPoly, LaurentFraction)):
        return x
    return LaurentPoly.coerce(x)


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})
V = LaurentPoly({1: 1})


_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(?:v(?:\^\(?(-?\d+)\)?)?)?$")


def parse_laurent(text: str) -> LaurentPoly:
    """Parse the rendering produced by ``str(LaurentPoly)``.

    Accepts forms such as ``v^2 + 1 - 3*v^-1`` and ``-v^-1``.
    """
    s = text.replace(" ", "").replace("−", "-")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ValueError("empty Laurent polynomial")
    pieces = re.findall(r"[+-]?[^+-]+", s.replace("^-", "^~"))
    out: dict[int, int] = {}
    for piece in pieces:
        piece = piece.replace("^~", "^-")
        sign = -1 if piece.startswith("-") else 1
        body = piece.lstrip("+-")
        m = _TERM_RE.match(body)
        if not body or not m or (m.group(1) is None and "v" not in body):
            raise ValueError(f"cannot parse term {piece!r} in {text!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        if "v" in body:
            exp = int(m.group(2)) if m.group(2) is not None else 1
        else:
            exp = 0
        out[exp] = out.get(exp, 0) + sign * coeff
    return LaurentPoly(out)


# quantum integers ----------------------------------------------------------

@lru_cache(maxsize=None)
def qint(n: int) -> LaurentPoly:
    """[n] = v^(n-1) + v^(n-3) + ... + v^(1-n)."""
    if n < 0:
        return -qint(-n)
    return LaurentPoly({n - 1 - 2 * k: 1 for k in range(n)})


@lru_cache(maxsize=None)
def qfact(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError(f"qfact needs n >= 0, got {n}")
    out = ONE
    for k in range(1, n + 1):
        out = out * qint(k)
    return out


@lru_cache(maxsize=None)
def qbinom(m: int, p: int) -> LaurentPoly:
    """Quantum binomial by exact division of quantum factorials.

    A nonzero remainder would mean qfact is broken, so it is not caught.
    """
    if m < 0 or p < 0:
        raise ValueError(f"qbinom needs nonnegative arguments, got ({m}, {p})")
    if p > m:
        raise ValueError(f"qbinom needs p <= m, got ({m}, {p})")
    return qfact(m).exact_div(qfact(p) * qfact(m - p))


# evaluation into Q(sqrt q) --------------------------------------------------

class SqrtQValue:
    """The number a + b*sqrt(q) with rational a, b and q a fixed prime."""

    __slots__ = ("a", "b", "q")

    def __init__(self, a=0, b=0, q: int = 2):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.q = int(q)

    @classmethod
    def sqrt_power(cls, k: int, q: int) -> "SqrtQValue":
        """q^(k/2) for any integer k."""
        if k % 2 == 0:
            return cls(Fraction(q) ** (k // 2), 0, q)
        return cls(0, Fraction(q) ** ((k - 1) // 2), q)

    def _coerce(self, other):
        if isinstance(other, SqrtQValue):
            if other.q != self.q:
                raise ValueError(f"mixing Q(sqrt {self.q}) with Q(sqrt {other.q})")
            return other
        if isinstance(other, (int, Fraction)):
            return SqrtQValue(other, 0, self.q)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return SqrtQValue(self.a + o.a, self.b + o.b, self.q)

    __radd__ = __add__

    def __neg__(self):
        return SqrtQValue(-self.a, -self.b, self.q)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return SqrtQValue(self.a - o.a, self.b - o.b, self.q)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return SqrtQValue(self.a * o.a + self.q * self.b * o.b,
                          self.a * o.b + self.b * o.a, self.q)

    __rmul__ = __mul__

    def inverse(self) -> "SqrtQValue":
        norm = self.a * self.a - self.b * self.b * self.q
        if norm == 0:
            # sqrt q is irrational, so the norm vanishes only at zero
            raise ZeroDivisionError("inverse of zero in Q(sqrt q)")
        return SqrtQValue(self.a / norm, -self.b / norm, self.q)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = SqrtQValue(1, 0, self.q)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, SqrtQValue):
            return NotImplemented
        return (self.a, self.b, self.q) == (other.a, other.b, other.q)

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def as_pair(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def __repr__(self):
        return f"SqrtQValue({self.a}, {self.b}, q={self.q})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*sqrt({self.q})"
        return f"{self.a} + {self.b}*sqrt({self.q})"


class EvalConvention(enum.Enum):
    """Image of v: sign * q^(half/2) with sign and half in {+1, -1}."""

    PLUS_INV_SQRT = ("+q^-1/2", 1, -1)
    MINUS_INV_SQRT = ("-q^-1/2", -1, -1)
    PLUS_SQRT = ("+q^1/2", 1, 1)
    MINUS_SQRT = ("-q^1/2", -1, 1)

    def __init__(self, label, sign, half):
        self.label = label
        self.sign = sign
        self.half = half

    def __str__(self):
        return self.label

    def value(self, q: int) -> SqrtQValue:
        return self.sign * SqrtQValue.sqrt_power(self.half, q)

    def power(self, k: int, q: int) -> SqrtQValue:
        """ev(v)^k without repeated multiplication."""
        s = self.sign ** (k % 2)
        return s * SqrtQValue.sqrt_power(self.half * k, q)

    @classmethod
    def parse(cls, text: str) -> "EvalConvention":
        key = text.strip().replace(" ", "").replace("−", "-").replace("+", "")
        for ch in "(){}":
            key = key.replace(ch, "")
        key = key.replace("^+", "^")
        for conv in cls:
            label = conv.label.replace("+", "")
            if key in (label, conv.name.lower(), conv.name):
                return conv
        choices = ", ".join(c.label for c in cls)
        raise ValueError(f"unknown evaluation convention {text!r}; choose one of {choices}")


# The value selected by calibration; see the README for why it is q^{+1/2}.
DEFAULT_CONVENTION = EvalConvention.PLUS_SQRT


def eval_sqrt_q(x, q: int, conv: EvalConvention = DEFAULT_CONVENTION) -> SqrtQValue:
    """Ring map Z[v, v^-1] -> Q(sqrt q), v -> conv.value(q).

    A LaurentFraction is evaluated as a quotient.
    """
    if isinstance(x, LaurentFraction):
        return eval_sqrt_q(x.num, q, conv) / eval_sqrt_q(x.den, q, conv)
    if isinstance(x, int):
        return SqrtQValue(x, 0, q)
    a = Fraction(0)
    b = Fraction(0)
    for e, c in x._terms.items():
        term = conv.power(e, q)
        a += c * term.a
        b += c * term.b
    return SqrtQValue(a, b, q)


# subspace counting oracle ----------------------------------------------------

def echelon_forms(m: int, p: int, q: int):
    """Yield every p x m reduced row-echelon matrix over F_q of rank p.

    Matrices are tuples of row tuples; each one is the unique RREF basis of
    a p-dimensional subspace of F_q^m.
    """
    if not 0 <= p <= m:
        return
    for pivots in combinations(range(m), p):
        free = [(r, c) for r in range(p) for c in range(pivots[r] + 1, m)
                if c not in pivots]
        for values in product(range(q), repeat=len(free)):
            rows = [[0] * m for _ in range(p)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), val in zip(free, values):
                rows[r][c] = val
            yield tuple(tuple(row) for row in rows)


@lru_cache(maxsize=None)
def gaussian_count(m: int, p: int, q: int) -> int:
    """Number of p-dimensional subspaces of F_q^m, by enumeration."""
    if not 0 <= p <= m:
        raise ValueError(f"gaussian_count needs 0 <= p <= m, got ({m}, {p})")
    return sum(1 for _ in echelon_forms(m, p, q))
