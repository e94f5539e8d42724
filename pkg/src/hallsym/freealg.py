"""Free algebra on two generators in divided-power word form.

A word is a tuple of runs ``(generator, exponent)`` and stands for
``θ_g1^(a1) θ_g2^(a2) ...``.  Adjacent runs always carry distinct
generators; concatenation merges equal neighbours with the rule
``θ^(a) θ^(b) = [a+b choose a] θ^(a+b)``.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple

from .laurent import (
    LaurentFraction,
    LaurentPoly,
    ONE,
    parse_laurent,
    qbinom,
)

GENERATORS = ("i", "j")

Word = tuple  # tuple[tuple[str, int], ...]
UNIT_WORD: Word = ()


class Weight(NamedTuple):
    i: int
    j: int

    def __add__(self, other):  # componentwise, not tuple concatenation
        return Weight(self.i + other[0], self.j + other[1])


def _check_gen(g):
    if g not in GENERATORS:
        raise ValueError(f"unknown generator {g!r}; the alphabet is {GENERATORS}")


def canonical_word(runs: Iterable) -> Word:
    """Validate runs as a canonical word (no merging is done here)."""
    word = tuple((str(g), int(e)) for g, e in runs)
    prev = None
    for g, e in word:
        _check_gen(g)
        if e < 1:
            raise ValueError(f"run exponents must be >= 1, got {e}")
        if g == prev:
            raise ValueError(f"adjacent runs share generator {g!r}; use theta_y to merge")
        prev = g
    return word


def word_weight(word: Word) -> Weight:
    wi = sum(e for g, e in word if g == "i")
    wj = sum(e for g, e in word if g == "j")
    return Weight(wi, wj)


def concat_words(w1: Word, w2: Word):
    """Return (coefficient, word) for the product of two canonical words."""
    if w1 and w2 and w1[-1][0] == w2[0][0]:
        g = w1[-1][0]
        a, b = w1[-1][1], w2[0][1]
        return qbinom(a + b, a), w1[:-1] + ((g, a + b),) + w2[1:]
    return ONE, w1 + w2


def _sort_key(word: Word):
    letters = tuple(0 if g == "j" else 1 for g, e in word for _ in range(e))
    return (letters, word)


def _is_zero(c) -> bool:
    return not c


class FreeElement:
    """Finite combination of divided words with Laurent coefficients.

    Coefficients are normally :class:`LaurentPoly`; a :class:`LaurentFraction`
    only appears after a non-exact division (see ``rank2.decompose_theta_i``).
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, c in dict(terms).items():
                w = canonical_word(w)
                if not isinstance(c, (LaurentPoly, LaurentFraction)):
                    c = LaurentPoly.coerce(c)
                if not _is_zero(c):
                    if w in clean:
                        c = clean[w] + c
                        if _is_zero(c):
                            del clean[w]
                            continue
                    clean[w] = c
        self._terms = clean

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def unit(cls):
        return cls({UNIT_WORD: ONE})

    @classmethod
    def word(cls, runs, coeff=1):
        return cls({canonical_word(runs): coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def words(self) -> list:
        return sorted(self._terms, key=_sort_key)

    def coefficient(self, runs):
        return self._terms.get(tuple(tuple(r) for r in runs), LaurentPoly())

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    # linear structure
    def __add__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            s = out[w] + c if w in out else c
            if _is_zero(s):
                out.pop(w, None)
            else:
                out[w] = s
        return FreeElement._raw(out)

    def __neg__(self):
        return FreeElement._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "FreeElement":
        if isinstance(c, int):
            c = LaurentPoly.coerce(c)
        out = {}
        for w, d in self._terms.items():
            p = c * d
            if not _is_zero(p):
                out[w] = p
        return FreeElement._raw(out)

    def __mul__(self, other):
        if isinstance(other, FreeElement):
            return multiply(self, other)
        if isinstance(other, (int, LaurentPoly, LaurentFraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly, LaurentFraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        if self._terms.keys() != other._terms.keys():
            return False
        return all(self._terms[w] == other._terms[w] for w in self._terms)

    __hash__ = None

    def __repr__(self):
        return f"FreeElement({render(self)})"

    def __str__(self):
        return render(self)

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj


def multiply(x: FreeElement, y: FreeElement) -> FreeElement:
    """Bilinear extension of word concatenation with run merging."""
    out: dict = {}
    for w1, c1 in x._terms.items():
        for w2, c2 in y._terms.items():
            k, w = concat_words(w1, w2)
            c = c1 * c2 * k
            if w in out:
                c = out[w] + c
            if _is_zero(c):
                out.pop(w, None)
            else:
                out[w] = c
    return FreeElement._raw(out)


def theta_y(runs) -> FreeElement:
    """Product of the listed divided powers, merged into canonical form."""
    out = FreeElement.unit()
    for g, e in runs:
        _check_gen(g)
        if int(e) < 1:
            raise ValueError(f"run exponents must be >= 1, got {e}")
        out = multiply(out, FreeElement.word(((g, int(e)),)))
    return out


def theta(g: str, n: int = 1) -> FreeElement:
    """The divided power θ_g^(n); n = 0 gives the unit."""
    if n == 0:
        return FreeElement.unit()
    return FreeElement.word(((g, n),))


def _ij_word(i, j, a, b):
    """θ_i^(a) θ_j θ_i^(b) as a canonical word."""
    runs = []
    if a:
        runs.append((i, a))
    runs.append((j, 1))
    if b:
        runs.append((i, b))
    return tuple(runs)


def _check_pair(i, j, a_ij):
    _check_gen(i)
    _check_gen(j)
    if i == j:
        raise ValueError("i and j must be distinct generators")
    if a_ij > 0:
        raise ValueError(f"a_ij must be nonpositive, got {a_ij}")


def serre_element(i: str = "i", j: str = "j", a_ij: int = -1) -> FreeElement:
    """Σ_k (-1)^k θ_i^(k) θ_j θ_i^(1-a_ij-k)."""
    _check_pair(i, j, a_ij)
    n = 1 - a_ij
    return FreeElement({_ij_word(i, j, k, n - k): (-1) ** k for k in range(n + 1)})


def reflection_word(side: str, i: str = "i", j: str = "j", m: int = 0,
                    a_ij: int = -1) -> FreeElement:
    """f(i,j;m) for side ``lower`` and f'(i,j;m) for side ``upper``.

    Both are Σ_{r+s=m} (-1)^r v^{-r(-a_ij-m+1)} times θ_i^(r) θ_j θ_i^(s)
    (lower) or θ_i^(s) θ_j θ_i^(r) (upper).
    """
    _check_pair(i, j, a_ij)
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    terms = {}
    for r in range(m + 1):
        s = m - r
        coeff = LaurentPoly.monomial(-r * (-a_ij - m + 1), (-1) ** r)
        word = _ij_word(i, j, r, s) if side == "lower" else _ij_word(i, j, s, r)
        terms[word] = coeff
    return FreeElement(terms)


def weight_of(x: FreeElement) -> Weight:
    """Common weight of a homogeneous element; the zero element has none."""
    weights = {word_weight(w) for w in x._terms}
    if not weights:
        raise ValueError("the zero element has no weight")
    if len(weights) > 1:
        raise ValueError(f"element is not homogeneous: weights {sorted(weights)}")
    return weights.pop()


def is_homogeneous(x: FreeElement) -> bool:
    return len({word_weight(w) for w in x._terms}) <= 1


# text form ------------------------------------------------------------------

def render_word(word: Word) -> str:
    if not word:
        return "1"
    parts = []
    for g, e in word:
        parts.append(f"θ_{g}" if e == 1 else f"θ_{g}^({e})")
    return "*".join(parts)


def render(x: FreeElement) -> str:
    """Render as e.g. ``θ_j*θ_i^(2) - v^-1*θ_i*θ_j*θ_i``."""
    if not x._terms:
        return "0"
    pieces = []
    for w in x.words():
        c = x._terms[w]
        neg = False
        if isinstance(c, LaurentPoly) and c.is_monomial():
            (e, k), = c.terms.items()
            neg = k < 0
            mag = LaurentPoly.monomial(e, abs(k))
            cs = "" if mag == ONE else str(mag)
        else:
            # "(p)" for a polynomial, "(p)/(q)" for a fraction
            cs = f"({c})" if isinstance(c, LaurentPoly) else str(c)
        ws = render_word(w)
        if not w:
            body = cs or "1"
        else:
            body = f"{cs}*{ws}" if cs else ws
        pieces.append((neg, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


_GEN_RE = re.compile(r"^(?:θ|theta)_([ij])(?:\^\(?(\d+)\)?)?$")


def _split_top(s: str, seps: str):
    """Split at separators outside parentheses, keeping the separator."""
    out, depth, cur = [], 0, ""
    for k, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {s!r}")
        if depth == 0 and ch in seps and cur and not (ch == "-" and s[k - 1] == "^"):
            out.append(cur)
            cur = ch if ch in "+-" else ""
            continue
        cur += ch
    if depth:
        raise ValueError(f"unbalanced parentheses in {s!r}")
    out.append(cur)
    return out


def _parse_coefficient_group(tok: str):
    # "(laurent)" or "(laurent)/(laurent)", possibly wrapped once more
    parts = _split_top(tok, "/")
    if len(parts) == 1 and tok.startswith("((") and "/" in tok:
        return _parse_coefficient_group(tok[1:-1])
    num = parse_laurent(parts[0])
    if len(parts) == 1:
        return num
    if len(parts) == 2:
        return LaurentFraction.make(num, parse_laurent(parts[1]))
    raise ValueError(f"cannot parse coefficient {tok!r}")


def parse_element(text: str) -> FreeElement:
    """Inverse of :func:`render`."""
    s = text.replace(" ", "").replace("−", "-")
    if not s:
        raise ValueError("empty expression")
    total = FreeElement.zero()
    for term in _split_top(s, "+-"):
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        if not term:
            raise ValueError(f"dangling sign in {text!r}")
        elem = FreeElement.unit().scale(sign)
        for factor in _split_top(term, "*"):
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            m = _GEN_RE.match(factor)
            if m:
                n = int(m.group(2)) if m.group(2) else 1
                if n < 1:
                    raise ValueError(f"divided power must be >= 1 in {factor!r}")
                elem = multiply(elem, theta(m.group(1), n))
            elif factor.startswith("("):
                elem = elem.scale(_parse_coefficient_group(factor))
            else:
                elem = elem.scale(parse_laurent(factor))
        total = total + elem
    return total


__all__ = [
    "GENERATORS",
    "Weight",
    "Word",
    "UNIT_WORD",
    "FreeElement",
    "multiply",
    "theta",
    "theta_y",
    "serre_element",
    "reflection_word",
    "weight_of",
    "is_homogeneous",
    "word_weight",
    "concat_words",
    "canonical_word",
    "render",
    "render_word",
    "parse_element",
]
