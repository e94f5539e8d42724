"""Weight spaces f_{mi+j} for the rank-2 datum a_ij = -N.

Every divided word of weight (m, 1) is θ_i^(p) θ_j θ_i^(m-p), so an element
of that weight is a coordinate vector of length m+1.  For m <= N these words
are linearly independent in f; that is certified numerically by
``hall.rank_certificate`` rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .freealg import (
    FreeElement,
    reflection_word,
    theta,
    word_weight,
)
from .laurent import LaurentPoly, qint


def monomial_word(m: int, p: int):
    """The word θ_i^(p) θ_j θ_i^(m-p)."""
    runs = []
    if p:
        runs.append(("i", p))
    runs.append(("j", 1))
    if m - p:
        runs.append(("i", m - p))
    return tuple(runs)


def monomial(m: int, p: int) -> FreeElement:
    return FreeElement({monomial_word(m, p): 1})


def f_lower(m: int, N: int) -> FreeElement:
    """f(i,j;m) for a_ij = -N."""
    return reflection_word("lower", "i", "j", m, -N)


def f_upper(m: int, N: int) -> FreeElement:
    """f'(i,j;m) for a_ij = -N."""
    return reflection_word("upper", "i", "j", m, -N)


@dataclass(frozen=True)
class CoordVector:
    m: int
    coords: tuple

    def __post_init__(self):
        coords = tuple(LaurentPoly.coerce(c) if isinstance(c, int) else c
                       for c in self.coords)
        if len(coords) != self.m + 1:
            raise ValueError(f"expected {self.m + 1} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    def __getitem__(self, p):
        return self.coords[p]

    def __len__(self):
        return len(self.coords)

    def __eq__(self, other):
        if not isinstance(other, CoordVector):
            return NotImplemented
        return self.m == other.m and all(a == b for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def _check_regime(m, N):
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not 0 <= m <= N:
        raise ValueError(f"need 0 <= m <= N (basis regime), got m={m}, N={N}")


def _check_weight(x: FreeElement, m: int):
    for w in x.terms:
        wt = word_weight(w)
        if wt.j != 1:
            raise ValueError(f"word {w} has j-exponent {wt.j}, expected 1")
        if wt.i != m:
            raise ValueError(f"word {w} has weight {tuple(wt)}, expected ({m}, 1)")


def to_coords(x: FreeElement, m: int, N: int) -> CoordVector:
    _check_regime(m, N)
    _check_weight(x, m)
    return CoordVector(m, tuple(x.coefficient(monomial_word(m, p)) for p in range(m + 1)))


def from_coords(c: CoordVector) -> FreeElement:
    return FreeElement({monomial_word(c.m, p): c.coords[p] for p in range(c.m + 1)})


def _infer_m(x: FreeElement):
    ms = {word_weight(w).i for w in x.terms}
    if len(ms) != 1:
        raise ValueError("element is not homogeneous of weight (m, 1)")
    return ms.pop()


def project(x: FreeElement, side: str, N: int, m: int | None = None):
    """Return (c, image) with image the component of x in _i f (lower) or
    ^i f (upper).

    lower: c is the coefficient of θ_j θ_i^(m) and image = c f(i,j;m).
    upper: c is the coefficient of θ_i^(m) θ_j and image = c f'(i,j;m).
    """
    if m is None:
        if not x:
            return LaurentPoly(), FreeElement.zero()
        m = _infer_m(x)
    coords = to_coords(x, m, N)
    if side == "lower":
        c = coords[0]
        return c, f_lower(m, N).scale(c)
    if side == "upper":
        c = coords[m]
        return c, f_upper(m, N).scale(c)
    raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")


def decompose_theta_i(x: FreeElement, m: int, N: int):
    """Split x = c f(i,j;m) + θ_i y.

    The left division by θ_i uses θ_i^(a) Z = θ_i (θ_i^(a-1) Z) / [a].
    Over Z[v, v^-1] that division is not always exact (θ_i^(2) θ_j is
    already a counterexample), so coefficients of y may be fractions in Q(v).
    """
    if m < 1:
        raise ValueError(f"decompose_theta_i needs m >= 1, got {m}")
    c, image = project(x, "lower", N, m)
    rest = x - image
    y_terms = {}
    for w, coeff in rest.terms.items():
        if w[0][0] != "i":
            raise AssertionError("residual word does not start with θ_i")
        a = w[0][1]
        shorter = (("i", a - 1),) + w[1:] if a > 1 else w[1:]
        y_terms[shorter] = coeff / qint(a)
    y = FreeElement(y_terms)
    if image + theta("i") * y != x:
        raise AssertionError("decomposition does not reassemble")
    return c, y


def lusztig_T(x: FreeElement, N: int, direction: str = "forward") -> FreeElement:
    """c f(i,j;m) -> c f'(i,j;N-m) (forward) and c f'(i,j;m') -> c f(i,j;N-m')
    (inverse)."""
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    if not x:
        return FreeElement.zero()
    m = _infer_m(x)
    side = "lower" if direction == "forward" else "upper"
    c, image = project(x, side, N, m)
    if image != x:
        where = "_i f" if side == "lower" else "^i f"
        raise ValueError(f"input is not in {where}: nonzero residual {x - image}")
    target = f_upper(N - m, N) if direction == "forward" else f_lower(N - m, N)
    return target.scale(c)


__all__ = [
    "CoordVector",
    "monomial",
    "monomial_word",
    "f_lower",
    "f_upper",
    "to_coords",
    "from_coords",
    "project",
    "decompose_theta_i",
    "lusztig_T",
]
