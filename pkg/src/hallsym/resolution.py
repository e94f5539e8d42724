"""Exponent bookkeeping for the standard modules K_m at weight mi+j.

Everything here lives in the symbolic layer.  The triangular system

    θ_j θ_i^(m) = Σ_p v^{b_p} θ_i^(m-p) χ(E^(p))

is solved by forward substitution, the closed form
c_p = (-1)^p v^{-p(1+N-m)} is compared with the recursion that proves it,
and the projective resolution of K_m is recorded only through its graded
Euler characteristic.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache

from .freealg import FreeElement, theta
from .laurent import LaurentPoly, qbinom
from .rank2 import CoordVector, from_coords, monomial, monomial_word, to_coords


def _check(m, N, p=None):
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not 0 <= m <= N:
        raise ValueError(f"need 0 <= m <= N, got m={m}, N={N}")
    if p is not None and not 0 <= p <= m:
        raise ValueError(f"need 0 <= p <= m, got p={p}, m={m}")


def a_exp(m: int, p: int, N: int) -> int:
    return p * (m - p) - m * N


def b_exp(m: int, p: int, N: int) -> int:
    return (p - N) * (m - p)


def c_closed(m: int, p: int, N: int) -> LaurentPoly:
    return LaurentPoly.monomial(-p * (1 + N - m), (-1) ** p)


def coefficients(m: int, p: int, N: int):
    """(a_p^(m), b_p^(m), c_p^(m)) for 0 <= p <= m <= N."""
    _check(m, N, p)
    return a_exp(m, p, N), b_exp(m, p, N), c_closed(m, p, N)


@lru_cache(maxsize=None)
def _recursive_table(N: int, top: int):
    # table[mm][k] = c_k^(mm); entry (mm, k) only needs rows mm' < mm
    table = []
    for mm in range(top + 1):
        row = [LaurentPoly.constant(1)]
        for qq in range(1, mm + 1):
            acc = LaurentPoly()
            for k in range(qq):
                src = k + mm - qq
                acc = acc + table[src][k].shift(b_exp(mm, src, N)) * qbinom(qq, k)
            row.append(-acc)
        table.append(tuple(row))
    return tuple(table)


def c_recursive(m: int, N: int) -> list:
    """c_0..c_m from c_q = -Σ_{k<q} v^{b_{k+m-q}} c_k^{(k+m-q)} [q choose k]."""
    _check(m, N)
    return list(_recursive_table(N, m)[m])


@lru_cache(maxsize=None)
def _chi_elements(N: int, top: int):
    out = []
    for mm in range(top + 1):
        x = FreeElement({monomial_word(mm, 0): 1})
        for k in range(mm):
            x = x - (theta("i", mm - k) * out[k]).scale(
                LaurentPoly.monomial(b_exp(mm, k, N)))
        out.append(x)
    return tuple(out)


def chi_E_symbolic(m: int, N: int) -> CoordVector:
    """Coordinates of χ(E^(m)), solved from the triangular system."""
    _check(m, N)
    return to_coords(_chi_elements(N, m)[m], m, N)


def cor58_reassembly(m: int, N: int) -> FreeElement:
    """Σ_k v^{b_k} θ_i^(m-k) χ(E^(k)); should equal θ_j θ_i^(m)."""
    _check(m, N)
    total = FreeElement.zero()
    for k in range(m + 1):
        chi = from_coords(chi_E_symbolic(k, N))
        total = total + (theta("i", m - k) * chi).scale(LaurentPoly.monomial(b_exp(m, k, N)))
    return total


def qbinom_alternating(d: int) -> LaurentPoly:
    """Σ_k (-1)^k v^{k(d-1)} [d choose k]; vanishes for every d >= 1."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    total = LaurentPoly()
    for k in range(d + 1):
        total = total + qbinom(d, k).shift(k * (d - 1)) * (-1) ** k
    return total


@dataclass(frozen=True)
class ShadowTerm:
    hom_degree: int
    grade_shift: int
    monomial: int


@dataclass(frozen=True)
class ResolutionShadow:
    m: int
    N: int
    terms: tuple

    def as_tuples(self):
        return [(t.hom_degree, t.grade_shift, t.monomial) for t in self.terms]


def resolution_shadow(m: int, N: int) -> ResolutionShadow:
    _check(m, N)
    terms = tuple(ShadowTerm(p, -p * (1 + N - m), p) for p in range(m + 1))
    return ResolutionShadow(m, N, terms)


def shadow_euler_characteristic(shadow: ResolutionShadow) -> CoordVector:
    coords = [LaurentPoly() for _ in range(shadow.m + 1)]
    for t in shadow.terms:
        coords[t.monomial] = coords[t.monomial] + LaurentPoly.monomial(
            t.grade_shift, (-1) ** t.hom_degree)
    return CoordVector(shadow.m, tuple(coords))


def euler_check(m: int, N: int) -> bool:
    return shadow_euler_characteristic(resolution_shadow(m, N)) == chi_E_symbolic(m, N)


def coefficient_table(N: int) -> list:
    """Rows (m, p, a, b, c) for 0 <= p <= m <= N."""
    return [(m, p) + coefficients(m, p, N) for m in range(N + 1) for p in range(m + 1)]


def table_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "p", "a", "b", "c"])
    for m, p, a, b, c in rows:
        w.writerow([m, p, a, b, str(c)])
    return buf.getvalue()


__all__ = [
    "a_exp",
    "b_exp",
    "c_closed",
    "coefficients",
    "c_recursive",
    "chi_E_symbolic",
    "cor58_reassembly",
    "qbinom_alternating",
    "ShadowTerm",
    "ResolutionShadow",
    "resolution_shadow",
    "shadow_euler_characteristic",
    "euler_check",
    "coefficient_table",
    "table_to_csv",
    "monomial",
]
