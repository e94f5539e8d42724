"""Verification suites shared by the command line and the test-suite.

Every check returns a :class:`Report`; ``passed`` is true exactly when the
witness list is empty.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import hall
from .freealg import FreeElement, serre_element
from .hall import HallFunction, Q, Qprime, avatar, locus_indicator, omega_i, transfer, varpi
from .laurent import DEFAULT_CONVENTION, EvalConvention, LaurentPoly
from .rank2 import f_lower, f_upper, monomial, monomial_word, to_coords
from .resolution import (
    c_closed,
    c_recursive,
    chi_E_symbolic,
    cor58_reassembly,
    euler_check,
    qbinom_alternating,
    resolution_shadow,
    shadow_euler_characteristic,
)

# witnesses kept per report; the table view shows fewer
MAX_WITNESSES = 100


@dataclass
class Report:
    check: str
    params: dict
    witnesses: list = field(default_factory=list)
    runtime_ms: int = 0

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "params": dict(sorted(self.params.items())),
            "pass": self.passed,
            "witnesses": self.witnesses,
            "runtime_ms": self.runtime_ms,
        }


def _witness(index, expected, actual) -> dict:
    return {"index": index, "expected": str(expected), "actual": str(actual)}


def _timed(check, params, body) -> Report:
    t0 = time.perf_counter()
    witnesses = body()
    ms = int(round((time.perf_counter() - t0) * 1000))
    return Report(check, params, witnesses[:MAX_WITNESSES], ms)


def function_witnesses(expected: HallFunction, actual: HallFunction) -> list:
    bad = expected.differs_at(actual)
    return [_witness(int(k), expected[int(k)], actual[int(k)]) for k in bad[:MAX_WITNESSES]]


def _conv_label(conv):
    return conv.label


# Hall-level checks ---------------------------------------------------------------

def serre(N, q, conv=DEFAULT_CONVENTION) -> Report:
    """varpi of the Serre element vanishes on dims (N+1, 1)."""
    def body():
        f = varpi(serre_element("i", "j", -N), Q(N), (N + 1, 1), q, conv)
        zero = HallFunction.zero(Q(N), (N + 1, 1), q, conv)
        return function_witnesses(zero, f)
    return _timed("serre", {"N": N, "q": q, "ev": _conv_label(conv)}, body)


def cor59(m, N, q, conv=DEFAULT_CONVENTION) -> Report:
    """varpi(f(i,j;m)) equals the E(m) avatar."""
    def body():
        lhs = varpi(f_lower(m, N), Q(N), (m, 1), q, conv)
        return function_witnesses(avatar("E", N, q, conv, m=m), lhs)
    return _timed("cor59", {"N": N, "m": m, "q": q, "ev": _conv_label(conv)}, body)


def thm57(m, p, N, q, conv=DEFAULT_CONVENTION) -> Report:
    """I(m,p) avatar equals varpi(θ_i^(m-p) θ_j θ_i^(p))."""
    def body():
        word = FreeElement({monomial_word(m, m - p): 1})
        rhs = varpi(word, Q(N), (m, 1), q, conv)
        return function_witnesses(rhs, avatar("I", N, q, conv, m=m, p=p))
    return _timed("thm57", {"N": N, "m": m, "p": p, "q": q, "ev": _conv_label(conv)}, body)


def omega(m, N, q, conv=DEFAULT_CONVENTION, seed=0) -> Report:
    """omega_i carries varpi_Q(f(i,j;m)) to varpi_Q'(f'(i,j;N-m)) on the open loci.

    Also recomputes the left side with a random change of splitting basis.
    """
    def body():
        src = locus_indicator(Q(N), (m, 1), q, "sink_open")
        tgt = locus_indicator(Qprime(N), (N - m, 1), q, "source_open")
        f = transfer(varpi(f_lower(m, N), Q(N), (m, 1), q, conv), src)
        lhs = omega_i(f)
        rhs = transfer(varpi(f_upper(N - m, N), Qprime(N), (N - m, 1), q, conv), tgt)
        out = function_witnesses(rhs, lhs)
        if not out and m > 0:
            rng = np.random.default_rng(seed)
            g = hall.random_invertible(m, q, rng)
            again = omega_i(f, basis_change=g)
            out = function_witnesses(lhs, again)
        return out
    return _timed("omega", {"N": N, "m": m, "q": q, "ev": _conv_label(conv), "seed": seed}, body)


def prop510(m, N, q, conv=DEFAULT_CONVENTION) -> Report:
    """omega_i of the restricted E(m) avatar is ev(v^{-m'N}) on source_open."""
    def body():
        mp = N - m
        src = locus_indicator(Q(N), (m, 1), q, "sink_open")
        tgt = locus_indicator(Qprime(N), (mp, 1), q, "source_open")
        lhs = omega_i(transfer(avatar("E", N, q, conv, m=m), src))
        rhs = HallFunction.from_mask(Qprime(N), (mp, 1), q, conv, tgt.mask,
                                     conv.power(-mp * N, q))
        return function_witnesses(rhs, lhs)
    return _timed("prop510", {"N": N, "m": m, "q": q, "ev": _conv_label(conv)}, body)


def basis(m, N, q, conv=DEFAULT_CONVENTION) -> Report:
    """The m+1 monomials of weight (m,1) have linearly independent images."""
    def body():
        fs = [varpi(monomial(m, p), Q(N), (m, 1), q, conv) for p in range(m + 1)]
        r = hall.rank_certificate(fs)
        return [] if r == m + 1 else [_witness("rank", m + 1, r)]
    return _timed("basis", {"N": N, "m": m, "q": q, "ev": _conv_label(conv)}, body)


# symbolic checks -------------------------------------------------------------------

def _coord_witnesses(expected, actual):
    return [_witness(p, e, a) for p, (e, a) in enumerate(zip(expected, actual)) if e != a]


def cor58(m, N) -> Report:
    """Σ_k v^{b_k} θ_i^(m-k) χ(E^(k)) reassembles θ_j θ_i^(m)."""
    def body():
        lhs = to_coords(cor58_reassembly(m, N), m, N)
        rhs = to_coords(monomial(m, 0), m, N)
        return _coord_witnesses(rhs.coords, lhs.coords)
    return _timed("cor58", {"N": N, "m": m}, body)


def cor59_recursion(m, N) -> Report:
    """Closed form (-1)^p v^{-p(1+N-m)} against the recursion."""
    def body():
        closed = [c_closed(m, p, N) for p in range(m + 1)]
        return _coord_witnesses(closed, c_recursive(m, N))
    return _timed("cor59-recursion", {"N": N, "m": m}, body)


def resolution(m, N) -> Report:
    """Euler characteristic of the shadow against χ(E^(m)) and the closed form."""
    def body():
        chi = chi_E_symbolic(m, N)
        shadow = shadow_euler_characteristic(resolution_shadow(m, N))
        out = _coord_witnesses(chi.coords, shadow.coords)
        closed = [c_closed(m, p, N) for p in range(m + 1)]
        out += _coord_witnesses(closed, chi.coords)
        if not out and not euler_check(m, N):
            out.append(_witness("euler_check", True, False))
        return out
    return _timed("resolution", {"N": N, "m": m}, body)


def qbinom_identity(d) -> Report:
    def body():
        val = qbinom_alternating(d)
        return [] if val == LaurentPoly() else [_witness(d, 0, val)]
    return _timed("qbinom", {"d": d}, body)


# calibration ------------------------------------------------------------------------

CALIBRATION_CHECKS = ("cor59", "thm57", "omega", "prop510")


def hall_suite(name, N, q, conv, ms=None, seed=0) -> list:
    """All reports of one Hall-level check at (N, q) over m (and p)."""
    ms = range(N + 1) if ms is None else [m for m in ms if m <= N]
    out = []
    for m in ms:
        if name == "cor59":
            out.append(cor59(m, N, q, conv))
        elif name == "thm57":
            out.extend(thm57(m, p, N, q, conv) for p in range(m + 1))
        elif name == "omega":
            out.append(omega(m, N, q, conv, seed))
        elif name == "prop510":
            out.append(prop510(m, N, q, conv))
        elif name == "basis":
            out.append(basis(m, N, q, conv))
        else:
            raise ValueError(f"unknown Hall check {name!r}")
    return out


def calibrate(Ns, qs, conventions=tuple(EvalConvention), seed=0):
    """Run the calibration checks under each convention.

    Returns (reports, passing) where reports has one summary per convention
    and passing lists the conventions under which everything passed.
    """
    reports, passing = [], []
    for conv in conventions:
        t0 = time.perf_counter()
        witnesses = []
        for N in Ns:
            for q in qs:
                for name in CALIBRATION_CHECKS:
                    for r in hall_suite(name, N, q, conv, seed=seed):
                        if not r.passed:
                            label = f"{r.check} " + " ".join(
                                f"{k}={v}" for k, v in sorted(r.params.items()) if k != "ev")
                            witnesses.append(_witness(label, "pass", "fail"))
        ms = int(round((time.perf_counter() - t0) * 1000))
        rep = Report("calibrate", {"ev": conv.label, "N": list(Ns), "q": list(qs)},
                     witnesses[:MAX_WITNESSES], ms)
        reports.append(rep)
        if rep.passed:
            passing.append(conv)
    return reports, passing


# product-model survey --------------------------------------------------------------------

def model_survey(q=2, Ns=(1, 2, 3), serre_Ns=(1, 2)) -> dict:
    """Which identities hold under each product model and convention.

    Keys are (ProductModel, EvalConvention, omega scale sign); values are the
    set of names among serre, cor59, thm57, omega, prop510 that hold at every
    (N, m, p) in range.  serre does not involve omega, so it is repeated
    across both scale signs.
    """
    import itertools

    out = {}
    for side, vs, asg in itertools.product(("quotient_first", "sub_first"), (1, -1), (1, -1)):
        model = hall.ProductModel(side, vs, asg)
        for conv in EvalConvention:
            def vp(x, shape, dims):
                return varpi(x, shape, dims, q, conv, model)

            base = set()
            if all(vp(serre_element("i", "j", -N), Q(N), (N + 1, 1)).is_zero() for N in serre_Ns):
                base.add("serre")
            if all(vp(f_lower(m, N), Q(N), (m, 1)) == avatar("E", N, q, conv, m=m)
                   for N in Ns for m in range(N + 1)):
                base.add("cor59")
            if all(vp(FreeElement({monomial_word(m, m - p): 1}), Q(N), (m, 1))
                   == avatar("I", N, q, conv, m=m, p=p)
                   for N in Ns for m in range(N + 1) for p in range(m + 1)):
                base.add("thm57")
            for sign in (1, -1):
                names = set(base)
                om = pr = True
                for N in Ns:
                    for m in range(N + 1):
                        src = locus_indicator(Q(N), (m, 1), q, "sink_open")
                        tgt = locus_indicator(Qprime(N), (N - m, 1), q, "source_open")
                        lhs = omega_i(transfer(vp(f_lower(m, N), Q(N), (m, 1)), src),
                                      scale_sign=sign)
                        om &= lhs == transfer(vp(f_upper(N - m, N), Qprime(N), (N - m, 1)), tgt)
                        lhs = omega_i(transfer(avatar("E", N, q, conv, m=m), src), scale_sign=sign)
                        pr &= lhs == HallFunction.from_mask(Qprime(N), (N - m, 1), q, conv,
                                                            tgt.mask, conv.power(-(N - m) * N, q))
                if om:
                    names.add("omega")
                if pr:
                    names.add("prop510")
                out[(model, conv, sign)] = names
    return out


__all__ = [
    "Report",
    "MAX_WITNESSES",
    "function_witnesses",
    "serre",
    "cor59",
    "thm57",
    "omega",
    "prop510",
    "basis",
    "cor58",
    "cor59_recursion",
    "resolution",
    "qbinom_identity",
    "hall_suite",
    "calibrate",
    "CALIBRATION_CHECKS",
    "model_survey",
]
