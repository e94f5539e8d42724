"""Seeded randomized property suites.

Each suite takes a seed and returns a list of failure descriptions (empty
means the property held on every sample).
"""

from __future__ import annotations

import numpy as np

from . import hall
from .freealg import FreeElement, canonical_word, multiply, theta, weight_of
from .hall import Q, hall_product, random_invariant_function, varpi
from .laurent import DEFAULT_CONVENTION, LaurentPoly
from .rank2 import decompose_theta_i, f_lower, monomial_word, project


def random_laurent(rng, max_terms=3, max_exp=3, max_coeff=3) -> LaurentPoly:
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        e = int(rng.integers(-max_exp, max_exp + 1))
        terms[e] = terms.get(e, 0) + int(rng.integers(-max_coeff, max_coeff + 1))
    out = LaurentPoly(terms)
    return out if out else LaurentPoly.constant(1)


def random_word(rng, n_i: int, n_j: int):
    """A random canonical word with the given letter counts."""
    letters = ["i"] * n_i + ["j"] * n_j
    rng.shuffle(letters)
    runs = []
    for g in letters:
        if runs and runs[-1][0] == g:
            runs[-1][1] += 1
        else:
            runs.append([g, 1])
    return canonical_word((g, e) for g, e in runs)


def random_element(rng, n_i: int, n_j: int, n_terms: int = 3) -> FreeElement:
    out = FreeElement.zero()
    for _ in range(n_terms):
        out = out + FreeElement({random_word(rng, n_i, n_j): random_laurent(rng)})
    return out


def _random_dims_split(rng, total, parts):
    """Split total = (ti, tj) into `parts` nonzero dimension vectors."""
    while True:
        cuts = [sorted(rng.integers(0, t + 1, size=parts - 1)) for t in total]
        dims = []
        for k in range(parts):
            lo = [0 if k == 0 else c[k - 1] for c in cuts]
            hi = [t if k == parts - 1 else c[k] for c, t in zip(cuts, total)]
            dims.append((int(hi[0] - lo[0]), int(hi[1] - lo[1])))
        if all(d != (0, 0) for d in dims):
            return dims


# suites ---------------------------------------------------------------------------

def free_associativity(seed, samples=100) -> list:
    rng = np.random.default_rng(seed)
    bad = []
    for k in range(samples):
        xs = []
        for _ in range(3):
            length = int(rng.integers(1, 5))
            runs = []
            for _ in range(length):
                runs.append((str(rng.choice(["i", "j"])), int(rng.integers(1, 4))))
            x = FreeElement.unit()
            for g, e in runs:
                x = multiply(x, theta(g, e))
            xs.append(x)
        a, b, c = xs
        if multiply(multiply(a, b), c) != multiply(a, multiply(b, c)):
            bad.append(f"free algebra sample {k}")
    return bad


def hall_associativity(seed, samples=6) -> list:
    """(f1 ∘ f2) ∘ f3 = f1 ∘ (f2 ∘ f3) on random invariant functions."""
    rng = np.random.default_rng(seed)
    bad = []
    for k in range(samples):
        N = int(rng.integers(1, 3))
        q = int(rng.choice([2, 3]))
        total = (int(rng.integers(2, 4)), int(rng.integers(0, 2)))
        if sum(total) < 3:
            total = (3, total[1])
        dims = _random_dims_split(rng, total, 3)
        fs = [random_invariant_function(Q(N), d, q, DEFAULT_CONVENTION, rng) for d in dims]
        left = hall_product(hall_product(fs[0], fs[1]), fs[2])
        right = hall_product(fs[0], hall_product(fs[1], fs[2]))
        if left != right:
            bad.append(f"N={N} q={q} dims={dims}")
    return bad


def homomorphism(seed, samples=50) -> list:
    """varpi(x y) = varpi(x) ∘ varpi(y) for random homogeneous x, y."""
    rng = np.random.default_rng(seed)
    bad = []
    for k in range(samples):
        N = int(rng.integers(1, 3))
        q = int(rng.choice([2, 3]))
        total = (int(rng.integers(1, 4)), int(rng.integers(0, 2)))
        if total[0] + total[1] < 2:
            total = (2, total[1])
        dx, dy = _random_dims_split(rng, total, 2)
        x = random_element(rng, *dx)
        y = random_element(rng, *dy)
        shape = Q(N)
        xy = multiply(x, y)
        if not xy:
            continue
        lhs = varpi(xy, shape, weight_of(xy), q)
        rhs = hall_product(varpi(x, shape, dx, q), varpi(y, shape, dy, q))
        if lhs != rhs:
            bad.append(f"sample {k}: N={N} q={q} x={x} y={y}")
    return bad


def invariance(seed, samples=4) -> list:
    """Outputs of hall_product, transfer and avatar are G_V-invariant."""
    rng = np.random.default_rng(seed)
    bad = []
    for k in range(samples):
        N = int(rng.integers(1, 4))
        q = int(rng.choice([2, 3]))
        m = int(rng.integers(1, min(N, 2) + 1))
        dims = (m, 1)
        f1 = random_invariant_function(Q(N), (m - 1, 1), q, DEFAULT_CONVENTION, rng)
        f2 = random_invariant_function(Q(N), (1, 0), q, DEFAULT_CONVENTION, rng)
        prod = hall_product(f1, f2)
        loc = hall.locus_indicator(Q(N), dims, q, "sink_open")
        restricted = hall.transfer(prod, loc)
        av = hall.avatar("I", N, q, m=m, p=int(rng.integers(0, m + 1)))
        for _ in range(3):
            g = hall.random_group_element(dims, q, rng)
            for name, f in (("hall_product", prod), ("transfer", restricted), ("avatar", av)):
                if not hall.is_invariant(f, g):
                    bad.append(f"{name} sample {k}: N={N} q={q} dims={dims}")
    return bad


def decomposition(seed, samples=100) -> list:
    """c f(i,j;m) + θ_i y reassembles x exactly."""
    rng = np.random.default_rng(seed)
    bad = []
    for k in range(samples):
        N = int(rng.integers(1, 5))
        m = int(rng.integers(1, N + 1))
        x = FreeElement({monomial_word(m, p): random_laurent(rng)
                         for p in range(m + 1) if rng.random() < 0.8})
        if not x:
            continue
        try:
            c, y = decompose_theta_i(x, m, N)
        except AssertionError as exc:
            bad.append(f"sample {k}: {exc}")
            continue
        if f_lower(m, N).scale(c) + theta("i") * y != x:
            bad.append(f"sample {k}: N={N} m={m} x={x}")
    return bad


def projection(seed, samples=100) -> list:
    """Projections are idempotent and the lower one kills θ_i f."""
    rng = np.random.default_rng(seed)
    bad = []
    for k in range(samples):
        N = int(rng.integers(1, 5))
        m = int(rng.integers(1, N + 1))
        x = FreeElement({monomial_word(m, p): random_laurent(rng) for p in range(m + 1)})
        for side in ("lower", "upper"):
            c, img = project(x, side, N, m)
            c2, img2 = project(img, side, N, m)
            if c2 != c or img2 != img:
                bad.append(f"{side} idempotence sample {k}")
        y = FreeElement({monomial_word(m - 1, p): random_laurent(rng) for p in range(m)})
        c, _ = project(theta("i") * y, "lower", N, m)
        if c != LaurentPoly():
            bad.append(f"θ_i f not killed, sample {k}")
    return bad


SUITES = {
    "free_associativity": free_associativity,
    "hall_associativity": hall_associativity,
    "homomorphism": homomorphism,
    "invariance": invariance,
    "decomposition": decomposition,
    "projection": projection,
}


def run_all(seed) -> dict:
    return {name: fn(seed) for name, fn in SUITES.items()}


__all__ = ["SUITES", "run_all", "random_element", "random_laurent", "random_word"]
