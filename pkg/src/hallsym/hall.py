"""Ringel-Hall layer over F_q for the two-vertex quiver with N arrows.

Orientation ``sink_at_i`` (Q) has every arrow j -> i, ``source_at_i`` (Q')
has every arrow i -> j.  A point of the representation space is the list of
arrow matrices; its index is

    index = Σ_k entry_k q^k

over the entries of all arrow matrices concatenated in arrow order, each
matrix row-major, entry 0 least significant.

Functions are stored densely as exact values in Q(sqrt q):
value = (A + B sqrt q) / den with A, B integer object arrays and den > 0.

Product convention (see README, "Conventions"): with ν' the dimension of the
first factor and ν'' that of the second,

    (f1 ∘ f2)(x) = ev^{-e(ν',ν'')} Σ_{W} f1(x|V/W) f2(x|W)

summed over x-stable graded W with dim W = ν'', where
e(ν',ν'') = Σ_v ν'_v ν''_v + Σ_arrows ν'_{s} ν''_{t}.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product as iproduct

import numpy as np

from . import kernels
from .freealg import FreeElement, Weight, weight_of, word_weight
from .laurent import (
    DEFAULT_CONVENTION,
    EvalConvention,
    SqrtQValue,
    echelon_forms,
    eval_sqrt_q,
    gaussian_count,
    qfact,
)

ENV_MAX_POINTS = "HALLSYM_MAX_POINTS"
DEFAULT_MAX_POINTS = 10 ** 6

SINK = "sink_at_i"
SOURCE = "source_at_i"


class PointCapError(ValueError):
    """The requested representation space is larger than the point cap."""


def max_points() -> int:
    raw = os.environ.get(ENV_MAX_POINTS)
    if not raw:
        return DEFAULT_MAX_POINTS
    try:
        val = int(float(raw))
    except ValueError:
        raise ValueError(f"{ENV_MAX_POINTS} must be an integer, got {raw!r}") from None
    if val < 1:
        raise ValueError(f"{ENV_MAX_POINTS} must be positive, got {val}")
    return val


def _is_prime(q):
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


def _check_q(q):
    if not _is_prime(int(q)):
        raise ValueError(f"q must be prime, got {q}")


# shapes and points -----------------------------------------------------------

@dataclass(frozen=True)
class QuiverShape:
    N: int
    orientation: str = SINK

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.orientation not in (SINK, SOURCE):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    @property
    def arrow(self):
        """(source vertex, target vertex), the same for all N arrows."""
        return ("j", "i") if self.orientation == SINK else ("i", "j")

    def n_entries(self, dims) -> int:
        return self.N * dims[0] * dims[1]

    def arrow_shape(self, dims):
        """(rows, cols) of each arrow matrix."""
        s, t = self.arrow
        d = {"i": dims[0], "j": dims[1]}
        return d[t], d[s]

    def reflected(self) -> "QuiverShape":
        return QuiverShape(self.N, SOURCE if self.orientation == SINK else SINK)

    def __str__(self):
        return f"{'Q' if self.orientation == SINK else 'Q′'}(N={self.N})"


def Q(N: int) -> QuiverShape:
    return QuiverShape(N, SINK)


def Qprime(N: int) -> QuiverShape:
    return QuiverShape(N, SOURCE)


def _dims(dims) -> Weight:
    d = Weight(int(dims[0]), int(dims[1]))
    if d.i < 0 or d.j < 0:
        raise ValueError(f"dimensions must be nonnegative, got {tuple(d)}")
    return d


def point_count(shape: QuiverShape, dims, q: int) -> int:
    return q ** shape.n_entries(_dims(dims))


def check_cap(shape: QuiverShape, dims, q: int):
    total = point_count(shape, dims, q)
    cap = max_points()
    if total > cap:
        raise PointCapError(
            f"{shape} at dims {tuple(dims)}, q={q} has {total} points "
            f"(q^{shape.n_entries(dims)}), above the cap of {cap}; "
            f"raise {ENV_MAX_POINTS} to allow it")
    return total


@lru_cache(maxsize=64)
def _digits(n_entries: int, q: int) -> np.ndarray:
    arr = kernels.index_digits(n_entries, q)
    arr.flags.writeable = False
    return arr


def enumerate_points(shape: QuiverShape, dims, q: int) -> np.ndarray:
    """All points as a (q^E, E) digit array; row k is the point of index k."""
    _check_q(q)
    dims = _dims(dims)
    check_cap(shape, dims, q)
    return _digits(shape.n_entries(dims), q)


def encode(digits, q: int) -> np.ndarray:
    digits = np.asarray(digits, dtype=np.int64)
    return digits @ kernels.place_values(digits.shape[-1], q)


@dataclass(frozen=True)
class RepPoint:
    shape: QuiverShape
    dims: tuple
    q: int
    mats: tuple  # one (rows, cols) array per arrow

    @classmethod
    def from_index(cls, shape, dims, q, index: int) -> "RepPoint":
        dims = _dims(dims)
        E = shape.n_entries(dims)
        if not 0 <= index < q ** E:
            raise ValueError(f"index {index} out of range for {q ** E} points")
        digits = [(index // q ** k) % q for k in range(E)]
        return cls.from_digits(shape, dims, q, digits)

    @classmethod
    def from_digits(cls, shape, dims, q, digits) -> "RepPoint":
        dims = _dims(dims)
        r, c = shape.arrow_shape(dims)
        flat = np.asarray(digits, dtype=np.int64).reshape(shape.N, r, c)
        return cls(shape, dims, q, tuple(flat[h].copy() for h in range(shape.N)))

    def digits(self) -> np.ndarray:
        if not self.mats:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([np.asarray(m, dtype=np.int64).reshape(-1) for m in self.mats])

    def index(self) -> int:
        return int(sum(int(e) * self.q ** k for k, e in enumerate(self.digits())))

    def __eq__(self, other):
        if not isinstance(other, RepPoint):
            return NotImplemented
        return (self.shape, tuple(self.dims), self.q) == (other.shape, tuple(other.dims), other.q) \
            and all(np.array_equal(a % self.q, b % self.q) for a, b in zip(self.mats, other.mats))

    __hash__ = None


# finite-field matrix helpers ----------------------------------------------------

def mat_inv_mod(g, q: int) -> np.ndarray:
    """Inverse of a square matrix mod q; raises ValueError if singular."""
    g = np.asarray(g, dtype=np.int64) % q
    n = g.shape[0]
    if g.shape != (n, n):
        raise ValueError("group element blocks must be square")
    if n == 0:
        return g.copy()
    aug = np.concatenate([g, np.eye(n, dtype=np.int64)], axis=1)[None]
    R, rank, _ = kernels._rref_np(aug, q)
    if rank[0] < n or not np.array_equal(R[0, :, :n], np.eye(n, dtype=np.int64)):
        raise ValueError("singular group element block")
    return R[0, :, n:].copy()


def random_invertible(d: int, q: int, rng) -> np.ndarray:
    while True:
        g = rng.integers(0, q, size=(d, d))
        if d == 0 or kernels.batch_rank(g[None], q, "numpy")[0] == d:
            return g.astype(np.int64)


def random_group_element(dims, q: int, rng):
    dims = _dims(dims)
    return (random_invertible(dims.i, q, rng), random_invertible(dims.j, q, rng))


def group_act(g, x: RepPoint) -> RepPoint:
    """Each arrow matrix M -> g_t M g_s^{-1}."""
    gi, gj = (np.asarray(b, dtype=np.int64) for b in g)
    dims = x.dims
    if gi.shape != (dims[0], dims[0]) or gj.shape != (dims[1], dims[1]):
        raise ValueError("group element block sizes do not match the dimensions")
    blocks = {"i": gi, "j": gj}
    inv = {"i": mat_inv_mod(gi, x.q), "j": mat_inv_mod(gj, x.q)}
    s, t = x.shape.arrow
    mats = tuple((blocks[t] @ m @ inv[s]) % x.q for m in x.mats)
    return RepPoint(x.shape, dims, x.q, mats)


def action_permutation(shape: QuiverShape, dims, q: int, g) -> np.ndarray:
    """perm[k] = index of g·x_k, for every point index k."""
    dims = _dims(dims)
    E = shape.n_entries(dims)
    # the action is linear in the entries, so build its matrix on unit points
    L = np.zeros((E, E), dtype=np.int64)
    for e in range(E):
        unit = np.zeros(E, dtype=np.int64)
        unit[e] = 1
        L[e] = group_act(g, RepPoint.from_digits(shape, dims, q, unit)).digits()
    X = enumerate_points(shape, dims, q)
    return encode((X @ L) % q, q)


def _primitive_root(q):
    if q == 2:
        return 1
    for a in range(2, q):
        if all(pow(a, (q - 1) // f, q) != 1 for f in _prime_factors(q - 1)):
            return a
    raise AssertionError("no primitive root")


def _prime_factors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _gl_generators(d, q):
    gens = []
    if d == 0:
        return gens
    lam = _primitive_root(q)
    if lam != 1:
        g = np.eye(d, dtype=np.int64)
        g[0, 0] = lam
        gens.append(g)
    for a in range(d):
        for b in range(d):
            if a != b:
                g = np.eye(d, dtype=np.int64)
                g[a, b] = 1
                gens.append(g)
    return gens


def orbit_labels(shape: QuiverShape, dims, q: int) -> np.ndarray:
    """Label each point by the smallest index in its G_V orbit."""
    dims = _dims(dims)
    P = point_count(shape, dims, q)
    check_cap(shape, dims, q)
    perms = []
    eye_i = np.eye(dims.i, dtype=np.int64)
    eye_j = np.eye(dims.j, dtype=np.int64)
    for g in _gl_generators(dims.i, q):
        perms.append(action_permutation(shape, dims, q, (g, eye_j)))
    for g in _gl_generators(dims.j, q):
        perms.append(action_permutation(shape, dims, q, (eye_i, g)))
    labels = np.arange(P, dtype=np.int64)
    changed = True
    while changed:
        old = labels.copy()
        for perm in perms:
            labels = np.minimum(labels, labels[perm])
            np.minimum.at(labels, perm, labels.copy())
        labels = labels[labels]
        changed = not np.array_equal(old, labels)
    return labels


# exact values -------------------------------------------------------------------

def _scalar_parts(s, q):
    """(A, B, D) integers with s = (A + B sqrt q) / D."""
    if isinstance(s, SqrtQValue):
        if s.q != q:
            raise ValueError(f"scalar lives in Q(sqrt {s.q}), expected q={q}")
        a, b = s.a, s.b
    else:
        a, b = Fraction(s), Fraction(0)
    D = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return int(a * D), int(b * D), D


def _obj(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    out[:] = [int(v) for v in values]
    return out


def _obj_zeros(n):
    out = np.empty(n, dtype=object)
    out.fill(0)
    return out


class HallFunction:
    """A function on the points of one representation space.

    Immutable; ``A``, ``B`` and ``den`` hold the exact values and ``locus``
    tags a function produced by restriction.
    """

    __slots__ = ("shape", "dims", "q", "conv", "A", "B", "den", "locus")

    def __init__(self, shape, dims, q, conv, A, B, den=1, locus=None, normalize=True):
        _check_q(q)
        self.shape = shape
        self.dims = _dims(dims)
        self.q = int(q)
        self.conv = conv
        n = point_count(shape, self.dims, self.q)
        A = np.asarray(A, dtype=object)
        B = np.asarray(B, dtype=object)
        if A.shape != (n,) or B.shape != (n,):
            raise ValueError(f"expected {n} values, got {A.shape} and {B.shape}")
        if den <= 0:
            raise ValueError("denominator must be positive")
        if normalize:
            g = reduce(math.gcd, (int(x) for x in A), int(den))
            g = reduce(math.gcd, (int(x) for x in B), g)
            if g > 1:
                A = A // g
                B = B // g
                den = den // g
        self.A = A
        self.B = B
        self.den = int(den)
        self.locus = locus

    # constructors
    @classmethod
    def constant(cls, shape, dims, q, conv=DEFAULT_CONVENTION, value=1):
        n = point_count(shape, _dims(dims), q)
        a, b, d = _scalar_parts(value, q)
        A = _obj_zeros(n) + a
        B = _obj_zeros(n) + b
        return cls(shape, dims, q, conv, A, B, d)

    @classmethod
    def zero(cls, shape, dims, q, conv=DEFAULT_CONVENTION):
        return cls.constant(shape, dims, q, conv, 0)

    @classmethod
    def from_values(cls, shape, dims, q, conv, values):
        """Build from a sequence of SqrtQValue / int / Fraction."""
        parts = [_scalar_parts(v, q) for v in values]
        D = reduce(lambda x, y: x * y // math.gcd(x, y), (p[2] for p in parts), 1)
        A = _obj([p[0] * (D // p[2]) for p in parts])
        B = _obj([p[1] * (D // p[2]) for p in parts])
        return cls(shape, dims, q, conv, A, B, D)

    @classmethod
    def from_mask(cls, shape, dims, q, conv, mask, value=1):
        a, b, d = _scalar_parts(value, q)
        mask = np.asarray(mask, dtype=bool)
        A = _obj_zeros(len(mask))
        B = _obj_zeros(len(mask))
        A[mask] = a
        B[mask] = b
        return cls(shape, dims, q, conv, A, B, d)

    # access
    def __len__(self):
        return len(self.A)

    def __getitem__(self, idx) -> SqrtQValue:
        return SqrtQValue(Fraction(int(self.A[idx]), self.den),
                          Fraction(int(self.B[idx]), self.den), self.q)

    def values(self) -> list:
        return [self[k] for k in range(len(self))]

    def support(self) -> np.ndarray:
        return (self.A != 0) | (self.B != 0)

    def is_zero(self) -> bool:
        return not self.support().any()

    def _same_space(self, other):
        if not isinstance(other, HallFunction):
            raise TypeError("expected a HallFunction")
        if (self.shape, self.dims, self.q) != (other.shape, other.dims, other.q):
            raise ValueError(f"different spaces: {self.shape} {tuple(self.dims)} q={self.q} vs "
                             f"{other.shape} {tuple(other.dims)} q={other.q}")
        if self.conv != other.conv:
            raise ValueError(f"evaluation conventions differ: {self.conv} vs {other.conv}")

    def differs_at(self, other) -> np.ndarray:
        """Point indices where the two functions disagree."""
        self._same_space(other)
        da = self.A * other.den != other.A * self.den
        db = self.B * other.den != other.B * self.den
        return np.nonzero(da | db)[0]

    def __eq__(self, other):
        if not isinstance(other, HallFunction):
            return NotImplemented
        try:
            return len(self.differs_at(other)) == 0
        except ValueError:
            return False

    __hash__ = None

    # linear structure
    def _combine(self, other, sign):
        self._same_space(other)
        A = self.A * other.den + sign * other.A * self.den
        B = self.B * other.den + sign * other.B * self.den
        return HallFunction(self.shape, self.dims, self.q, self.conv, A, B,
                            self.den * other.den)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "HallFunction":
        a, b, d = _scalar_parts(s, self.q)
        A = self.A * a + self.B * (b * self.q)
        B = self.A * b + self.B * a
        return HallFunction(self.shape, self.dims, self.q, self.conv, A, B,
                            self.den * d, self.locus)

    def with_locus(self, locus):
        return HallFunction(self.shape, self.dims, self.q, self.conv, self.A, self.B,
                            self.den, locus, normalize=False)

    def __repr__(self):
        return (f"HallFunction({self.shape}, dims={tuple(self.dims)}, q={self.q}, "
                f"conv={self.conv}, support={int(self.support().sum())}/{len(self)})")


# hall product -------------------------------------------------------------------

@dataclass(frozen=True)
class ProductModel:
    """Which factor sees the quotient, and the twist exponent of ev(v).

    With ν' = dim f1 and ν'' = dim f2 the product is scaled by
    ev^{vertex_sign Σ_v ν'_v ν''_v + arrow_sign Σ_arrows ν'_s ν''_t}.
    ``side="quotient_first"`` sums f1(V/W) f2(W) over stable W of dim ν'';
    ``"sub_first"`` sums f1(W) f2(V/W) over stable W of dim ν'.
    The default is the only combination under which the Serre relation and
    the avatar identities hold together (see tests/test_model_search.py).
    """

    side: str = "quotient_first"
    vertex_sign: int = -1
    arrow_sign: int = -1

    def __post_init__(self):
        if self.side not in ("quotient_first", "sub_first"):
            raise ValueError(f"unknown product side {self.side!r}")
        if self.vertex_sign not in (1, -1) or self.arrow_sign not in (1, -1):
            raise ValueError("twist signs must be +1 or -1")


DEFAULT_MODEL = ProductModel()


def twist_exponent(shape: QuiverShape, first_dims, second_dims,
                   model: ProductModel = DEFAULT_MODEL) -> int:
    """Exponent of ev(v) in f1 ∘ f2 with first_dims = dim f1, second_dims = dim f2."""
    a = _dims(first_dims)
    b = _dims(second_dims)
    s, t = shape.arrow
    idx = {"i": 0, "j": 1}
    vertex = a.i * b.i + a.j * b.j
    arrows = shape.N * a[idx[s]] * b[idx[t]]
    return model.vertex_sign * vertex + model.arrow_sign * arrows


def _basis_data(R, d):
    R = np.asarray(R, dtype=np.int64).reshape(len(R), d)
    piv = [int(np.nonzero(row)[0][0]) for row in R]
    nonpiv = [c for c in range(d) if c not in piv]
    return R.T.copy(), piv, nonpiv


@lru_cache(maxsize=512)
def _subspace_maps(shape: QuiverShape, dims: Weight, Ri, Rj, q: int):
    """Integer matrices (S, A, B) for the graded subspace with RREF bases Ri, Rj.

    For a point with entry vector x: W is stable iff x S = 0 mod q, the
    subrepresentation has entry vector x A and the quotient x B, both in
    the standard layout of their own dimension vectors.
    """
    data = {"i": _basis_data(Ri, dims.i), "j": _basis_data(Rj, dims.j)}
    s, t = shape.arrow
    Bs, piv_s, nonpiv_s = data[s]
    Bt, piv_t, nonpiv_t = data[t]
    rows, cols = shape.arrow_shape(dims)
    E = shape.n_entries(dims)
    stab_cols, sub_cols, quot_cols = [], [], []
    for e in range(E):
        X = np.zeros(E, dtype=np.int64)
        X[e] = 1
        mats = X.reshape(shape.N, rows, cols)
        st, sb, qt = [], [], []
        for h in range(shape.N):
            Xh = mats[h]
            XB = Xh @ Bs
            sb.append(XB[piv_t, :].reshape(-1))
            st.append((XB - Bt @ XB[piv_t, :])[nonpiv_t, :].reshape(-1))
            XS = Xh[:, nonpiv_s]
            qt.append((XS - Bt @ XS[piv_t, :])[nonpiv_t, :].reshape(-1))
        stab_cols.append(np.concatenate(st))
        sub_cols.append(np.concatenate(sb))
        quot_cols.append(np.concatenate(qt))

    def stack(cols_):
        k = len(cols_[0]) if cols_ else 0
        arr = np.array(cols_, dtype=np.int64).reshape(E, k) % q
        arr.flags.writeable = False
        return arr

    return stack(stab_cols), stack(sub_cols), stack(quot_cols)


def subspace_candidates(dims, sub_dims, q):
    dims = _dims(dims)
    sub = _dims(sub_dims)
    if sub.i > dims.i or sub.j > dims.j:
        raise ValueError(f"subdimension {tuple(sub)} exceeds {tuple(dims)}")
    return list(iproduct(list(echelon_forms(dims.i, sub.i, q)),
                         list(echelon_forms(dims.j, sub.j, q))))


def stable_subspaces(x: RepPoint, sub_dims) -> list:
    """Graded subspaces W with dim W = sub_dims and x(W) ⊆ W, as RREF pairs."""
    out = []
    digits = x.digits()[None, :]
    for Ri, Rj in subspace_candidates(x.dims, sub_dims, x.q):
        S, _, _ = _subspace_maps(x.shape, x.dims, Ri, Rj, x.q)
        if np.all((digits @ S) % x.q == 0):
            out.append((Ri, Rj))
    return out


def hall_product(f1: HallFunction, f2: HallFunction, backend_name=None,
                 model: ProductModel = DEFAULT_MODEL) -> HallFunction:
    """Twisted convolution f1 ∘ f2; by default f1 sees the quotient, f2 the sub."""
    if f1.shape != f2.shape or f1.q != f2.q:
        raise ValueError("hall_product needs the same quiver and q")
    if f1.conv != f2.conv:
        raise ValueError(f"evaluation conventions differ: {f1.conv} vs {f2.conv}")
    shape, q = f1.shape, f1.q
    dims = Weight(f1.dims.i + f2.dims.i, f1.dims.j + f2.dims.j)
    fq, fs = (f1, f2) if model.side == "quotient_first" else (f2, f1)
    X = enumerate_points(shape, dims, q)
    n = len(X)
    A = _obj_zeros(n)
    B = _obj_zeros(n)
    rational = not fq.B.any() and not fs.B.any()
    for Ri, Rj in subspace_candidates(dims, fs.dims, q):
        S, Amap, Bmap = _subspace_maps(shape, dims, Ri, Rj, q)
        mask, sub, quot = kernels.stable_split(X, S, Amap, Bmap, q, backend_name)
        if not mask.any():
            continue
        qi = quot[mask]
        si = sub[mask]
        a1, a2 = fq.A[qi], fs.A[si]
        if rational:
            A[mask] += a1 * a2
        else:
            b1, b2 = fq.B[qi], fs.B[si]
            A[mask] += a1 * a2 + (b1 * b2) * q
            B[mask] += a1 * b2 + b1 * a2
    out = HallFunction(shape, dims, q, f1.conv, A, B, f1.den * f2.den)
    k = twist_exponent(shape, f1.dims, f2.dims, model)
    return out.scale(f1.conv.power(k, q)) if k else out


# the algebra map ------------------------------------------------------------------

@lru_cache(maxsize=256)
def divided_power_function(shape: QuiverShape, g: str, n: int, q: int,
                           conv: EvalConvention,
                           model: ProductModel = DEFAULT_MODEL) -> HallFunction:
    """varpi(θ_g^(n)): the n-fold product of f_g divided by [n]!."""
    unit = (1, 0) if g == "i" else (0, 1)
    f = HallFunction.constant(shape, unit, q, conv)
    out = f
    for _ in range(n - 1):
        out = hall_product(out, f, model=model)
    return out.scale(eval_sqrt_q(qfact(n), q, conv).inverse())


@lru_cache(maxsize=256)
def word_function(shape: QuiverShape, word: tuple, q: int, conv: EvalConvention,
                  model: ProductModel = DEFAULT_MODEL) -> HallFunction:
    if not word:
        return HallFunction.constant(shape, (0, 0), q, conv)
    out = divided_power_function(shape, word[0][0], word[0][1], q, conv, model)
    for g, n in word[1:]:
        out = hall_product(out, divided_power_function(shape, g, n, q, conv, model),
                           model=model)
    return out


def varpi(x: FreeElement, shape: QuiverShape, dims, q: int,
          conv: EvalConvention = DEFAULT_CONVENTION,
          model: ProductModel = DEFAULT_MODEL) -> HallFunction:
    """Image of x under θ_g -> f_g, extended multiplicatively and linearly."""
    _check_q(q)
    dims = _dims(dims)
    check_cap(shape, dims, q)
    if x:
        wt = weight_of(x)
        if wt != dims:
            raise ValueError(f"element has weight {tuple(wt)}, expected {tuple(dims)}")
    total = HallFunction.zero(shape, dims, q, conv)
    for word, coeff in x.terms.items():
        assert word_weight(word) == dims
        total = total + word_function(shape, word, q, conv, model).scale(eval_sqrt_q(coeff, q, conv))
    return total


# loci -------------------------------------------------------------------------------

@dataclass(frozen=True)
class Locus:
    name: str
    shape: QuiverShape
    dims: Weight
    q: int
    mask: np.ndarray

    def __contains__(self, index):
        return bool(self.mask[index])

    def count(self) -> int:
        return int(self.mask.sum())


def stacked_at_i(shape: QuiverShape, dims, X) -> np.ndarray:
    """Per point: [x_1 | ... | x_N] into i (Q) or [y_1; ...; y_N] out of i (Q')."""
    dims = _dims(dims)
    P = X.shape[0]
    if shape.orientation == SINK:
        return X.reshape(P, shape.N, dims.i, dims.j).transpose(0, 2, 1, 3).reshape(
            P, dims.i, shape.N * dims.j)
    return X.reshape(P, shape.N * dims.j, dims.i)


def rank_at_i(shape, dims, q, backend_name=None) -> np.ndarray:
    X = enumerate_points(shape, dims, q)
    return kernels.batch_rank(stacked_at_i(shape, dims, X), q, backend_name)


def parse_locus(which):
    if isinstance(which, tuple) and which[0] == "stratum":
        return "stratum", int(which[1])
    text = str(which).replace(" ", "")
    if text in ("sink_open", "source_open"):
        return text, None
    if text.startswith("stratum(") and text.endswith(")"):
        return "stratum", int(text[len("stratum("):-1])
    raise ValueError(f"unknown locus {which!r}")


def locus_indicator(shape: QuiverShape, dims, q: int, which, backend_name=None) -> Locus:
    """sink_open / source_open / stratum(p) as a boolean mask over points."""
    kind, p = parse_locus(which)
    dims = _dims(dims)
    ranks = rank_at_i(shape, dims, q, backend_name)
    if kind == "sink_open":
        if shape.orientation != SINK:
            raise ValueError("sink_open is defined on the quiver with i a sink")
        mask = ranks == dims.i
        name = "sink_open"
    elif kind == "source_open":
        if shape.orientation != SOURCE:
            raise ValueError("source_open is defined on the quiver with i a source")
        mask = ranks == dims.i
        name = "source_open"
    else:
        mask = ranks <= p
        name = f"stratum({p})"
    mask.flags.writeable = False
    return Locus(name, shape, dims, q, mask)


def transfer(f: HallFunction, locus: Locus, mode: str = "restrict") -> HallFunction:
    """restrict: zero outside the locus and tag it; extend_by_zero: drop the tag."""
    if (locus.shape, locus.dims, locus.q) != (f.shape, f.dims, f.q):
        raise ValueError("locus and function live on different spaces")
    if mode == "restrict":
        A = f.A.copy()
        B = f.B.copy()
        A[~locus.mask] = 0
        B[~locus.mask] = 0
        return HallFunction(f.shape, f.dims, f.q, f.conv, A, B, f.den, locus.name)
    if mode == "extend_by_zero":
        if (f.support() & ~locus.mask).any():
            raise ValueError(f"function is not supported inside {locus.name}")
        return f.with_locus(None)
    raise ValueError(f"mode must be 'restrict' or 'extend_by_zero', got {mode!r}")


# BGP reflection ----------------------------------------------------------------------

def omega_i(f: HallFunction, target_dims=None, basis_change=None,
            backend_name=None, scale_sign: int = 1) -> HallFunction:
    """Reflect a function on the sink-open locus of Q to the source-open locus of Q'.

    For y injective at i, the rows of X span {u : u Y = 0} where Y stacks the
    arrows out of i; the blocks of X form a point x of Q with x surjective
    at i, and g(y) = f(x).  The result is q^{s/2} g with s = m^2 - m'^2
    (``scale_sign=-1`` gives the literal q^{-s/2} normalization instead).
    ``basis_change`` (an invertible m x m matrix) replaces X by A X; the
    output must not depend on it.
    """
    if scale_sign not in (1, -1):
        raise ValueError(f"scale_sign must be +1 or -1, got {scale_sign}")
    shape = f.shape
    if shape.orientation != SINK:
        raise ValueError("omega_i expects a function on the quiver with i a sink")
    q, N = f.q, shape.N
    m, dj = f.dims
    mp = N * dj - m
    if mp < 0:
        raise ValueError(f"reflected dimension N*d_j - d_i = {mp} is negative")
    tdims = Weight(mp, dj)
    if target_dims is not None and _dims(target_dims) != tdims:
        raise ValueError(f"target dims must be {tuple(tdims)}, got {tuple(target_dims)}")
    sink = locus_indicator(shape, f.dims, q, "sink_open", backend_name)
    if (f.support() & ~sink.mask).any():
        raise ValueError("omega_i needs a function supported on sink_open")
    target = shape.reflected()
    check_cap(target, tdims, q)
    src = locus_indicator(target, tdims, q, "source_open", backend_name)
    Y = enumerate_points(target, tdims, q)
    pts = np.nonzero(src.mask)[0]
    Ys = stacked_at_i(target, tdims, Y[pts])
    Xs, ok = kernels.left_kernel(Ys, q, backend_name)
    if not ok.all():
        raise AssertionError("source_open point with non-injective arrows")
    if basis_change is not None:
        Amat = np.asarray(basis_change, dtype=np.int64) % q
        mat_inv_mod(Amat, q)  # raises if singular
        Xs = np.einsum("ab,pbn->pan", Amat, Xs) % q
    # blocks x_h = X[:, h*dj:(h+1)*dj], each m x dj, laid out arrow by arrow
    digits = Xs.reshape(len(pts), m, N, dj).transpose(0, 2, 1, 3).reshape(len(pts), -1)
    src_idx = encode(digits, q) if digits.shape[1] else np.zeros(len(pts), dtype=np.int64)
    n = point_count(target, tdims, q)
    A = _obj_zeros(n)
    B = _obj_zeros(n)
    A[pts] = f.A[src_idx]
    B[pts] = f.B[src_idx]
    g = HallFunction(target, tdims, q, f.conv, A, B, f.den, "source_open")
    s = m * m - mp * mp
    return g.scale(SqrtQValue.sqrt_power(scale_sign * s, q))


# avatars --------------------------------------------------------------------------------

def avatar(kind: str, N: int, q: int, conv: EvalConvention = DEFAULT_CONVENTION,
           *, m: int, p: int | None = None, backend_name=None) -> HallFunction:
    """Function avatars on Q at dims (m, 1).

    E: ev^{-mN} on sink_open, zero elsewhere.
    I: x -> ev^{-d_p} #{W : im x ⊆ W ⊆ V_i, dim W = p}, d_p = p(m-p) + pN.
    """
    shape = Q(N)
    if not 0 <= m <= N:
        raise ValueError(f"need 0 <= m <= N, got m={m}, N={N}")
    dims = Weight(m, 1)
    if kind == "E":
        loc = locus_indicator(shape, dims, q, "sink_open", backend_name)
        return HallFunction.from_mask(shape, dims, q, conv, loc.mask, conv.power(-m * N, q))
    if kind == "I":
        if p is None or not 0 <= p <= m:
            raise ValueError(f"I avatar needs 0 <= p <= m, got p={p}")
        ranks = rank_at_i(shape, dims, q, backend_name)
        counts = [gaussian_count(m - r, p - r, q) if r <= p else 0 for r in range(m + 1)]
        table = np.array(counts, dtype=object)
        A = table[ranks]
        f = HallFunction(shape, dims, q, conv, A, _obj_zeros(len(A)), 1)
        return f.scale(conv.power(-(p * (m - p) + p * N), q))
    raise ValueError(f"avatar kind must be 'E' or 'I', got {kind!r}")


# independence certificate ----------------------------------------------------------------

def rank_certificate(fs) -> int:
    """Rank over Q(sqrt q) of the matrix whose rows are the functions' values."""
    fs = list(fs)
    if not fs:
        return 0
    for f in fs[1:]:
        fs[0]._same_space(f)
    cols = np.nonzero(np.any([f.support() for f in fs], axis=0))[0]
    rows = [[f[int(c)] for c in cols] for f in fs]
    rank = 0
    ncol = len(cols)
    for col in range(ncol):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        prow = [v * inv for v in rows[rank]]
        rows[rank] = prow
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                fac = rows[r][col]
                rows[r] = [a - fac * b for a, b in zip(rows[r], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


# random invariant functions for property tests -------------------------------------------

def random_invariant_function(shape, dims, q, conv, rng, sqrt_part=True) -> HallFunction:
    """Random integer (or a + b sqrt q) value per G_V orbit."""
    labels = orbit_labels(shape, dims, q)
    uniq, inv = np.unique(labels, return_inverse=True)
    a = rng.integers(-3, 4, size=len(uniq))
    b = rng.integers(-2, 3, size=len(uniq)) if sqrt_part else np.zeros(len(uniq), dtype=int)
    A = _obj([int(v) for v in a[inv]])
    B = _obj([int(v) for v in b[inv]])
    return HallFunction(shape, dims, q, conv, A, B, 1)


def is_invariant(f: HallFunction, g) -> bool:
    perm = action_permutation(f.shape, f.dims, f.q, g)
    return bool(np.all(f.A[perm] == f.A) and np.all(f.B[perm] == f.B))


__all__ = [
    "ENV_MAX_POINTS",
    "DEFAULT_MAX_POINTS",
    "PointCapError",
    "QuiverShape",
    "Q",
    "Qprime",
    "RepPoint",
    "HallFunction",
    "Locus",
    "max_points",
    "point_count",
    "check_cap",
    "enumerate_points",
    "encode",
    "group_act",
    "action_permutation",
    "random_group_element",
    "orbit_labels",
    "ProductModel",
    "DEFAULT_MODEL",
    "twist_exponent",
    "subspace_candidates",
    "stable_subspaces",
    "hall_product",
    "divided_power_function",
    "word_function",
    "varpi",
    "locus_indicator",
    "transfer",
    "omega_i",
    "avatar",
    "rank_certificate",
    "random_invariant_function",
    "is_invariant",
]
