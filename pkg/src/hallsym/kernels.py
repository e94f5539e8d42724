"""Hot loops of the Hall layer, in two interchangeable implementations.

Each kernel has a numba version (per-point loops compiled with ``@njit``)
and a pure numpy version (vectorized across points).  The numba path is used
when numba imports and ``HALLSYM_DISABLE_NUMBA`` is unset or ``0``; every
public function also takes ``backend="numba" | "numpy"`` to force one.

All arithmetic is integer arithmetic modulo a small prime q, so both paths
must agree bit for bit.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


ENV_DISABLE = "HALLSYM_DISABLE_NUMBA"


def backend(requested: str | None = None) -> str:
    """Resolve which implementation to run."""
    if requested is not None:
        if requested not in ("numba", "numpy"):
            raise ValueError(f"unknown backend {requested!r}")
        if requested == "numba" and not NUMBA_AVAILABLE:
            raise RuntimeError("numba backend requested but numba is not installed")
        return requested
    flag = os.environ.get(ENV_DISABLE, "").strip().lower()
    if flag not in ("", "0", "false", "no") or not NUMBA_AVAILABLE:
        return "numpy"
    return "numba"


def inverse_table(q: int) -> np.ndarray:
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = pow(a, q - 2, q)
    return inv


def place_values(k: int, q: int) -> np.ndarray:
    return q ** np.arange(k, dtype=np.int64)


def index_digits(n_entries: int, q: int) -> np.ndarray:
    """All points as rows of base-q digits, least significant entry first."""
    total = q ** n_entries
    idx = np.arange(total, dtype=np.int64)
    if n_entries == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return (idx[:, None] // place_values(n_entries, q)[None, :]) % q


# stable-subspace split ------------------------------------------------------
#
# For a fixed graded subspace W the tests "x(W) ⊆ W", the induced map on W and
# the induced map on V/W are all linear in the arrow entries, so they are given
# by integer matrices S, A, B.  The kernel applies them to every point.

@njit(cache=True)
def _split_nb(X, S, A, B, q):
    P, E = X.shape
    ks = S.shape[1]
    ka = A.shape[1]
    kb = B.shape[1]
    mask = np.zeros(P, dtype=np.bool_)
    sub = np.zeros(P, dtype=np.int64)
    quot = np.zeros(P, dtype=np.int64)
    for p in range(P):
        ok = True
        for c in range(ks):
            acc = 0
            for e in range(E):
                acc += X[p, e] * S[e, c]
            if acc % q != 0:
                ok = False
                break
        if not ok:
            continue
        mask[p] = True
        place = 1
        idx = 0
        for c in range(ka):
            acc = 0
            for e in range(E):
                acc += X[p, e] * A[e, c]
            idx += (acc % q) * place
            place *= q
        sub[p] = idx
        place = 1
        idx = 0
        for c in range(kb):
            acc = 0
            for e in range(E):
                acc += X[p, e] * B[e, c]
            idx += (acc % q) * place
            place *= q
        quot[p] = idx
    return mask, sub, quot


def _split_np(X, S, A, B, q):
    mask = np.all((X @ S) % q == 0, axis=1)
    Xm = X[mask]
    sub = np.zeros(X.shape[0], dtype=np.int64)
    quot = np.zeros(X.shape[0], dtype=np.int64)
    sub[mask] = ((Xm @ A) % q) @ place_values(A.shape[1], q)
    quot[mask] = ((Xm @ B) % q) @ place_values(B.shape[1], q)
    return mask, sub, quot


def stable_split(X, S, A, B, q, backend_name=None):
    """Per point: is W stable, and the indices of the sub and quotient reps."""
    X = np.ascontiguousarray(X, dtype=np.int64)
    S = np.ascontiguousarray(S, dtype=np.int64)
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    if backend(backend_name) == "numba":
        return _split_nb(X, S, A, B, q)
    return _split_np(X, S, A, B, q)


# batched row reduction -------------------------------------------------------

@njit(cache=True)
def _rref_one(M, q, inv):
    """Reduce M in place; return (rank, pivot columns padded with -1)."""
    r, c = M.shape
    pivots = -np.ones(min(r, c), dtype=np.int64)
    row = 0
    for col in range(c):
        if row >= r:
            break
        piv = -1
        for k in range(row, r):
            if M[k, col] % q != 0:
                piv = k
                break
        if piv < 0:
            continue
        if piv != row:
            for t in range(c):
                tmp = M[row, t]
                M[row, t] = M[piv, t]
                M[piv, t] = tmp
        s = inv[M[row, col] % q]
        for t in range(c):
            M[row, t] = (M[row, t] * s) % q
        for k in range(r):
            if k != row:
                f = M[k, col] % q
                if f != 0:
                    for t in range(c):
                        M[k, t] = (M[k, t] - f * M[row, t]) % q
        pivots[row] = col
        row += 1
    return row, pivots


@njit(cache=True)
def _rank_nb(mats, q, inv):
    P = mats.shape[0]
    out = np.zeros(P, dtype=np.int64)
    for p in range(P):
        M = mats[p].copy()
        rk, _ = _rref_one(M, q, inv)
        out[p] = rk
    return out


def _rref_np(mats, q):
    """Vectorized reduced row-echelon form of a stack of matrices mod q."""
    M = np.array(mats, dtype=np.int64) % q
    P, r, c = M.shape
    inv = inverse_table(q)
    row = np.zeros(P, dtype=np.int64)
    pivcols = np.zeros((P, c), dtype=bool)
    rows_ar = np.arange(r)
    for col in range(c):
        cand = (M[:, :, col] != 0) & (rows_ar[None, :] >= row[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        pr = row[idx]
        pv = np.argmax(cand[idx], axis=1)
        top = M[idx, pr].copy()
        M[idx, pr] = M[idx, pv]
        M[idx, pv] = top
        scale = inv[M[idx, pr, col]]
        M[idx, pr] = (M[idx, pr] * scale[:, None]) % q
        factors = M[idx, :, col].copy()
        factors[np.arange(len(idx)), pr] = 0
        M[idx] = (M[idx] - factors[:, :, None] * M[idx, pr][:, None, :]) % q
        pivcols[idx, col] = True
        row[idx] += 1
    return M, row, pivcols


def batch_rank(mats, q, backend_name=None) -> np.ndarray:
    """Rank mod q of each matrix in a (P, r, c) stack."""
    mats = np.asarray(mats, dtype=np.int64)
    P, r, c = mats.shape
    if r == 0 or c == 0:
        return np.zeros(P, dtype=np.int64)
    if backend(backend_name) == "numba":
        return _rank_nb(np.ascontiguousarray(mats), q, inverse_table(q))
    return _rref_np(mats, q)[1]


# left kernels ----------------------------------------------------------------

@njit(cache=True)
def _left_kernel_nb(Ys, q, inv):
    P, n, k = Ys.shape
    d = n - k
    out = np.zeros((P, d, n), dtype=np.int64)
    ok = np.ones(P, dtype=np.bool_)
    for p in range(P):
        M = np.ascontiguousarray(Ys[p].T).copy()
        rk, pivots = _rref_one(M, q, inv)
        if rk != k:
            ok[p] = False
            continue
        is_piv = np.zeros(n, dtype=np.bool_)
        for t in range(rk):
            is_piv[pivots[t]] = True
        a = 0
        for f in range(n):
            if is_piv[f]:
                continue
            out[p, a, f] = 1
            for t in range(rk):
                out[p, a, pivots[t]] = (-M[t, f]) % q
            a += 1
    return out, ok


def _left_kernel_np(Ys, q):
    P, n, k = Ys.shape
    d = n - k
    out = np.zeros((P, d, n), dtype=np.int64)
    if k == 0:
        out[:] = np.eye(n, dtype=np.int64)[None]
        return out, np.ones(P, dtype=bool)
    R, rank, pivcols = _rref_np(np.transpose(Ys, (0, 2, 1)), q)
    ok = rank == k
    # group points by pivot pattern so each group is one vectorized fill
    patterns, inverse = np.unique(pivcols, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    for g, pat in enumerate(patterns):
        if pat.sum() != k:
            continue
        members = np.nonzero(inverse == g)[0]
        pc = np.nonzero(pat)[0]
        fc = np.nonzero(~pat)[0]
        for a, f in enumerate(fc):
            out[members, a, f] = 1
            for t, col in enumerate(pc):
                out[members, a, col] = (-R[members, t, f]) % q
    return out, ok


def left_kernel(Ys, q, backend_name=None):
    """Basis rows of {u : u Y = 0} for each injective Y in a (P, n, k) stack.

    Returns (bases, ok) where bases has shape (P, n-k, n) and ok flags the
    points where Y really has rank k (other rows are left as zeros).
    """
    Ys = np.asarray(Ys, dtype=np.int64)
    P, n, k = Ys.shape
    if backend(backend_name) == "numba":
        if k == 0:
            out = np.zeros((P, n, n), dtype=np.int64)
            out[:] = np.eye(n, dtype=np.int64)[None]
            return out, np.ones(P, dtype=bool)
        return _left_kernel_nb(np.ascontiguousarray(Ys), q, inverse_table(q))
    return _left_kernel_np(Ys, q)


__all__ = [
    "NUMBA_AVAILABLE",
    "ENV_DISABLE",
    "backend",
    "inverse_table",
    "place_values",
    "index_digits",
    "stable_split",
    "batch_rank",
    "left_kernel",
]
