import itertools
from fractions import Fraction

import numpy as np
import pytest

from hallsym import hall
from hallsym.freealg import multiply, serre_element, theta, theta_y
from hallsym.hall import (
    HallFunction,
    PointCapError,
    Q,
    Qprime,
    RepPoint,
    avatar,
    enumerate_points,
    group_act,
    hall_product,
    locus_indicator,
    omega_i,
    rank_certificate,
    stable_subspaces,
    transfer,
    varpi,
)
from hallsym.laurent import (
    DEFAULT_CONVENTION,
    EvalConvention,
    SqrtQValue,
    eval_sqrt_q,
    gaussian_count,
    qfact,
)
from hallsym.properties import random_element
from hallsym.rank2 import f_lower, f_upper, monomial

CONV = DEFAULT_CONVENTION


def const(shape, dims, q, value=1):
    return HallFunction.constant(shape, dims, q, CONV, value)


def fi(shape, q):
    return const(shape, (1, 0), q)


def fj(shape, q):
    return const(shape, (0, 1), q)


# points and the index encoding ----------------------------------------------------

def test_enumerate_examples():
    assert len(enumerate_points(Q(1), (1, 1), 2)) == 2
    assert len(enumerate_points(Q(2), (2, 1), 2)) == 16
    assert len(enumerate_points(Q(3), (0, 1), 5)) == 1


def test_index_encoding_is_little_endian_row_major():
    # arrows of Q(2) at dims (2,1) are 2x1; digits (0,1 | 1,0) -> 0 + 2 + 4
    x = RepPoint.from_index(Q(2), (2, 1), 2, 6)
    assert [m.tolist() for m in x.mats] == [[[0], [1]], [[1], [0]]]
    assert x.index() == 6
    X = enumerate_points(Qprime(1), (2, 2), 3)
    for k in (0, 1, 17, 80):
        assert RepPoint.from_digits(Qprime(1), (2, 2), 3, X[k]).index() == k
    # Q' arrows are d_j x d_i; row-major on a 2x3 matrix
    y = RepPoint.from_index(Qprime(1), (3, 2), 2, 2 ** 3)
    assert y.mats[0].tolist() == [[0, 0, 0], [1, 0, 0]]


def test_point_cap(monkeypatch):
    monkeypatch.setenv(hall.ENV_MAX_POINTS, "100")
    with pytest.raises(PointCapError):
        enumerate_points(Q(2), (2, 2), 2)
    assert len(enumerate_points(Q(1), (2, 2), 2)) == 16


def test_rejects_non_prime_q():
    with pytest.raises(ValueError):
        varpi(theta("i"), Q(1), (1, 0), 4)


# group action ---------------------------------------------------------------------------

def test_group_act_examples():
    x = RepPoint.from_index(Q(2), (2, 1), 3, 41)
    eye = (np.eye(2, dtype=int), np.eye(1, dtype=int))
    assert group_act(eye, x) == x
    y = RepPoint.from_index(Q(1), (1, 1), 5, 3)
    assert group_act((np.array([[2]]), np.array([[2]])), y) == y
    swap = (np.array([[0, 1], [1, 0]]), np.eye(1, dtype=int))
    gx = group_act(swap, x)
    assert all(np.array_equal(a, b[::-1]) for a, b in zip(gx.mats, x.mats))


def test_group_act_rejects_singular():
    x = RepPoint.from_index(Q(1), (2, 1), 2, 1)
    with pytest.raises(ValueError):
        group_act((np.array([[1, 1], [1, 1]]), np.eye(1, dtype=int)), x)


# stable subspaces ---------------------------------------------------------------------

def test_stable_subspace_examples():
    zero = RepPoint.from_index(Q(2), (2, 2), 3, 0)
    for sub in [(1, 1), (2, 1), (1, 0), (0, 2)]:
        expected = gaussian_count(2, sub[0], 3) * gaussian_count(2, sub[1], 3)
        assert len(stable_subspaces(zero, sub)) == expected
    x = RepPoint.from_index(Q(1), (1, 1), 2, 1)
    assert stable_subspaces(x, (0, 1)) == []
    for k in range(2):
        assert len(stable_subspaces(RepPoint.from_index(Q(1), (1, 1), 2, k), (1, 0))) == 1


def test_stable_subspaces_brute_force():
    # every graded subspace of dims (1,1) for Q(1) over F_2 at dims (2,1)
    q = 2
    for k in range(len(enumerate_points(Q(1), (2, 1), q))):
        x = RepPoint.from_index(Q(1), (2, 1), q, k)
        col = x.mats[0][:, 0] % q
        # W = (line L in V_i, V_j); stable iff image of V_j lies in L
        lines = [np.array(v) for v in [(1, 0), (0, 1), (1, 1)]]
        expected = sum(1 for L in lines if not col.any()
                       or np.array_equal(col, L))
        assert len(stable_subspaces(x, (1, 1))) == expected


# products -----------------------------------------------------------------------------

@pytest.mark.parametrize("q", [2, 3])
def test_product_examples(q):
    s = Q(1)
    ji = hall_product(fj(s, q), fi(s, q))
    assert ji == const(s, (1, 1), q, CONV.power(-1, q))
    ij = hall_product(fi(s, q), fj(s, q))
    zero_pt = np.arange(q) == 0
    assert ij == HallFunction.from_mask(s, (1, 1), q, CONV, zero_pt)


def test_fi_fi_example():
    ii = hall_product(fi(Q(1), 2), fi(Q(1), 2))
    assert all(v == SqrtQValue(0, Fraction(3, 2), 2) for v in ii.values())


def test_product_rejects_mismatch():
    with pytest.raises(ValueError):
        hall_product(fi(Q(1), 2), fi(Q(1), 3))
    with pytest.raises(ValueError):
        hall_product(fi(Q(1), 2), HallFunction.constant(Q(1), (1, 0), 2,
                                                         EvalConvention.MINUS_SQRT))


def test_twist_exponent_is_minus_euler_form_plus_diagonal():
    # ev^{-(Σ ν'_v ν''_v + N Σ ν'_s ν''_t)}
    assert hall.twist_exponent(Q(2), (0, 1), (1, 0)) == -2
    assert hall.twist_exponent(Q(2), (1, 0), (0, 1)) == 0
    assert hall.twist_exponent(Q(2), (1, 1), (1, 1)) == -4


# varpi ---------------------------------------------------------------------------------

@pytest.mark.parametrize("q", [2, 3])
def test_varpi_examples(q):
    assert varpi(theta("j"), Q(1), (0, 1), q) == const(Q(1), (0, 1), q)
    assert varpi(theta("i", 2), Q(1), (2, 0), q) == const(Q(1), (2, 0), q)
    nonzero = np.arange(q) != 0
    expected = HallFunction.from_mask(Q(1), (1, 1), q, CONV, nonzero, CONV.power(-1, q))
    assert varpi(f_lower(1, 1), Q(1), (1, 1), q) == expected


def test_varpi_rejects_weight_mismatch():
    with pytest.raises(ValueError):
        varpi(theta("i"), Q(1), (0, 1), 2)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_divided_power_consistency(n, q):
    f = fi(Q(1), q)
    power = f
    for _ in range(n - 1):
        power = hall_product(power, f)
    scaled = varpi(theta("i", n), Q(1), (n, 0), q).scale(eval_sqrt_q(qfact(n), q, CONV))
    assert power == scaled


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("N", [1, 2])
def test_serre_vanishing(N, q):
    assert varpi(serre_element("i", "j", -N), Q(N), (N + 1, 1), q).is_zero()


def test_homomorphism_sample():
    rng = np.random.default_rng(5)
    for _ in range(10):
        x = random_element(rng, 1, 1)
        y = random_element(rng, 1, 0)
        lhs = varpi(multiply(x, y), Q(2), (2, 1), 3)
        rhs = hall_product(varpi(x, Q(2), (1, 1), 3), varpi(y, Q(2), (1, 0), 3))
        assert lhs == rhs


# loci and transfer -------------------------------------------------------------------

def test_locus_examples():
    assert locus_indicator(Q(1), (1, 1), 3, "sink_open").mask.tolist() == [False, True, True]
    assert locus_indicator(Qprime(1), (0, 1), 2, "source_open").mask.tolist() == [True]
    assert locus_indicator(Q(2), (2, 1), 2, "stratum(1)").count() == 10


def test_stratum_count_matches_enumeration():
    # pairs of vectors in F_q^2 spanning at most a line
    for q in (2, 3):
        count = 0
        for a, b, c, d in itertools.product(range(q), repeat=4):
            count += (a * d - b * c) % q == 0
        assert locus_indicator(Q(2), (2, 1), q, ("stratum", 1)).count() == count


def test_locus_orientation_checked():
    with pytest.raises(ValueError):
        locus_indicator(Qprime(1), (1, 1), 2, "sink_open")
    with pytest.raises(ValueError):
        locus_indicator(Q(1), (1, 1), 2, "source_open")
    with pytest.raises(ValueError):
        locus_indicator(Q(1), (1, 1), 2, "somewhere")


def test_transfer_examples():
    s = Q(1)
    loc = locus_indicator(s, (1, 1), 2, "sink_open")
    r = transfer(const(s, (1, 1), 2), loc)
    assert r.values() == [SqrtQValue(0, 0, 2), SqrtQValue(1, 0, 2)]
    rng = np.random.default_rng(0)
    f = hall.random_invariant_function(Q(2), (2, 1), 3, CONV, rng)
    loc2 = locus_indicator(Q(2), (2, 1), 3, "sink_open")
    ext = transfer(transfer(f, loc2), loc2, "extend_by_zero")
    # extend_by_zero after restrict multiplies by the locus indicator
    assert all((ext[k] == f[k]) if loc2.mask[k] else not ext[k] for k in range(len(f)))
    ij = varpi(theta_y([("i", 1), ("j", 1)]), s, (1, 1), 2)
    assert transfer(ij, loc).is_zero()


def test_restrict_after_extend_is_identity():
    loc = locus_indicator(Q(2), (1, 1), 3, "sink_open")
    f = transfer(avatar("E", 2, 3, m=1), loc)
    assert transfer(transfer(f, loc, "extend_by_zero"), loc) == f


def test_extend_rejects_unsupported():
    loc = locus_indicator(Q(1), (1, 1), 2, "sink_open")
    with pytest.raises(ValueError):
        transfer(const(Q(1), (1, 1), 2), loc, "extend_by_zero")


# omega ---------------------------------------------------------------------------------

@pytest.mark.parametrize("q", [2, 3])
def test_omega_m1_to_m0(q):
    src = locus_indicator(Q(1), (1, 1), q, "sink_open")
    out = omega_i(transfer(avatar("E", 1, q, m=1), src))
    assert out.dims == (0, 1)
    assert out.values() == [SqrtQValue(1, 0, q)]


@pytest.mark.parametrize("q", [2, 3])
def test_omega_m0_to_m1(q):
    out = omega_i(const(Q(1), (0, 1), q))
    nonzero = np.arange(q) != 0
    assert out == HallFunction.from_mask(Qprime(1), (1, 1), q, CONV, nonzero,
                                         SqrtQValue.sqrt_power(-1, q))
    tgt = locus_indicator(Qprime(1), (1, 1), q, "source_open")
    assert out == transfer(varpi(f_upper(1, 1), Qprime(1), (1, 1), q), tgt)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_omega_independent_of_splitting_basis(seed):
    rng = np.random.default_rng(seed)
    q, N, m = 3, 3, 2
    loc = locus_indicator(Q(N), (m, 1), q, "sink_open")
    f = transfer(hall.random_invariant_function(Q(N), (m, 1), q, CONV, rng), loc)
    a = omega_i(f, basis_change=hall.random_invertible(m, q, rng))
    b = omega_i(f, basis_change=hall.random_invertible(m, q, rng))
    assert a == b == omega_i(f)


def test_omega_rejections():
    with pytest.raises(ValueError):
        omega_i(const(Q(1), (1, 1), 2))  # not supported on sink_open
    with pytest.raises(ValueError):
        omega_i(const(Q(1), (2, 1), 2))  # reflected dimension negative
    with pytest.raises(ValueError):
        omega_i(const(Qprime(1), (0, 1), 2))
    with pytest.raises(ValueError):
        omega_i(const(Q(1), (0, 1), 2), scale_sign=2)


# avatars -------------------------------------------------------------------------------

@pytest.mark.parametrize("q", [2, 3])
def test_avatar_examples(q):
    assert avatar("E", 2, q, m=0) == const(Q(2), (0, 1), q)
    for N in (1, 2):
        for m in range(N + 1):
            assert avatar("I", N, q, m=m, p=m) == const(Q(N), (m, 1), q, CONV.power(-m * N, q))
    zero_pt = np.arange(q) == 0
    I10 = avatar("I", 1, q, m=1, p=0)
    assert I10 == HallFunction.from_mask(Q(1), (1, 1), q, CONV, zero_pt)
    assert I10 == varpi(theta_y([("i", 1), ("j", 1)]), Q(1), (1, 1), q)


def test_avatar_rejections():
    with pytest.raises(ValueError):
        avatar("E", 1, 2, m=2)
    with pytest.raises(ValueError):
        avatar("I", 2, 2, m=1, p=2)
    with pytest.raises(ValueError):
        avatar("S", 2, 2, m=1)


# rank certificate ----------------------------------------------------------------------

def test_rank_certificate_examples():
    a = varpi(theta_y([("j", 1), ("i", 1)]), Q(1), (1, 1), 2)
    b = varpi(theta_y([("i", 1), ("j", 1)]), Q(1), (1, 1), 2)
    assert rank_certificate([a, b]) == 2
    assert rank_certificate([a, a]) == 1
    fs = [varpi(monomial(2, p), Q(2), (2, 1), 2) for p in range(3)]
    assert rank_certificate(fs) == 3
    assert rank_certificate([]) == 0


def test_rank_certificate_sees_dependence():
    a = varpi(f_lower(1, 2), Q(2), (1, 1), 3)
    b = varpi(monomial(1, 0), Q(2), (1, 1), 3)
    c = a.scale(SqrtQValue(2, 1, 3)) - b
    assert rank_certificate([a, b, c]) == 2


# invariance ------------------------------------------------------------------------------

@pytest.mark.parametrize("q", [2, 3])
def test_outputs_are_invariant(q):
    rng = np.random.default_rng(q)
    N, dims = 2, (2, 1)
    f1 = hall.random_invariant_function(Q(N), (1, 1), q, CONV, rng)
    f2 = hall.random_invariant_function(Q(N), (1, 0), q, CONV, rng)
    prod = hall_product(f1, f2)
    loc = locus_indicator(Q(N), dims, q, "sink_open")
    for _ in range(5):
        g = hall.random_group_element(dims, q, rng)
        assert hall.is_invariant(prod, g)
        assert hall.is_invariant(transfer(prod, loc), g)
        for p in range(3):
            assert hall.is_invariant(avatar("I", N, q, m=2, p=p), g)


def test_non_invariant_function_detected():
    f = HallFunction.from_mask(Q(1), (1, 1), 3, CONV, np.array([False, True, False]))
    assert not hall.is_invariant(f, (np.array([[2]]), np.array([[1]])))


@pytest.mark.parametrize("q", [2, 3])
def test_associativity_sample(q):
    rng = np.random.default_rng(10 + q)
    fs = [hall.random_invariant_function(Q(2), d, q, CONV, rng) for d in [(1, 0), (1, 1), (1, 0)]]
    assert hall_product(hall_product(fs[0], fs[1]), fs[2]) == \
        hall_product(fs[0], hall_product(fs[1], fs[2]))


def test_function_arithmetic():
    s = Q(1)
    f = const(s, (1, 1), 3, SqrtQValue(1, 2, 3))
    assert f - f == HallFunction.zero(s, (1, 1), 3)
    assert (f + f) == f.scale(2)
    assert -f == f.scale(-1)
    assert f[0] == SqrtQValue(1, 2, 3)
