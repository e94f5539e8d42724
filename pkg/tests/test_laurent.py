from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hallsym.laurent import (
    DEFAULT_CONVENTION,
    EvalConvention,
    InexactDivision,
    LaurentFraction,
    LaurentPoly,
    SqrtQValue,
    V,
    echelon_forms,
    eval_sqrt_q,
    gaussian_count,
    parse_laurent,
    qbinom,
    qfact,
    qint,
)

P = LaurentPoly

polys = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(LaurentPoly)


# worked examples -----------------------------------------------------------------

def test_qint_examples():
    assert qint(2) == P({1: 1, -1: 1})
    assert qint(0) == P()
    assert qint(-2) == -P({1: 1, -1: 1})


def test_qfact_examples():
    assert qfact(0) == P({0: 1})
    assert qfact(2) == P({1: 1, -1: 1})
    assert qfact(3) == P({3: 1, 1: 2, -1: 2, -3: 1})


def test_qbinom_examples():
    assert qbinom(2, 1) == V + V ** -1
    assert all(qbinom(m, 0) == 1 for m in range(8))
    assert qbinom(4, 2) == P({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})


def test_eval_examples():
    conv = EvalConvention.PLUS_INV_SQRT
    assert eval_sqrt_q(P({-2: 1}), 3, conv) == SqrtQValue(3, 0, 3)
    assert eval_sqrt_q(V, 2, conv) == SqrtQValue(0, Fraction(1, 2), 2)
    assert eval_sqrt_q(qbinom(2, 1), 2, conv) == SqrtQValue(0, Fraction(3, 2), 2)


def test_gaussian_count_examples():
    assert gaussian_count(2, 1, 2) == 3
    assert gaussian_count(2, 1, 3) == 4
    assert all(gaussian_count(m, 0, q) == 1 for m in range(5) for q in (2, 3))


def test_echelon_forms_are_distinct_full_rank():
    forms = list(echelon_forms(3, 2, 2))
    assert len(forms) == len(set(forms)) == 7


# errors ----------------------------------------------------------------------------

def test_qfact_rejects_negative():
    with pytest.raises(ValueError):
        qfact(-1)


def test_qbinom_rejects_p_above_m():
    with pytest.raises(ValueError):
        qbinom(2, 3)


def test_exact_div_raises_on_remainder():
    with pytest.raises(InexactDivision):
        qint(3).exact_div(qint(2))
    assert qfact(4).exact_div(qfact(2)) == qint(3) * qint(4)


def test_inexact_true_division_gives_fraction():
    x = qint(3) / qint(2)
    assert isinstance(x, LaurentFraction)
    assert x * qint(2) == qint(3)
    assert isinstance(qfact(3) / qint(3), LaurentPoly)


def test_sqrtq_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        SqrtQValue(0, 0, 2).inverse()


# invariants ---------------------------------------------------------------------------

def test_qint_odd():
    for n in range(-20, 21):
        assert qint(-n) == -qint(n)


@pytest.mark.parametrize("m", range(13))
def test_qbinom_symmetric_and_bar_invariant(m):
    for p in range(m + 1):
        c = qbinom(m, p)
        assert c == qbinom(m, m - p)
        assert c.bar() == c
        assert all(k > 0 for k in c.terms.values())


@pytest.mark.parametrize("m", range(1, 13))
def test_qbinom_pascal(m):
    for p in range(1, m):
        rhs = V ** p * qbinom(m - 1, p) + V ** -(m - p) * qbinom(m - 1, p - 1)
        assert qbinom(m, p) == rhs


@pytest.mark.parametrize("q", [2, 3, 5])
def test_bridge_identity_literal(q):
    # eval(qbinom)·q^{p(m-p)/2} = count, at v -> +q^{-1/2}
    conv = EvalConvention.PLUS_INV_SQRT
    for m in range(5):
        for p in range(m + 1):
            lhs = eval_sqrt_q(qbinom(m, p), q, conv) * SqrtQValue.sqrt_power(p * (m - p), q)
            assert lhs == SqrtQValue(gaussian_count(m, p, q), 0, q)


@pytest.mark.parametrize("conv", list(EvalConvention))
@pytest.mark.parametrize("q", [2, 3, 5])
def test_bridge_identity_any_sign(conv, q):
    # sign-aware form: normalize by ev(v)^{∓p(m-p)} instead of q^{p(m-p)/2}
    for m in range(5):
        for p in range(m + 1):
            k = p * (m - p) * conv.half
            lhs = eval_sqrt_q(qbinom(m, p), q, conv) * conv.power(k, q)
            assert lhs == SqrtQValue(gaussian_count(m, p, q), 0, q)


def test_bridge_literal_fails_for_negative_root():
    # with -q^{-1/2} the literal normalization is off by (-1)^{p(m-p)}
    conv = EvalConvention.MINUS_INV_SQRT
    lhs = eval_sqrt_q(qbinom(2, 1), 2, conv) * SqrtQValue.sqrt_power(1, 2)
    assert lhs == SqrtQValue(-3, 0, 2)


@settings(max_examples=100, deadline=None)
@given(polys, polys, st.sampled_from(list(EvalConvention)), st.sampled_from([2, 3, 5]))
def test_eval_is_ring_homomorphism(x, y, conv, q):
    assert eval_sqrt_q(x * y, q, conv) == eval_sqrt_q(x, q, conv) * eval_sqrt_q(y, q, conv)
    assert eval_sqrt_q(x + y, q, conv) == eval_sqrt_q(x, q, conv) + eval_sqrt_q(y, q, conv)


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert all(c != 0 for c in (x * y).terms.values())


@settings(max_examples=100, deadline=None)
@given(st.integers(-20, 20), st.integers(-20, 20), st.sampled_from([2, 3, 5, 7]))
def test_sqrtq_inverse(a, b, q):
    x = SqrtQValue(a, b, q)
    if not x:
        return
    assert x * x.inverse() == SqrtQValue(1, 0, q)


@settings(max_examples=50, deadline=None)
@given(polys)
def test_render_parse_roundtrip(x):
    assert parse_laurent(str(x)) == x


def test_render_format():
    assert str(P({2: 1, 0: 1, -1: -3})) == "v^2 + 1 - 3*v^-1"
    assert str(P()) == "0"


def test_convention_parse_and_default():
    assert EvalConvention.parse("+q^-1/2") is EvalConvention.PLUS_INV_SQRT
    assert EvalConvention.parse("-q^1/2") is EvalConvention.MINUS_SQRT
    assert DEFAULT_CONVENTION is EvalConvention.PLUS_SQRT
    with pytest.raises(ValueError):
        EvalConvention.parse("q^2")


def test_convention_power_matches_repeated_product():
    for conv in EvalConvention:
        for k in range(-5, 6):
            assert conv.power(k, 3) == conv.value(3) ** k
