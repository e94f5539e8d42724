import numpy as np
import pytest

from hallsym.freealg import (
    FreeElement,
    Weight,
    canonical_word,
    multiply,
    parse_element,
    reflection_word,
    render,
    serre_element,
    theta,
    theta_y,
    weight_of,
)
from hallsym.laurent import LaurentPoly, V, qbinom, qfact
from hallsym.properties import random_element

W = FreeElement.word


def test_merge_examples():
    assert multiply(theta("i"), theta("i")) == W([("i", 2)], V + V ** -1)
    assert multiply(theta("i", 2), theta("i")) == W([("i", 3)], qbinom(3, 1))
    assert multiply(theta("j"), theta("i", 2)) == W([("j", 1), ("i", 2)])


def test_theta_y_examples():
    assert theta_y([("i", 1), ("j", 1), ("i", 1)]) == W([("i", 1), ("j", 1), ("i", 1)])
    assert theta_y([("i", 2)]) == W([("i", 2)])
    assert theta_y([("i", 1), ("i", 1)]) == W([("i", 2)], V + V ** -1)


def test_serre_examples():
    assert serre_element("i", "j", -1) == (
        W([("j", 1), ("i", 2)]) - W([("i", 1), ("j", 1), ("i", 1)]) + W([("i", 2), ("j", 1)]))
    assert serre_element("i", "j", 0) == W([("j", 1), ("i", 1)]) - W([("i", 1), ("j", 1)])
    expected = FreeElement.zero()
    for k in range(4):
        runs = ([("i", k)] if k else []) + [("j", 1)] + ([("i", 3 - k)] if k < 3 else [])
        expected = expected + W(runs, (-1) ** k)
    assert serre_element("i", "j", -2) == expected


def test_reflection_word_examples():
    assert reflection_word("lower", m=0) == theta("j")
    assert reflection_word("lower", m=1, a_ij=-1) == (
        W([("j", 1), ("i", 1)]) - W([("i", 1), ("j", 1)], V ** -1))
    assert reflection_word("upper", m=2, a_ij=-2) == (
        W([("i", 2), ("j", 1)]) - W([("i", 1), ("j", 1), ("i", 1)], V ** -1)
        + W([("j", 1), ("i", 2)], V ** -2))


def test_weight_examples():
    assert weight_of(W([("i", 2), ("j", 1)])) == Weight(2, 1)
    assert weight_of(FreeElement.unit()) == Weight(0, 0)
    assert weight_of(W([("j", 1), ("i", 1)]) + W([("i", 1), ("j", 1)])) == Weight(1, 1)


def test_weight_addition_is_componentwise():
    assert Weight(1, 2) + Weight(3, 0) == Weight(4, 2)


# errors -----------------------------------------------------------------------------

def test_rejects_bad_input():
    with pytest.raises(ValueError):
        weight_of(theta("i") + theta("j"))
    with pytest.raises(ValueError):
        serre_element("i", "j", 1)
    with pytest.raises(ValueError):
        theta_y([("i", 0)])
    with pytest.raises(ValueError):
        theta("k")


def test_canonical_word_rejects_unmerged_runs():
    assert canonical_word([("i", 3), ("j", 1)]) == (("i", 3), ("j", 1))
    with pytest.raises(ValueError):
        canonical_word([("i", 1), ("i", 2)])


def test_no_zero_coefficients_stored():
    x = theta("i") - theta("i")
    assert x == FreeElement.zero()
    assert len(x) == 0


# invariants -------------------------------------------------------------------------

def test_associativity_random_triples():
    rng = np.random.default_rng(7)
    for _ in range(100):
        xs = []
        for _ in range(3):
            runs = [(str(rng.choice(["i", "j"])), int(rng.integers(1, 4)))
                    for _ in range(int(rng.integers(1, 5)))]
            xs.append(theta_y(runs))
        a, b, c = xs
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_weight_additivity():
    rng = np.random.default_rng(3)
    for _ in range(50):
        dx = (int(rng.integers(0, 3)), int(rng.integers(0, 2)))
        dy = (int(rng.integers(0, 3)), int(rng.integers(0, 2)))
        x, y = random_element(rng, *dx), random_element(rng, *dy)
        xy = multiply(x, y)
        if x and y:
            assert weight_of(xy) == weight_of(x) + weight_of(y)


@pytest.mark.parametrize("a", range(1, 7))
def test_power_equals_qfact_times_divided_power(a):
    x = FreeElement.unit()
    for _ in range(a):
        x = multiply(x, theta("i"))
    assert x == W([("i", a)], qfact(a))


def test_reflection_words_agree_at_m0():
    for a in range(0, -4, -1):
        assert reflection_word("lower", m=0, a_ij=a) == reflection_word("upper", m=0, a_ij=a) == theta("j")


# text format -----------------------------------------------------------------------

def test_render_format():
    assert render(serre_element("i", "j", -1)) == "θ_j*θ_i^(2) - θ_i*θ_j*θ_i + θ_i^(2)*θ_j"
    assert render(reflection_word("lower", m=1)) == "θ_j*θ_i - v^-1*θ_i*θ_j"
    assert render(theta("i") * theta("i")) == "(v + v^-1)*θ_i^(2)"
    assert render(FreeElement.unit()) == "1"
    assert render(FreeElement.zero()) == "0"


def test_render_parse_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = random_element(rng, int(rng.integers(0, 4)), int(rng.integers(0, 2)))
        assert parse_element(render(x)) == x


def test_parse_ascii_spelling():
    assert parse_element("theta_j*theta_i^(2) - v^-1*theta_i") == (
        W([("j", 1), ("i", 2)]) - W([("i", 1)], LaurentPoly({-1: 1})))
