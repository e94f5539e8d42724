import csv
import io

import pytest

from hallsym.freealg import FreeElement
from hallsym.hall import Q, avatar, varpi
from hallsym.laurent import LaurentPoly, V
from hallsym.rank2 import CoordVector, from_coords, monomial
from hallsym.resolution import (
    c_closed,
    c_recursive,
    chi_E_symbolic,
    coefficient_table,
    coefficients,
    cor58_reassembly,
    euler_check,
    qbinom_alternating,
    resolution_shadow,
    table_to_csv,
)

PAIRS_6 = [(m, N) for N in range(1, 7) for m in range(N + 1)]


def test_coefficient_examples():
    a, b, c = coefficients(2, 0, 2)
    assert (a, b, c) == (-4, -4, LaurentPoly.constant(1))
    assert all(coefficients(m, m, N)[1] == 0 for N in range(1, 5) for m in range(N + 1))
    assert coefficients(2, 1, 2)[2] == -V ** -1


def test_recursion_examples():
    assert c_recursive(0, 3) == [1]
    assert c_recursive(1, 1) == [1, -V ** -1]
    assert c_recursive(2, 2) == [1, -V ** -1, V ** -2]


def test_chi_examples():
    assert chi_E_symbolic(0, 4) == CoordVector(0, (1,))
    assert chi_E_symbolic(1, 1) == CoordVector(1, (1, -V ** -1))
    assert chi_E_symbolic(2, 2) == CoordVector(2, (1, -V ** -1, V ** -2))


@pytest.mark.parametrize("d", [1, 2, 5])
def test_qbinom_alternating_examples(d):
    assert qbinom_alternating(d) == LaurentPoly()


def test_shadow_examples():
    assert resolution_shadow(1, 1).as_tuples() == [(0, 0, 0), (1, -1, 1)]
    assert resolution_shadow(0, 3).as_tuples() == [(0, 0, 0)]
    assert resolution_shadow(2, 3).as_tuples() == [(0, 0, 0), (1, -2, 1), (2, -4, 2)]


def test_euler_check_examples():
    assert euler_check(1, 1)
    assert all(euler_check(0, N) for N in range(1, 5))
    assert euler_check(3, 3)


def test_rejections():
    with pytest.raises(ValueError):
        coefficients(3, 1, 2)
    with pytest.raises(ValueError):
        coefficients(2, 3, 2)
    with pytest.raises(ValueError):
        qbinom_alternating(0)
    with pytest.raises(ValueError):
        resolution_shadow(1, 0)


# invariants -----------------------------------------------------------------------

@pytest.mark.parametrize("m,N", PAIRS_6)
def test_recursion_matches_closed_form(m, N):
    assert c_recursive(m, N) == [c_closed(m, p, N) for p in range(m + 1)]


@pytest.mark.parametrize("m,N", PAIRS_6)
def test_chi_matches_closed_form(m, N):
    assert chi_E_symbolic(m, N).coords == tuple(c_closed(m, p, N) for p in range(m + 1))


@pytest.mark.parametrize("m,N", PAIRS_6)
def test_cor58_reassembly(m, N):
    assert cor58_reassembly(m, N) == monomial(m, 0)


@pytest.mark.parametrize("m,N", PAIRS_6)
def test_euler_check(m, N):
    assert euler_check(m, N)
    assert len(resolution_shadow(m, N).terms) == m + 1


def test_qbinom_alternating_vanishes():
    for d in range(1, 13):
        assert qbinom_alternating(d) == LaurentPoly()


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("m,N", [(m, N) for N in range(1, 4) for m in range(N + 1)])
def test_chi_realized_by_hall_avatar(m, N, q):
    x = from_coords(chi_E_symbolic(m, N))
    assert varpi(x, Q(N), (m, 1), q) == avatar("E", N, q, m=m)


def test_csv_export():
    text = table_to_csv(coefficient_table(2))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["m", "p", "a", "b", "c"]
    assert ["2", "1", "-3", "-1", "-v^-1"] in rows
    assert len(rows) == 1 + 6


def test_chi_is_free_element_compatible():
    x = from_coords(chi_E_symbolic(2, 3))
    assert isinstance(x, FreeElement) and len(x) == 3
