from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensor_periods.linalg import RationalMatrix, det, frac_str, kron, parse_frac, sparse_nullspace


def leibniz(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = (-1) ** sum(perm[a] > perm[b] for a in range(n) for b in range(a + 1, n))
        term = Fraction(sign)
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


entry = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 7))
square = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=80, deadline=None)
@given(square)
def test_det_matches_leibniz(rows):
    assert RationalMatrix.from_rows(rows).det() == leibniz(rows)


def test_det_small_cases():
    assert det([]) == 1
    assert RationalMatrix.from_rows([[1, 2], [3, 4]]).det() == -2
    assert RationalMatrix.from_rows([[0, 1], [1, 0]]).det() == -1


def test_kron_and_matmul():
    x = RationalMatrix.from_rows([[1, 2], [3, 4]])
    y = RationalMatrix.from_rows([[0, 1], [1, 1]])
    k = kron(x, y)
    assert k.shape == (4, 4)
    assert k[1, 3] == x[0, 1] * y[1, 1]
    assert k.det() == x.det() ** 2 * y.det() ** 2
    assert (x @ RationalMatrix.identity(2)) == x


def test_frac_serialization():
    assert frac_str(Fraction(-3, 4)) == "-3/4"
    assert frac_str(Fraction(5)) == "5/1"
    assert parse_frac("-3/4") == Fraction(-3, 4)
    assert parse_frac("7") == 7
    m = RationalMatrix.from_rows([[Fraction(1, 2), 3]])
    assert RationalMatrix.from_json(m.to_json()) == m


def test_ragged_rejected():
    with pytest.raises(ValueError):
        RationalMatrix.from_rows([[1, 2], [3]])


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 7).flatmap(
        lambda m: st.tuples(
            st.just(m),
            st.lists(st.dictionaries(st.integers(0, m - 1), st.integers(-3, 3), max_size=m), max_size=8),
        )
    )
)
def test_nullspace_is_kernel_basis(data):
    m, eqs = data
    basis = sparse_nullspace(eqs, m)
    for v in basis:
        for eq in eqs:
            assert sum(c * v[k] for k, c in eq.items()) == 0
    # rank-nullity against an independent rank computation
    rows = [[Fraction(eq.get(k, 0)) for k in range(m)] for eq in eqs]
    assert len(basis) == m - _rank(rows)


def _rank(rows):
    rows = [r[:] for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank
