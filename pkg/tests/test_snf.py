"""Smith normal form against a determinantal-divisor oracle."""
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from simplepoly.complexes.snf import INT64_MAX, smith_normal_form, sparse_smith
from simplepoly.errors import SNFOverflow


def det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n))


def oracle(a):
    """Invariant factors d_k = D_k / D_{k-1}, D_k the gcd of k x k minors."""
    rows, cols = len(a), len(a[0])
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in combinations(range(rows), k):
            for c in combinations(range(cols), k):
                g = gcd(g, det([[a[i][j] for j in c] for i in r]))
        if g == 0:
            break
        divisors.append(g)
    return tuple(divisors[k] // divisors[k - 1] for k in range(1, len(divisors)))


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=1000)
@given(matrices)
def test_dense_matches_oracle(a):
    res = smith_normal_form(a)
    assert res.factors == oracle(a)
    assert res.rank == len(res.factors)
    for x, y in zip(res.factors, res.factors[1:]):
        assert y % x == 0


@settings(max_examples=300)
@given(matrices)
def test_sparse_matches_dense(a):
    cols = [{i: a[i][j] for i in range(len(a)) if a[i][j]} for j in range(len(a[0]))]
    sp = sparse_smith(cols, len(a))
    dense = smith_normal_form(a)
    assert sp.rank == dense.rank
    assert sp.torsion == dense.torsion


def test_known_examples():
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).factors == (2, 6, 12)
    assert smith_normal_form([[0, 0], [0, 0]]).rank == 0
    assert smith_normal_form([[2]]).torsion == (2,)


def test_overflow_is_detected():
    with pytest.raises(SNFOverflow):
        smith_normal_form([[INT64_MAX + 1]])
