import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normlap import digraph as dg
from normlap.census import class_codes, decode, census_row
from normlap.exact import (adjacency, incidence_matrices, int_matrix, is_normal, is_normal_adjacency,
                           is_normal_laplacian, laplacian, normality_combinatorial, out_degree_matrix,
                           quotient_profile, rational_det)
from normlap.generators import random_digraph, rng_for


def test_laplacian_examples(c3, k3):
    assert laplacian(c3).tolist() == [[1, -1, 0], [0, 1, -1], [-1, 0, 1]]
    assert laplacian(k3).tolist() == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    assert laplacian(dg.from_arcs(1, [])).tolist() == [[0]]


def test_laplacian_entries_are_python_ints(c3):
    assert all(type(x) is int for x in laplacian(c3).ravel())


def test_normality_examples(c3, path3):
    assert is_normal_laplacian(c3) and is_normal_adjacency(c3)
    assert not is_normal_laplacian(path3) and not is_normal_adjacency(path3)
    assert normality_combinatorial(c3)
    assert not normality_combinatorial(dg.from_arcs(3, [(0, 1), (1, 2), (2, 0), (0, 2)]))


def test_is_normal_generic():
    assert is_normal(int_matrix([[1, 2], [2, 1]]))
    assert not is_normal(int_matrix([[0, 1], [0, 0]]))


def test_normal_counts_n4():
    # every normal Laplacian or adjacency forces balance, and all such classes at n = 4 are counted
    row = census_row(4)
    flags = [decode(int(c), 4) for c in class_codes(4)]
    assert sum(is_normal_laplacian(g) and dg.has_euler_circuit(g) for g in flags) == row.normal_laplacian == 14
    assert sum(is_normal_adjacency(g) and dg.has_euler_circuit(g) for g in flags) == row.normal_adjacency == 14


def _labeled(n):
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        yield dg.from_arcs(n, [p for p, b in zip(pairs, bits) if b])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_combinatorial_criterion_all_labeled(n):
    assert all(normality_combinatorial(g) == is_normal_laplacian(g) for g in _labeled(n))


@pytest.mark.parametrize("n", [5])
def test_combinatorial_criterion_all_classes(n):
    bad = [int(c) for c in class_codes(n) if normality_combinatorial(decode(int(c), n))
           != is_normal_laplacian(decode(int(c), n))]
    assert bad == []


@pytest.mark.parametrize("n", range(6, 10))
def test_combinatorial_criterion_random(n):
    rng = rng_for(n)
    for _ in range(100):
        g = random_digraph(n, float(rng.uniform(0.1, 0.9)), rng)
        assert normality_combinatorial(g) == is_normal_laplacian(g)


def test_regular_normality_coincides():
    for n in range(2, 6):
        for code in class_codes(n):
            g = decode(int(code), n)
            if dg.is_regular(g):
                assert is_normal_laplacian(g) == is_normal_adjacency(g)


@settings(max_examples=50)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1), st.floats(0.0, 1.0))
def test_laplacian_row_and_column_sums(n, seed, p):
    g = random_digraph(n, p, rng_for(seed))
    lap = laplacian(g)
    assert all(s == 0 for s in lap.sum(axis=1))
    assert all(s == 0 for s in lap.sum(axis=0)) == dg.is_balanced(g)


@settings(max_examples=50)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1), st.floats(0.0, 1.0))
def test_incidence_factorisations(n, seed, p):
    g = random_digraph(n, p, rng_for(seed))
    dt, dh = incidence_matrices(g)
    if g.num_arcs == 0:
        return
    assert np.array_equal(dt.dot(dh.T), adjacency(g))
    assert np.array_equal(dt.dot(dt.T), out_degree_matrix(g))
    if dg.is_balanced(g):
        assert np.array_equal(dh.dot(dh.T), out_degree_matrix(g))


def test_incidence_c3(c3):
    dt, dh = incidence_matrices(c3)
    assert dt.shape == (3, 3)
    assert np.array_equal(dt.dot(dt.T), np.eye(3, dtype=int))


def test_quotient_profile_examples():
    _, c = quotient_profile(3, 1, 1)
    assert c == Fraction(1, 4)
    q, c = quotient_profile(4, 1, 2)
    assert q[1, 3] == Fraction(1, 2)
    assert q[2, 0] == Fraction(2, 3)
    assert c == Fraction(1, 3)
    assert q[0, 2] == q[3, 1] == 1


@pytest.mark.parametrize("n, y, z", [(n, y, z) for n in range(2, 8) for y in range(1, n) for z in range(1, n - y + 1)])
def test_quotient_profile_det_and_swap(n, y, z):
    q, c = quotient_profile(n, y, z)
    assert rational_det(q) == c
    assert all(sum(row) == 1 for row in q)
    qs, cs = quotient_profile(n, z, y)
    assert cs == c
    assert qs[1, 3] == q[2, 0] and qs[2, 0] == q[1, 3]


@pytest.mark.parametrize("n, y, z", [(3, 0, 1), (3, 2, 2), (2, 1, 0)])
def test_quotient_profile_rejects(n, y, z):
    with pytest.raises(ValueError):
        quotient_profile(n, y, z)


def test_rational_det():
    assert rational_det([[2, 1], [1, 1]]) == 1
    assert rational_det([[0, 1], [1, 0]]) == -1
    assert rational_det([[1, 2], [2, 4]]) == 0
    m = np.array([[Fraction(1, 2), 3, 0], [1, 1, Fraction(2, 3)], [0, 5, 7]], dtype=object)
    assert abs(float(rational_det(m)) - np.linalg.det(m.astype(float))) < 1e-12
