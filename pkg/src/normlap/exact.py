"""Exact integer and rational matrices.

Matrices are numpy arrays of dtype object holding Python ints or
Fractions, so products never overflow and comparisons are exact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .digraph import Digraph

IntMatrix = np.ndarray
RatMatrix = np.ndarray


def int_matrix(rows) -> IntMatrix:
    a = np.array(rows, dtype=object)
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    return np.vectorize(int, otypes=[object])(a) if a.size else a


def rat_matrix(rows) -> RatMatrix:
    a = np.array(rows, dtype=object)
    return np.vectorize(Fraction, otypes=[object])(a) if a.size else a


def adjacency(g: Digraph) -> IntMatrix:
    a = np.zeros((g.n, g.n), dtype=object)
    a[...] = 0
    for u, v in g.arc_order:
        a[u, v] = 1
    return a


def out_degree_matrix(g: Digraph) -> IntMatrix:
    d = np.zeros((g.n, g.n), dtype=object)
    d[...] = 0
    for u, k in enumerate(g.out_degrees()):
        d[u, u] = k
    return d


def laplacian(g: Digraph) -> IntMatrix:
    """Out-degree diagonal minus adjacency; every row sums to zero."""
    return out_degree_matrix(g) - adjacency(g)


def is_normal(m: IntMatrix) -> bool:
    return bool(np.array_equal(m.dot(m.T), m.T.dot(m)))


def is_normal_laplacian(g: Digraph) -> bool:
    return is_normal(laplacian(g))


def is_normal_adjacency(g: Digraph) -> bool:
    return is_normal(adjacency(g))


def normality_combinatorial(g: Digraph) -> bool:
    """Normality of the Laplacian decided from neighbourhood counts alone.

    For each pair u != v, (common in-neighbours) - (common out-neighbours)
    must be 0 when the pair is joined both ways or not at all, d(u) - d(v)
    when only uv is an arc, and d(v) - d(u) when only vu is; d is the
    out-degree.
    """
    outs = g.out_masks
    ins = g.in_masks
    deg = g.out_degrees()
    for u in range(g.n):
        for v in range(u + 1, g.n):
            diff = (ins[u] & ins[v]).bit_count() - (outs[u] & outs[v]).bit_count()
            uv = outs[u] >> v & 1
            vu = outs[v] >> u & 1
            if uv == vu:
                want = 0
            elif uv:
                want = deg[u] - deg[v]
            else:
                want = deg[v] - deg[u]
            if diff != want:
                return False
    return True


def incidence_matrices(g: Digraph) -> tuple[IntMatrix, IntMatrix]:
    """Tail and head incidence matrices (D_t, D_h); column e is arc e of g.arc_order."""
    m = len(g.arc_order)
    dt = np.zeros((g.n, m), dtype=object)
    dh = np.zeros((g.n, m), dtype=object)
    dt[...] = 0
    dh[...] = 0
    for e, (u, v) in enumerate(g.arc_order):
        dt[u, e] = 1
        dh[v, e] = 1
    return dt, dh


def quotient_profile(n: int, y: int, z: int) -> tuple[RatMatrix, Fraction]:
    """Closed-form quotient matrix of the block-symmetrized shifted Laplacian.

    Returns (Q, c) with B = alpha * Q for the 4x4 quotient B and
    det(B) = alpha**4 * c, c = yz / ((n - y)(n - z)).  Rows and columns
    follow the partition (Z, V-Z | V-Y, Y).
    """
    if not (y >= 1 and z >= 1 and y + z <= n):
        raise ValueError(f"need y >= 1, z >= 1, y + z <= n; got n={n}, y={y}, z={z}")
    a = Fraction(y, n - z)
    b = Fraction(z, n - y)
    q = rat_matrix([[0, 0, 1, 0],
                    [0, 0, 1 - a, a],
                    [b, 1 - b, 0, 0],
                    [0, 1, 0, 0]])
    return q, a * b


def rational_det(m) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in np.asarray(m, dtype=object)]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * p for x, p in zip(a[r], a[col])]
    return det
