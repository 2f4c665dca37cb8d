"""Witness families: abelian Cayley digraphs, rotational tournaments, random inputs."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .digraph import Digraph, DigraphError, from_arcs
from .exact import is_normal_laplacian

# every random generator here is numpy's default PCG64 bit generator
RNG_ALGORITHM = "numpy.random.PCG64"


def rng_for(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class AbelianGroupSpec:
    """Z_{n1} x ... x Z_{nk} with a connection set of nonidentity elements."""

    orders: tuple[int, ...]
    connection: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        orders = tuple(int(o) for o in self.orders)
        if not orders or any(o < 1 for o in orders):
            raise ValueError("cycle orders must be positive")
        conn = []
        for c in self.connection:
            c = (c,) if isinstance(c, (int, np.integer)) else tuple(c)
            if len(c) != len(orders):
                raise ValueError(f"element {c} has the wrong number of coordinates")
            c = tuple(int(x) % o for x, o in zip(c, orders))
            if not any(c):
                raise DigraphError("identity in the connection set would create loops")
            if c in conn:
                raise ValueError(f"duplicate connection element {c}")
            conn.append(c)
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "connection", tuple(conn))

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def elements(self) -> list[tuple[int, ...]]:
        """Mixed-radix lexicographic order; element index is its vertex number."""
        return list(itertools.product(*(range(o) for o in self.orders)))


def cayley_abelian(spec: AbelianGroupSpec) -> Digraph:
    elems = spec.elements()
    index = {e: i for i, e in enumerate(elems)}
    arcs = []
    for e in elems:
        for c in spec.connection:
            target = tuple((a + b) % o for a, b, o in zip(e, c, spec.orders))
            arcs.append((index[e], index[target]))
    return from_arcs(len(elems), arcs)


def abelian_groups(order: int) -> list[tuple[int, ...]]:
    """One cycle-order tuple per abelian group of the given order (prime-power factors)."""
    if order < 1:
        raise ValueError("group order must be positive")
    factors: dict[int, int] = {}
    m, p = order, 2
    while p * p <= m:
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    per_prime = []
    for p, e in sorted(factors.items()):
        per_prime.append([tuple(p ** k for k in part) for part in _partitions(e)])
    if not per_prime:
        return [(1,)]
    return [sum(combo, ()) for combo in itertools.product(*per_prime)]


def _partitions(e: int, largest: int | None = None):
    largest = e if largest is None else largest
    if e == 0:
        yield ()
        return
    for k in range(min(e, largest), 0, -1):
        for rest in _partitions(e - k, k):
            yield (k,) + rest


def random_connection_set(orders: Sequence[int], rng: np.random.Generator,
                          size: int | None = None) -> tuple[tuple[int, ...], ...]:
    elems = [e for e in itertools.product(*(range(o) for o in orders)) if any(e)]
    if not elems:
        return ()
    if size is None:
        size = int(rng.integers(1, len(elems) + 1))
    picks = rng.choice(len(elems), size=min(size, len(elems)), replace=False)
    return tuple(elems[i] for i in sorted(picks))


def rotational_tournament(n: int, s: Iterable[int]) -> Digraph:
    """Circulant tournament on Z_n with arcs i -> i + s for s in S."""
    s = sorted({int(x) % n for x in s})
    if n < 1 or n % 2 == 0:
        raise ValueError("a rotational tournament needs odd n")
    neg = {(-x) % n for x in s}
    if 0 in s or set(s) & neg or len(s) != (n - 1) // 2:
        raise ValueError(f"S={s} does not split Z_{n} minus 0 into S and -S")
    return from_arcs(n, [(i, (i + x) % n) for i in range(n) for x in s])


def quadratic_residues(p: int) -> list[int]:
    return sorted({x * x % p for x in range(1, p)})


def random_eulerian(n: int, cycles: int, seed, max_retries: int = 1000) -> Digraph:
    """Union of random directed cycles; every vertex ends up balanced.

    Each cycle has a uniformly random length in 2..n on a random ordered
    vertex subset.  A cycle reusing an existing arc is redrawn.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    rng = rng_for(seed)
    present: set[tuple[int, int]] = set()
    arcs: list[tuple[int, int]] = []
    for _ in range(cycles):
        for _attempt in range(max_retries):
            k = int(rng.integers(2, n + 1))
            verts = [int(v) for v in rng.permutation(n)[:k]]
            cyc = [(verts[i], verts[(i + 1) % k]) for i in range(k)]
            if not any(a in present for a in cyc):
                break
        else:
            raise RuntimeError(f"could not place an arc-disjoint cycle after {max_retries} tries")
        present.update(cyc)
        arcs.extend(cyc)
    return from_arcs(n, arcs)


def random_digraph(n: int, p: float, rng: np.random.Generator) -> Digraph:
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    return from_arcs(n, zip(*np.nonzero(mask)))


def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Edge list of a connected simple graph: a random spanning tree plus G(n, p) edges."""
    order = [int(v) for v in rng.permutation(n)]
    edges = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges.add(tuple(sorted((order[i], order[j]))))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return sorted(edges)


def bidirected_from_graph(n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    arcs = []
    for u, v in edges:
        if u == v:
            raise DigraphError(f"loop at vertex {u}")
        arcs += [(u, v), (v, u)]
    return from_arcs(n, arcs)


def directed_cycle(n: int) -> Digraph:
    if n < 2:
        raise ValueError("a directed cycle needs at least two vertices")
    return from_arcs(n, [(i, (i + 1) % n) for i in range(n)])


def complete_digraph(n: int) -> Digraph:
    return from_arcs(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def rotational_sets(n: int) -> list[tuple[int, ...]]:
    """Every S with S and -S partitioning Z_n minus 0 (n odd)."""
    half = range(1, (n - 1) // 2 + 1)
    return [tuple(sorted(x if keep else n - x for x, keep in zip(half, bits)))
            for bits in itertools.product((True, False), repeat=len(half))]


def family_suite(name: str, max_n: int, rng: np.random.Generator, count: int = 50,
                 normal_only: bool = False) -> Iterable[tuple[str, Digraph]]:
    """Labelled witness digraphs for one family.

    tournaments  every rotational tournament with odd n <= max_n
    cayley       ``count`` random connection sets for each abelian group of order 2..max_n
    random       ``count`` random eulerian digraphs with 2 <= n <= max_n; with
                 ``normal_only`` draws are repeated until the Laplacian is normal
    """
    if name == "tournaments":
        for n in range(3, max_n + 1, 2):
            for s in rotational_sets(n):
                yield f"tournament n={n} S={list(s)}", rotational_tournament(n, s)
    elif name == "cayley":
        for order in range(2, max_n + 1):
            for orders in abelian_groups(order):
                for _ in range(count):
                    spec = AbelianGroupSpec(orders, random_connection_set(orders, rng))
                    yield f"cayley {list(orders)} C={[list(c) for c in spec.connection]}", cayley_abelian(spec)
    elif name == "random":
        made = 0
        while made < count:
            n = int(rng.integers(2, max_n + 1))
            cycles = int(rng.integers(1, n))
            seed = int(rng.integers(0, 2 ** 32))
            g = random_eulerian(n, cycles, seed)
            if normal_only and not is_normal_laplacian(g):
                continue
            made += 1
            yield f"eulerian n={n} cycles={cycles} seed={seed}", g
    else:
        raise ValueError(f"unknown family {name!r}")
