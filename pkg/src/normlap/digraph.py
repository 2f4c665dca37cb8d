"""Loop-free digraphs on vertices 0..n-1 and their structural predicates.

A digraph is stored as one out-neighbour bitmask per vertex.  Python ints
are unbounded, so the same representation serves every order.  A digon
(both uv and vu) stands for an undirected edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np


class DigraphError(ValueError):
    """Invalid vertex, loop, or malformed digraph input."""


class ParseError(DigraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _mask(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, (int, np.integer)):
        return int(vertices)
    m = 0
    for v in vertices:
        m |= 1 << int(v)
    return m


def _members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Digraph:
    n: int
    out_masks: tuple[int, ...]
    # arc order as first supplied; incidence matrices index their columns by it
    arc_order: tuple[tuple[int, int], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0 or len(self.out_masks) != self.n:
            raise DigraphError("out_masks must have one entry per vertex")
        full = (1 << self.n) - 1
        for u, m in enumerate(self.out_masks):
            if m & ~full:
                raise DigraphError(f"vertex {u} has an arc to a vertex outside 0..{self.n - 1}")
            if m >> u & 1:
                raise DigraphError(f"loop at vertex {u}")
        if not self.arc_order:
            arcs = tuple((u, v) for u in range(self.n) for v in _members(self.out_masks[u]))
            object.__setattr__(self, "arc_order", arcs)

    # construction -------------------------------------------------------

    @classmethod
    def from_matrix(cls, adjacency) -> "Digraph":
        a = np.asarray(adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DigraphError("adjacency matrix must be square")
        n = a.shape[0]
        masks = []
        for u in range(n):
            m = 0
            for v in np.nonzero(a[u])[0]:
                m |= 1 << int(v)
            masks.append(m)
        return cls(n, tuple(masks))

    # basic queries ------------------------------------------------------

    @property
    def in_masks(self) -> tuple[int, ...]:
        ins = [0] * self.n
        for u, m in enumerate(self.out_masks):
            for v in _members(m):
                ins[v] |= 1 << u
        return tuple(ins)

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return list(self.arc_order)

    @property
    def num_arcs(self) -> int:
        return sum(m.bit_count() for m in self.out_masks)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out_masks[u] >> v & 1)

    def out_neighbours(self, u: int) -> list[int]:
        return _members(self.out_masks[u])

    def in_neighbours(self, u: int) -> list[int]:
        return _members(self.in_masks[u])

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.arc_order:
            a[u, v] = 1
        return a

    def out_degrees(self) -> list[int]:
        return [m.bit_count() for m in self.out_masks]

    def in_degrees(self) -> list[int]:
        return [m.bit_count() for m in self.in_masks]

    # derived digraphs ---------------------------------------------------

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Vertex u of self becomes vertex perm[u] of the result."""
        if sorted(perm) != list(range(self.n)):
            raise DigraphError("perm is not a permutation of the vertices")
        return from_arcs(self.n, [(perm[u], perm[v]) for u, v in self.arc_order])

    def reverse(self) -> "Digraph":
        return from_arcs(self.n, [(v, u) for u, v in self.arc_order])

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.arcs})"


def from_arcs(n: int, arc_list: Iterable[tuple[int, int]]) -> Digraph:
    """Build a digraph on n vertices from ordered pairs; duplicates collapse."""
    if n < 0:
        raise DigraphError("vertex count must be nonnegative")
    masks = [0] * n
    order = []
    for u, v in arc_list:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise DigraphError(f"arc ({u}, {v}) has a vertex outside 0..{n - 1}")
        if u == v:
            raise DigraphError(f"loop at vertex {u}")
        if not masks[u] >> v & 1:
            masks[u] |= 1 << v
            order.append((u, v))
    return Digraph(n, tuple(masks), tuple(order))


def disjoint_union(*graphs: Digraph) -> Digraph:
    arcs = []
    offset = 0
    for g in graphs:
        arcs.extend((u + offset, v + offset) for u, v in g.arc_order)
        offset += g.n
    return from_arcs(offset, arcs)


# degrees --------------------------------------------------------------------

def _check_vertex(g: Digraph, u: int) -> None:
    if not 0 <= u < g.n:
        raise DigraphError(f"vertex {u} outside 0..{g.n - 1}")


def out_degree(g: Digraph, u: int) -> int:
    _check_vertex(g, u)
    return g.out_masks[u].bit_count()


def in_degree(g: Digraph, u: int) -> int:
    _check_vertex(g, u)
    return sum(m >> u & 1 for m in g.out_masks)


def common_out(g: Digraph, u: int, v: int) -> int:
    """|{w : uw, vw arcs}|."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        raise DigraphError("common_out needs two distinct vertices")
    return (g.out_masks[u] & g.out_masks[v]).bit_count()


def common_in(g: Digraph, u: int, v: int) -> int:
    """|{w : wu, wv arcs}|."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        raise DigraphError("common_in needs two distinct vertices")
    both = (1 << u) | (1 << v)
    return sum(1 for m in g.out_masks if m & both == both)


# connectivity ---------------------------------------------------------------

def _reach(start: int, nbrs: Sequence[int]) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in _members(frontier):
            nxt |= nbrs[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def weak_components(g: Digraph) -> list[list[int]]:
    """Vertex sets of the weakly connected components, in order of least vertex."""
    ins = g.in_masks
    sym = [g.out_masks[u] | ins[u] for u in range(g.n)]
    left = (1 << g.n) - 1
    comps = []
    while left:
        s = (left & -left).bit_length() - 1
        comp = _reach(s, sym)
        comps.append(_members(comp))
        left &= ~comp
    return comps


def is_weakly_connected(g: Digraph) -> bool:
    return g.n > 0 and len(weak_components(g)) == 1


def is_strongly_connected(g: Digraph) -> bool:
    if g.n == 0:
        return False
    full = (1 << g.n) - 1
    return _reach(0, g.out_masks) == full and _reach(0, g.in_masks) == full


def is_balanced(g: Digraph) -> bool:
    """in-degree equals out-degree at every vertex."""
    return g.out_degrees() == g.in_degrees()


def is_eulerian(g: Digraph) -> bool:
    """Weakly connected and balanced (hence strongly connected)."""
    return is_weakly_connected(g) and is_balanced(g)


def has_euler_circuit(g: Digraph) -> bool:
    """Some closed trail uses every arc exactly once.

    Balanced, with all arcs inside a single weak component; isolated
    vertices are ignored.  The arcless digraph qualifies.
    """
    if not is_balanced(g):
        return False
    nontrivial = [c for c in weak_components(g) if len(c) > 1]
    return len(nontrivial) <= 1


def is_regular(g: Digraph) -> bool:
    return len(set(g.out_degrees())) <= 1 and len(set(g.in_degrees())) <= 1


def is_undirected(g: Digraph) -> bool:
    return g.out_masks == g.in_masks


def is_tournament(g: Digraph) -> bool:
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.has_arc(u, v) == g.has_arc(v, u):
                return False
    return True


# separations ----------------------------------------------------------------

@dataclass(frozen=True)
class Separation:
    """Disjoint nonempty Y, Z with no arc from Z to Y."""

    Y: frozenset[int]
    Z: frozenset[int]

    @property
    def y(self) -> int:
        return len(self.Y)

    @property
    def z(self) -> int:
        return len(self.Z)

    def rest(self, n: int) -> frozenset[int]:
        return frozenset(range(n)) - self.Y - self.Z


def is_separation(g: Digraph, Y, Z) -> bool:
    ym, zm = _mask(Y), _mask(Z)
    full = (1 << g.n) - 1
    if not ym or not zm or ym & zm or (ym | zm) & ~full:
        return False
    return all(not (g.out_masks[z] & ym) for z in _members(zm))


# text format ----------------------------------------------------------------

def parse_text(text: str) -> Digraph:
    """Parse `n m` followed by m lines `u v`; `#` starts a comment line."""
    header = None
    arcs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(lineno, f"expected integers, got {line!r}") from None
        if len(nums) != 2:
            raise ParseError(lineno, f"expected two integers, got {len(nums)}")
        if header is None:
            if nums[0] < 1 or nums[1] < 0:
                raise ParseError(lineno, "header needs n >= 1 and m >= 0")
            header = (nums[0], nums[1], lineno)
            continue
        u, v = nums
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(lineno, f"vertex out of range 0..{n - 1}")
        if u == v:
            raise ParseError(lineno, f"loop at vertex {u}")
        if (u, v) in seen:
            raise ParseError(lineno, f"repeated arc {u} {v}")
        seen.add((u, v))
        arcs.append((u, v))
    if header is None:
        raise ParseError(1, "missing header line `n m`")
    n, m, hline = header
    if len(arcs) != m:
        raise ParseError(hline, f"header announces {m} arcs, found {len(arcs)}")
    return from_arcs(n, arcs)


def format_text(g: Digraph) -> str:
    lines = [f"{g.n} {g.num_arcs}"]
    lines.extend(f"{u} {v}" for u, v in g.arc_order)
    return "\n".join(lines) + "\n"


def iter_subsets(mask: int) -> Iterator[int]:
    """Nonempty submasks of mask, in decreasing numeric order."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask
