"""Isomorph-free enumeration of small digraphs and the normality census.

Canonical code: the off-diagonal adjacency entries read row by row, as a
bit string, minimized lexicographically over all vertex relabelings.  As
an integer, the first pair (0, 1) is the most significant bit, so the
lexicographic minimum is the numeric minimum.

Two enumeration paths:

* ``class_codes`` grows classes on n vertices from classes on n - 1 by
  attaching a new vertex in all 4**(n-1) ways.  A child is kept only by
  the parent obtained by deleting the last vertex of its canonical form,
  so shards over parents are disjoint and their union is complete.
* ``balanced_class_codes`` walks labeled digraphs pair by pair and prunes
  any vertex whose in/out degrees differ once all its pairs are fixed.
  Every row of the census except the unrestricted count lives inside the
  balanced digraphs.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from . import digraph as dg
from .digraph import Digraph
from .exact import is_normal_adjacency, is_normal_laplacian, normality_combinatorial

MAX_CANON_ORDER = 8
MAX_ENUM_ORDER = 6
_CHUNK = 10
_BATCH = 1 << 19


class CensusError(ValueError):
    pass


@lru_cache(maxsize=None)
def _pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((u, v) for u in range(n) for v in range(n) if u != v)


@lru_cache(maxsize=None)
def _weights(n: int) -> dict[tuple[int, int], int]:
    pairs = _pairs(n)
    top = len(pairs) - 1
    return {p: 1 << (top - i) for i, p in enumerate(pairs)}


def encode(g: Digraph) -> int:
    w = _weights(g.n)
    return sum(w[a] for a in g.arc_order)


def decode(code: int, n: int) -> Digraph:
    code = int(code)
    return dg.from_arcs(n, [p for p, w in _weights(n).items() if code & w])


@dataclass(frozen=True, order=True)
class CanonicalCode:
    n: int
    value: int

    @property
    def bits(self) -> str:
        width = self.n * (self.n - 1)
        return format(self.value, f"0{width}b") if width else ""

    def to_digraph(self) -> Digraph:
        return decode(self.value, self.n)


@lru_cache(maxsize=None)
def _perm_array(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


def canonical_code(g: Digraph) -> CanonicalCode:
    """Minimum code over all n! relabelings (brute force, n <= 8)."""
    n = g.n
    if n > MAX_CANON_ORDER:
        raise CensusError(f"exact canonical codes are limited to n <= {MAX_CANON_ORDER}")
    if n < 2:
        return CanonicalCode(n, 0)
    a = g.adjacency().astype(np.int64)
    perms = _perm_array(n)
    relabeled = a[perms[:, :, None], perms[:, None, :]]
    mask = ~np.eye(n, dtype=bool)
    bits = relabeled[:, mask]
    width = bits.shape[1]
    weights = np.left_shift(np.int64(1), np.arange(width - 1, -1, -1, dtype=np.int64))
    return CanonicalCode(n, int((bits @ weights).min()))


# batch canonicalization --------------------------------------------------------

@lru_cache(maxsize=None)
def _perm_tables(n: int) -> np.ndarray:
    """tables[p, c, x]: contribution of chunk c holding x after relabeling by p."""
    pairs = _pairs(n)
    width = len(pairs)
    index = {p: i for i, p in enumerate(pairs)}
    nchunks = max(1, -(-width // _CHUNK))
    perms = _perm_array(n)
    xs = np.arange(1 << _CHUNK, dtype=np.int64)
    tables = np.zeros((len(perms), nchunks, 1 << _CHUNK), dtype=np.int64)
    for k, p in enumerate(perms):
        for c in range(nchunks):
            acc = np.zeros(1 << _CHUNK, dtype=np.int64)
            for b in range(_CHUNK):
                pos = c * _CHUNK + b          # bit position, 0 = least significant
                if pos >= width:
                    break
                u, v = pairs[width - 1 - pos]
                target = index[(p[u], p[v])]
                acc |= ((xs >> b) & 1) << (width - 1 - target)
            tables[k, c] = acc
    return tables


def canonical_codes(codes, n: int) -> np.ndarray:
    """Vectorized canonical_code over an array of labeled codes (n <= 6)."""
    codes = np.asarray(codes, dtype=np.int64)
    if n < 2:
        return np.zeros_like(codes)
    if n > MAX_ENUM_ORDER:
        return np.array([canonical_code(decode(c, n)).value for c in codes], dtype=np.int64)
    tables = _perm_tables(n)
    nchunks = tables.shape[1]
    out = np.empty_like(codes)
    low = (1 << _CHUNK) - 1
    for start in range(0, len(codes), _BATCH):
        block = codes[start:start + _BATCH]
        chunks = [(block >> (c * _CHUNK)) & low for c in range(nchunks)]
        best = block.copy()
        for t in tables:
            x = t[0][chunks[0]]
            for c in range(1, nchunks):
                x |= t[c][chunks[c]]
            np.minimum(best, x, out=best)
        out[start:start + _BATCH] = best
    return out


# vertex augmentation ------------------------------------------------------------

@lru_cache(maxsize=None)
def _embedding(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Bit shifts of the (n-1)-vertex code inside an n-vertex code, and the 4**(n-1) new-vertex patterns."""
    w_small = _weights(n - 1)
    w_big = _weights(n)
    src = np.array([w_small[p].bit_length() - 1 for p in _pairs(n - 1)], dtype=np.int64)
    dst = np.array([w_big[p].bit_length() - 1 for p in _pairs(n - 1)], dtype=np.int64)
    last = n - 1
    new = [w_big[(last, v)] for v in range(last)] + [w_big[(u, last)] for u in range(last)]
    k = len(new)
    sel = (np.arange(1 << k, dtype=np.int64)[:, None] >> np.arange(k, dtype=np.int64)) & 1
    patterns = sel @ np.array(new, dtype=np.int64)
    return np.stack([src, dst]), patterns


def _embed(codes: np.ndarray, n: int) -> np.ndarray:
    (src, dst), _ = _embedding(n)
    out = np.zeros_like(codes)
    for s, d in zip(src, dst):
        out |= ((codes >> s) & 1) << d
    return out


def _delete_last(codes: np.ndarray, n: int) -> np.ndarray:
    (src, dst), _ = _embedding(n)
    out = np.zeros_like(codes)
    for s, d in zip(src, dst):
        out |= ((codes >> d) & 1) << s
    return out


@lru_cache(maxsize=None)
def _all_class_codes(n: int) -> np.ndarray:
    return class_codes(n)


def class_codes(n: int, shard: int = 0, shards: int = 1) -> np.ndarray:
    """Sorted canonical codes of the isomorphism classes owned by one shard."""
    if not 0 <= shard < shards:
        raise CensusError(f"shard {shard} outside 0..{shards - 1}")
    if n < 1 or n > MAX_ENUM_ORDER:
        raise CensusError(f"enumeration supports 1 <= n <= {MAX_ENUM_ORDER}")
    if n == 1:
        return np.zeros(1 if shard == 0 else 0, dtype=np.int64)
    parents = _all_class_codes(n - 1)[shard::shards]
    _, patterns = _embedding(n)
    per_batch = max(1, _BATCH // len(patterns))
    found = []
    for start in range(0, len(parents), per_batch):
        par = parents[start:start + per_batch]
        children = (_embed(par, n)[:, None] | patterns[None, :])
        canon = canonical_codes(children.ravel(), n).reshape(children.shape)
        owner = np.repeat(np.arange(len(par)), len(patterns))
        keys = np.unique(np.stack([owner, canon.ravel()]), axis=1)
        parent_of = canonical_codes(_delete_last(keys[1], n), n - 1)
        keep = parent_of == par[keys[0]]
        found.append(keys[1][keep])
    return np.sort(np.concatenate(found)) if found else np.zeros(0, dtype=np.int64)


def enumerate_digraphs(n: int, predicate: Callable[[Digraph], bool] | None = None,
                       shard: int = 0, shards: int = 1) -> Iterator[Digraph]:
    """Canonical representatives, one per isomorphism class, in code order."""
    for code in class_codes(n, shard, shards):
        g = decode(code, n)
        if predicate is None or predicate(g):
            yield g


@lru_cache(maxsize=None)
def _labeled_balanced_codes(n: int) -> np.ndarray:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    states = np.zeros((1, len(pairs)), dtype=np.int8)
    net = np.zeros((1, n), dtype=np.int8)
    for i, (u, v) in enumerate(pairs):
        k = len(states)
        states = np.repeat(states, 4, axis=0)
        net = np.repeat(net, 4, axis=0)
        s = np.tile(np.arange(4, dtype=np.int8), k)
        states[:, i] = s
        fwd = (s == 1).astype(np.int8) - (s == 2).astype(np.int8)
        net[:, u] += fwd
        net[:, v] -= fwd
        if v == n - 1:          # all pairs at u are fixed
            keep = net[:, u] == 0
            states, net = states[keep], net[keep]
    w = _weights(n)
    w_uv = np.array([w[p] for p in pairs], dtype=np.int64)
    w_vu = np.array([w[(v, u)] for u, v in pairs], dtype=np.int64)
    st = states.astype(np.int64)
    return (st & 1) @ w_uv + (st >> 1) @ w_vu


def balanced_class_codes(n: int) -> np.ndarray:
    """Canonical codes of the classes where in-degree equals out-degree everywhere."""
    if n < 1 or n > MAX_ENUM_ORDER:
        raise CensusError(f"enumeration supports 1 <= n <= {MAX_ENUM_ORDER}")
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    return np.unique(canonical_codes(_labeled_balanced_codes(n), n))


def count_classes_burnside(n: int) -> int:
    """Number of digraph classes on n vertices by orbit counting, no enumeration."""
    if n < 2:
        return 1
    pairs = _pairs(n)
    total = 0
    for p in itertools.permutations(range(n)):
        seen = set()
        cycles = 0
        for a in pairs:
            if a in seen:
                continue
            cycles += 1
            while a not in seen:
                seen.add(a)
                a = (p[a[0]], p[a[1]])
        total += 1 << cycles
    count = Fraction(total, math.factorial(n))
    assert count.denominator == 1
    return int(count)


# the census ------------------------------------------------------------------------

ROW_FIELDS = ("digraphs", "eulerian", "regular", "normal_laplacian",
              "normal_adjacency", "normal", "connected_eulerian", "undirected")

# published class counts for n = 4, 5, 6
REFERENCE_TABLE = {
    4: (218, 17, 5, 14, 14, 14, 12, 10),
    5: (9608, 107, 10, 43, 45, 43, 90, 31),
    6: (1540944, 2269, 52, 194, 212, 190, 2162, 43),
}


@dataclass
class CensusRow:
    """Row semantics:

    eulerian           balanced and all arcs in one weak component (an Euler circuit exists)
    regular, normal_*, normal, undirected
                       that property, among the eulerian classes
    connected_eulerian balanced and weakly connected
    digraphs           every class; None when skipped (n = 6 without long mode)
    """

    n: int
    digraphs: int | None
    eulerian: int
    regular: int
    normal_laplacian: int
    normal_adjacency: int
    normal: int
    connected_eulerian: int
    undirected: int
    calibration: dict = field(default_factory=dict, compare=False)
    checks: dict = field(default_factory=dict, compare=False)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f) for f in ROW_FIELDS)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ClassFlags:
    balanced: bool
    euler_circuit: bool
    connected: bool
    regular: bool
    normal_laplacian: bool
    normal_adjacency: bool
    combinatorial: bool
    symmetric: bool


def class_flags(g: Digraph) -> ClassFlags:
    return ClassFlags(
        balanced=dg.is_balanced(g),
        euler_circuit=dg.has_euler_circuit(g),
        connected=dg.is_weakly_connected(g),
        regular=dg.is_regular(g),
        normal_laplacian=is_normal_laplacian(g),
        normal_adjacency=is_normal_adjacency(g),
        combinatorial=normality_combinatorial(g),
        symmetric=dg.is_undirected(g),
    )


def count_all_classes(n: int, shards: int = 1, jobs: int = 1) -> int:
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            sizes = pool.map(_shard_size, [(n, s, shards) for s in range(shards)])
            return sum(sizes)
    return sum(_shard_size((n, s, shards)) for s in range(shards))


def _shard_size(args) -> int:
    n, s, shards = args
    return len(class_codes(n, s, shards))


def census_row(n: int, long: bool = False, shards: int = 1, jobs: int = 1) -> CensusRow:
    """Census row for order n; the unrestricted count needs long mode when n = 6."""
    if not 1 <= n <= MAX_ENUM_ORDER:
        raise CensusError(f"census supports 1 <= n <= {MAX_ENUM_ORDER}")
    digraphs = None
    if n < 6 or long:
        digraphs = count_all_classes(n, shards, jobs)

    flags = [class_flags(decode(c, n)) for c in balanced_class_codes(n)]

    def count(pred) -> int:
        return sum(1 for f in flags if pred(f))

    eul = [f for f in flags if f.euler_circuit]
    row = CensusRow(
        n=n,
        digraphs=digraphs,
        eulerian=len(eul),
        regular=sum(f.regular for f in eul),
        normal_laplacian=sum(f.normal_laplacian for f in eul),
        normal_adjacency=sum(f.normal_adjacency for f in eul),
        normal=sum(f.normal_laplacian and f.normal_adjacency for f in eul),
        connected_eulerian=count(lambda f: f.balanced and f.connected),
        undirected=sum(f.symmetric for f in eul),
    )
    row.calibration = {
        "eulerian": {
            "euler circuit (balanced, arcs in one weak component)": row.eulerian,
            "balanced": count(lambda f: f.balanced),
        },
        "regular": {
            "regular and eulerian": row.regular,
            "regular": count(lambda f: f.regular),
        },
        "normal_laplacian": {
            "normal Laplacian and eulerian": row.normal_laplacian,
            "normal Laplacian": count(lambda f: f.normal_laplacian),
        },
        "normal_adjacency": {
            "normal adjacency and eulerian": row.normal_adjacency,
            "normal adjacency": count(lambda f: f.normal_adjacency),
        },
        "normal": {
            "normal and eulerian": row.normal,
            "normal": count(lambda f: f.normal_laplacian and f.normal_adjacency),
        },
        "undirected": {
            "symmetric and eulerian": row.undirected,
            "symmetric": count(lambda f: f.symmetric),
            "symmetric and connected": count(lambda f: f.symmetric and f.connected),
            "symmetric and normal Laplacian": count(lambda f: f.symmetric and f.normal_laplacian),
        },
    }
    row.checks = {
        # normal Laplacian and normal adjacency both force balance, so the
        # balanced universe already contains every such class
        "combinatorial_disagreements": count(lambda f: f.combinatorial != f.normal_laplacian),
        "normal_connected_unbalanced": count(lambda f: f.normal_laplacian and f.connected and not f.balanced),
    }
    return row


def compare_with_reference(row: CensusRow) -> dict:
    """Per-row match against the reference table, plus the matching calibration candidates."""
    ref = REFERENCE_TABLE.get(row.n)
    out = {"n": row.n, "has_reference": ref is not None, "rows": {}}
    for i, name in enumerate(ROW_FIELDS):
        ours = getattr(row, name)
        entry = {"computed": ours}
        if ref is not None:
            entry["reference"] = ref[i]
            entry["match"] = None if ours is None else ours == ref[i]
            candidates = row.calibration.get(name, {})
            entry["matching_candidates"] = [k for k, v in candidates.items() if v == ref[i]]
        out["rows"][name] = entry
    return out
