"""Brute-force and exact cross-checks for the bound and the identities behind it."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import digraph as dg
from .digraph import Digraph, Separation
from .eig import normal_spectrum, singular_values, sym_eigen
from .exact import (adjacency, incidence_matrices, is_normal_laplacian, laplacian, normality_combinatorial,
                    quotient_profile)
from .spectral import (COMPARE_TOL, NotApplicable, Status, applicability, laplace_diagnostics,
                       select_alpha, separation_bound)

MAX_SCAN_ORDER = 15


@dataclass
class Verdict:
    check: str
    status: Status
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status is Status.HOLDS

    def __bool__(self) -> bool:
        return self.ok


def _holds(check: str, ok: bool, **details) -> Verdict:
    return Verdict(check, Status.HOLDS if ok else Status.VIOLATED, details)


# separations ----------------------------------------------------------------------

def _out_unions(g: Digraph) -> list[int]:
    """out_union[Z] = all out-neighbours of the vertex set Z, for every bitmask Z."""
    size = 1 << g.n
    unions = [0] * size
    for z in range(1, size):
        low = z & -z
        unions[z] = unions[z ^ low] | g.out_masks[low.bit_length() - 1]
    return unions


def _check_order(g: Digraph) -> None:
    if g.n > MAX_SCAN_ORDER:
        raise ValueError(f"separation scans are limited to n <= {MAX_SCAN_ORDER}")


def all_separations(g: Digraph) -> Iterator[Separation]:
    """Every (Y, Z) with Y, Z nonempty, disjoint, and no arc from Z to Y."""
    _check_order(g)
    full = (1 << g.n) - 1
    unions = _out_unions(g)
    for z in range(1, full + 1):
        allowed = full & ~z & ~unions[z]
        zs = frozenset(dg._members(z))
        for y in dg.iter_subsets(allowed):
            yield Separation(frozenset(dg._members(y)), zs)


@dataclass(frozen=True)
class SeparationScan:
    best_lhs: Fraction
    witness: Separation | None
    count: int


def separation_lhs(n: int, y: int, z: int) -> Fraction:
    return Fraction(y * z, (n - y) * (n - z))


def max_separation_lhs(g: Digraph) -> SeparationScan:
    """Largest |Y||Z| / ((n-|Y|)(n-|Z|)) over all separations.

    For fixed Z the admissible Y are the subsets of one set, and the ratio
    grows with |Y|, so only that maximal Y is scored.
    """
    _check_order(g)
    n = g.n
    full = (1 << n) - 1
    unions = _out_unions(g)
    best, witness, count = Fraction(0), None, 0
    for z in range(1, full + 1):
        allowed = full & ~z & ~unions[z]
        if not allowed:
            continue
        k = allowed.bit_count()
        count += (1 << k) - 1
        val = separation_lhs(n, k, z.bit_count())
        if witness is None or val > best:
            best = val
            witness = Separation(frozenset(dg._members(allowed)), frozenset(dg._members(z)))
    return SeparationScan(best, witness, count)


def verify_bound(g: Digraph, *, invert: bool = False) -> Verdict:
    """Brute-force maximum left side against the spectral right side.

    ``invert`` flips the comparison; it exists only so the harness can
    check that it reports failures.
    """
    reason = applicability(g)
    if reason is not None:
        return Verdict("bound", Status.NOT_APPLICABLE, {"reason": reason})
    scan = max_separation_lhs(g)
    report = separation_bound(g, scan.best_lhs)
    ok = float(scan.best_lhs) <= report.rhs + COMPARE_TOL
    if invert:
        ok = not ok
    return _holds("bound", ok, lhs=scan.best_lhs, rhs=report.rhs, witness=scan.witness,
                  separations=scan.count, alpha=report.selection.alpha,
                  branch=report.selection.branch.value)


# singular values -------------------------------------------------------------------

def verify_singular_perturbation(l, alpha: float, spectrum=None) -> Verdict:
    """Singular values of alpha*I + L are |alpha + lambda| over the spectrum of L."""
    l = np.asarray(l, dtype=float)
    spec = normal_spectrum(l) if spectrum is None else spectrum
    predicted = np.sort([abs(alpha + lam) for lam in spec.values])[::-1]
    sv = singular_values(alpha * np.eye(len(l)) + l)
    err = float(np.max(np.abs(predicted - sv), initial=0.0))
    return _holds("singular_perturbation", err <= COMPARE_TOL, max_error=err, alpha=alpha)


def verify_singular_ordering(spectrum, selection) -> Verdict:
    """|alpha| is the largest and |alpha + theta| the second largest of |alpha + lambda|."""
    alpha = selection.alpha
    vals = sorted((abs(alpha + lam) for lam in spectrum.values), reverse=True)
    first = abs(alpha)
    second = abs(alpha + selection.theta)
    ok = abs(vals[0] - first) <= COMPARE_TOL and len(vals) > 1 and abs(vals[1] - second) <= COMPARE_TOL
    return _holds("singular_ordering", ok, top=vals[:2], expected=[first, second])


def _block_matrix(l: np.ndarray, alpha: float) -> np.ndarray:
    n = len(l)
    lt = alpha * np.eye(n) + l
    c = np.zeros((2 * n, 2 * n))
    c[:n, n:] = lt
    c[n:, :n] = lt.T
    return c


def verify_block_symmetrization(l, alpha: float) -> Verdict:
    """Eigenvalues of [[0, L~], [L~^T, 0]] are plus and minus the singular values of L~."""
    l = np.asarray(l, dtype=float)
    n = len(l)
    lam = sym_eigen(_block_matrix(l, alpha))[0][::-1]
    sv = singular_values(alpha * np.eye(n) + l)
    expected = np.sort(np.concatenate([sv, -sv]))[::-1]
    err = float(np.max(np.abs(lam - expected), initial=0.0))
    mirror = float(np.max(np.abs(lam + lam[::-1]), initial=0.0))
    return _holds("block_symmetrization", err <= COMPARE_TOL and mirror <= COMPARE_TOL,
                  max_error=err, mirror_error=mirror, eigenvalues=lam.tolist())


# quotient matrix -----------------------------------------------------------------------

def _quotient_parts(n: int, sep: Separation) -> list[list[int]]:
    every = set(range(n))
    return [sorted(sep.Z), sorted(every - sep.Z),
            [n + v for v in sorted(every - sep.Y)], [n + v for v in sorted(sep.Y)]]


def quotient_symbolic(g: Digraph, sep: Separation) -> tuple[np.ndarray, np.ndarray]:
    """Block averages of C as B0 + alpha*B1, exactly, for the partition (Z, V-Z | V-Y, Y)."""
    n = g.n
    lap = laplacian(g)
    parts = _quotient_parts(n, sep)
    b0 = np.full((4, 4), Fraction(0), dtype=object)
    b1 = np.full((4, 4), Fraction(0), dtype=object)
    for i, rows in enumerate(parts):
        for j, cols in enumerate(parts):
            top_i, top_j = i < 2, j < 2
            if top_i == top_j:
                continue
            if top_i:
                r = rows
                c = [v - n for v in cols]
            else:
                # C[n + a, b] = L~[b, a]
                r = list(cols)
                c = [v - n for v in rows]
            const = sum(lap[a, b] for a in r for b in c)
            ident = len(set(r) & set(c))
            b0[i, j] = Fraction(int(const), len(rows))
            b1[i, j] = Fraction(ident, len(rows))
    return b0, b1


def verify_quotient(g: Digraph, sep: Separation, alpha: float) -> Verdict:
    """Exact and numeric checks of the 4x4 quotient of C and its interlacing consequences."""
    if not dg.is_balanced(g):
        raise NotApplicable("row and column sums of the Laplacian differ (not eulerian)")
    if not dg.is_separation(g, sep.Y, sep.Z):
        raise NotApplicable("not a separation")
    n, y, z = g.n, sep.y, sep.z
    q, coef = quotient_profile(n, y, z)
    b0, b1 = quotient_symbolic(g, sep)
    exact = all(x == 0 for x in b0.ravel()) and np.array_equal(b1, q)

    parts = _quotient_parts(n, sep)
    ind = np.zeros((2 * n, 4))
    for k, p in enumerate(parts):
        ind[p, k] = 1.0
    sizes = ind.sum(axis=0)
    c = _block_matrix(laplacian(g).astype(float), alpha)
    b = (ind.T @ c @ ind) / sizes[:, None]
    qf = np.array(q, dtype=float)
    entry_err = float(np.max(np.abs(b - alpha * qf)))
    # D^(1/2) B D^(-1/2) is symmetric with the same eigenvalues as B
    root = np.sqrt(sizes)
    b_sym = (ind.T @ c @ ind) / np.outer(root, root)
    mu = sym_eigen(b_sym)[0][::-1]
    lam = sym_eigen(c)[0][::-1]
    tol = COMPARE_TOL * max(1.0, abs(alpha)) ** 4
    det_b = float(np.prod(mu))
    det_expected = alpha ** 4 * float(coef)
    checks = {
        "exact_match": exact,
        "entries": entry_err <= COMPARE_TOL * max(1.0, abs(alpha)),
        "det": abs(det_b - det_expected) <= tol,
        "interlacing": bool(lam[0] >= mu[0] - COMPARE_TOL and lam[1] >= mu[1] - COMPARE_TOL
                            and mu[2] >= lam[-2] - COMPARE_TOL and mu[3] >= lam[-1] - COMPARE_TOL),
        "mirror": bool(abs(mu[3] + mu[0]) <= COMPARE_TOL * max(1.0, abs(alpha))
                       and abs(mu[2] + mu[1]) <= COMPARE_TOL * max(1.0, abs(alpha))),
        "product": (mu[0] * mu[1]) ** 2 <= (lam[0] * lam[1]) ** 2 + tol,
    }
    return _holds("quotient", all(checks.values()), checks=checks, det=det_b,
                  det_expected=det_expected, mu=mu.tolist(), lambda_top=lam[:2].tolist())


# incidence ------------------------------------------------------------------------------

def incidence_identity(g: Digraph) -> Verdict:
    """(D_t - D_h)(D_t - D_h)^T == D_out + D_in - A - A^T in exact integers.

    For balanced g the right side is L + L^T, which is checked as well;
    for unbalanced g the two differ by D_in - D_out.
    """
    n = g.n
    dt, dh = incidence_matrices(g)
    lap = laplacian(g)
    nn = dt - dh
    lhs = nn.dot(nn.T) if nn.size else np.zeros((n, n), dtype=object)
    adj = adjacency(g)
    deg = np.diag(np.array(g.out_degrees(), dtype=object) + np.array(g.in_degrees(), dtype=object)) \
        if n else np.zeros((0, 0), dtype=object)
    general = bool(np.array_equal(lhs, deg - adj - adj.T))
    symmetric_part = bool(np.array_equal(lhs, lap + lap.T)) if dg.is_balanced(g) else None
    return _holds("incidence_identity", general and symmetric_part is not False,
                  general=general, laplacian_form=symmetric_part)


def alpha_for(g: Digraph) -> float | None:
    """The bound's alpha when it applies, else None."""
    if applicability(g) is not None:
        return None
    return select_alpha(normal_spectrum(laplacian(g).astype(float))).alpha


def run_suite(g: Digraph, rng: np.random.Generator | None = None, random_alphas: int = 3,
              quotient: bool = True, invert_bound: bool = False) -> list[Verdict]:
    """Every applicable check on one digraph; used by the CLI ``verify`` command."""
    rng = np.random.default_rng(0) if rng is None else rng
    out = [incidence_identity(g)]
    normal = is_normal_laplacian(g)
    out.append(_holds("normality_equivalence", normality_combinatorial(g) == normal))
    if normal and dg.is_weakly_connected(g):
        out.append(_holds("normal_implies_eulerian", dg.is_balanced(g)))
    if normal:
        diag = laplace_diagnostics(g)
        out.append(_holds("zero_multiplicity", diag.zero_multiplicity == diag.components,
                          zero_multiplicity=diag.zero_multiplicity, components=diag.components))
        out.append(_holds("positive_real_parts",
                          diag.min_nonzero_real is None or diag.min_nonzero_real > 1e-9,
                          min_nonzero_real=diag.min_nonzero_real))
        out.append(_holds("conjugate_transpose", diag.conjugate_transpose))
        lap = laplacian(g).astype(float)
        for a in rng.uniform(-10.0, 0.0, size=random_alphas):
            out.append(verify_singular_perturbation(lap, float(a), diag.spectrum))
    alpha = None
    if applicability(g) is None:
        spec = normal_spectrum(laplacian(g).astype(float))
        sel = select_alpha(spec)
        alpha = sel.alpha
        out.append(verify_singular_ordering(spec, sel))
        out.append(verify_block_symmetrization(laplacian(g).astype(float), alpha))
        if g.n <= MAX_SCAN_ORDER:
            out.append(verify_bound(g, invert=invert_bound))
    if quotient and dg.is_balanced(g) and g.n <= 6:
        a = -3.0 if alpha is None else alpha
        for sep in all_separations(g):
            v = verify_quotient(g, sep, a)
            if not v.ok:
                v.details["separation"] = sep
                out.append(v)
                break
        else:
            out.append(_holds("quotient", True))
    return out
