"""Dense floating-point eigensolvers for small matrices.

Everything here is plane rotations.  Rotations on disjoint index pairs
commute, so each sweep walks a round-robin schedule and applies n/2
rotations per step as one orthogonal matrix.

``normal_spectrum`` recovers the complex eigenvalues of a real normal
matrix L from its symmetric part S and skew part K, which commute.  Each
eigenspace of S is invariant under K; K restricted to it is skew, and
its eigenvalues +-ib come from the symmetric matrix -K_r^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_TOL = 1e-10
CLUSTER_TOL = 1e-7
SNAP_TOL = 1e-9
_EPS = np.finfo(float).eps


class EigenError(ArithmeticError):
    pass


class NotSymmetricError(EigenError, ValueError):
    pass


class NonNormalError(EigenError, ValueError):
    pass


class ConvergenceError(EigenError):
    pass


class IllConditionedError(EigenError):
    pass


@lru_cache(maxsize=None)
def _schedule(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Round-robin rounds covering every pair p < q exactly once per sweep."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        if ps:
            rounds.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def sym_eigen(s, tol: float = DEFAULT_TOL, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a real symmetric matrix."""
    a = np.array(s, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetricError("matrix must be square")
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if n and np.abs(a - a.T).max() > tol * scale:
        raise NotSymmetricError("matrix is not symmetric")
    a = (a + a.T) / 2
    v = np.eye(n)
    if n < 2 or scale == 0.0:
        w = np.diag(a).copy()
        order = np.argsort(w, kind="stable")
        return w[order], v[:, order]

    target = tol * scale
    polish = 1
    for _ in range(max_sweeps):
        off = _off(a)
        if off <= target:
            if polish == 0 or off <= _EPS * scale:
                break
            polish -= 1
        for p, q in _schedule(n):
            apq = a[p, q]
            active = np.abs(apq) > _EPS * _EPS * scale
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            sn = t * c
            j = np.eye(n)
            j[p, p] = c
            j[q, q] = c
            j[p, q] = sn
            j[q, p] = -sn
            a = j.T @ a @ j
            v = v @ j
    else:
        raise ConvergenceError(f"Jacobi sweeps did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def singular_values(m, tol: float = DEFAULT_TOL, max_sweeps: int = 60) -> np.ndarray:
    """Singular values, descending, by one-sided (Hestenes) Jacobi.

    Columns are rotated until pairwise orthogonal; the column norms are
    then the square roots of the eigenvalues of M^T M, without forming
    M^T M, so small singular values keep full absolute accuracy.
    """
    u = np.array(m, dtype=float)
    if u.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if u.shape[0] < u.shape[1]:
        u = u.T.copy()
    n = u.shape[1]
    if n == 0:
        return np.zeros(0)
    thresh = min(tol, 64 * _EPS)
    rounds = _schedule(n)
    for sweep in range(max_sweeps):
        worst = 0.0
        for p, q in rounds:
            up, uq = u[:, p], u[:, q]
            alpha = np.sum(up * up, axis=0)
            beta = np.sum(uq * uq, axis=0)
            gamma = np.sum(up * uq, axis=0)
            norms = np.sqrt(alpha * beta)
            rel = np.divide(np.abs(gamma), norms, out=np.zeros_like(gamma), where=norms > 0)
            worst = max(worst, float(rel.max(initial=0.0)))
            active = rel > thresh
            if not active.any():
                continue
            p, q = p[active], q[active]
            alpha, beta, gamma = alpha[active], beta[active], gamma[active]
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(zeta, 1.0))
            c = 1.0 / np.sqrt(1.0 + t * t)
            sn = c * t
            up, uq = u[:, p], u[:, q]
            u[:, p] = c * up - sn * uq
            u[:, q] = sn * up + c * uq
        if worst <= thresh:
            break
    else:
        if worst > tol:
            raise ConvergenceError(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(np.linalg.norm(u, axis=0))[::-1]


# complex spectra --------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumEntry:
    re: float
    im: float                # >= 0; conjugate pairs list the upper representative
    multiplicity: int        # copies of re + i*im (and as many of re - i*im when paired)
    conjugate_pair: bool


@dataclass(frozen=True)
class ComplexSpectrum:
    values: tuple[complex, ...]
    residual: float
    scale: float

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def zero_tol(self) -> float:
        return 1e-8 * max(self.scale, 1.0)

    def zero_multiplicity(self, atol: float | None = None) -> int:
        atol = self.zero_tol if atol is None else atol
        return sum(1 for x in self.values if abs(x) <= atol)

    def nonzero(self, atol: float | None = None) -> list[complex]:
        atol = self.zero_tol if atol is None else atol
        return [x for x in self.values if abs(x) > atol]

    def conjugate(self) -> "ComplexSpectrum":
        return ComplexSpectrum(_sorted(x.conjugate() for x in self.values), self.residual, self.scale)

    def entries(self, atol: float | None = None) -> list[SpectrumEntry]:
        """Grouped eigenvalues with multiplicities, one entry per conjugate pair."""
        atol = self.zero_tol if atol is None else atol
        upper = [x for x in self.values if x.imag >= 0]
        groups: list[list[complex]] = []
        for x in sorted(upper, key=lambda z: (z.real, z.imag)):
            for grp in groups:
                if abs(grp[0] - x) <= atol:
                    grp.append(x)
                    break
            else:
                groups.append([x])
        out = []
        for grp in groups:
            rep = complex(np.mean([g.real for g in grp]), np.mean([g.imag for g in grp]))
            out.append(SpectrumEntry(rep.real, rep.imag, len(grp), rep.imag > 0))
        return out


def _sorted(values) -> tuple[complex, ...]:
    return tuple(sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag)))


def multisets_close(a, b, atol: float) -> bool:
    """Greedy nearest matching of two multisets of complex numbers."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        return False
    pool = list(b)
    for x in sorted(a, key=lambda z: (z.real, z.imag)):
        k = min(range(len(pool)), key=lambda i: abs(pool[i] - x))
        if abs(pool[k] - x) > atol:
            return False
        pool.pop(k)
    return True


def normal_spectrum(l, tol: float = DEFAULT_TOL, cluster_tol: float | None = None) -> ComplexSpectrum:
    """Complex spectrum of a real normal matrix, with a residual certificate."""
    l = np.array(l, dtype=float)
    if l.ndim != 2 or l.shape[0] != l.shape[1]:
        raise ValueError("matrix must be square")
    n = l.shape[0]
    scale = float(np.linalg.norm(l))
    if n == 0:
        return ComplexSpectrum((), 0.0, 0.0)
    if scale == 0.0:
        return ComplexSpectrum((0j,) * n, 0.0, 0.0)
    s = (l + l.T) / 2
    k = (l - l.T) / 2
    if np.linalg.norm(s @ k - k @ s) > tol * scale * scale:
        raise NonNormalError("symmetric and skew parts do not commute")
    ctol = (CLUSTER_TOL if cluster_tol is None else cluster_tol) * scale
    snap = SNAP_TOL * scale

    w, v = sym_eigen(s, tol=min(tol, 1e-12))
    clusters: list[list[int]] = [[0]]
    for i in range(1, n):
        if w[i] - w[clusters[-1][-1]] <= ctol:
            clusters[-1].append(i)
        else:
            clusters.append([i])

    values: list[complex] = []
    residual = 0.0
    for idx in clusters:
        vc = v[:, idx]
        sr = vc.T @ s @ vc
        kr = vc.T @ k @ vc
        kr = (kr - kr.T) / 2
        if len(idx) == 1:
            vals = [(float(w[idx[0]]), 0.0, np.ones(1), None)]
        else:
            vals = []
            basis = np.eye(len(idx))
            # peel off one rotation plane at a time; the orthogonal complement
            # of a K-invariant plane is again K-invariant
            while basis.shape[1] >= 2:
                kb = basis.T @ kr @ basis
                _, u = sym_eigen(kb.T @ kb, tol=min(tol, 1e-12))
                y = u[:, -1]
                # |K y| directly, not sqrt of the squared eigenvalue
                b = float(np.linalg.norm(kb @ y))
                if b <= snap:
                    break
                z = kb @ y / b
                uj, wj = basis @ y, basis @ z
                a = float((uj @ sr @ uj + wj @ sr @ wj) / 2)
                vals.append((a, b, uj, wj))
                basis = basis @ _complement(np.column_stack([y, z]), basis.shape[1])
            for c in range(basis.shape[1]):
                uj = basis[:, c]
                vals.append((float(uj @ sr @ uj), 0.0, uj, None))
        for a, b, uj, wj in vals:
            if wj is None:
                x = vc @ uj
                lam = complex(a, 0.0)
                r = np.linalg.norm(l @ x - a * x) / np.linalg.norm(x)
                values.append(lam)
            else:
                x = vc @ uj - 1j * (vc @ wj)
                lam = complex(a, b)
                r = np.linalg.norm(l @ x - lam * x) / np.linalg.norm(x)
                values.extend([lam, lam.conjugate()])
            residual = max(residual, float(r))
    if len(values) != n:
        raise IllConditionedError(f"recovered {len(values)} eigenvalues for a {n}x{n} matrix")
    values = [complex(0.0 if abs(z.real) <= snap else z.real, 0.0 if abs(z.imag) <= snap else z.imag)
              for z in values]
    if residual > max(tol, 1e-9) * scale:
        raise IllConditionedError(f"residual {residual:.3g} exceeds tolerance; clusters ambiguous")
    return ComplexSpectrum(_sorted(values), residual, scale)


def _complement(basis: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(basis) in R^dim."""
    if basis.shape[1] == 0:
        return np.eye(dim)
    proj = np.eye(dim) - basis @ basis.T
    w, vecs = sym_eigen((proj + proj.T) / 2, tol=1e-12)
    return vecs[:, w > 0.5]


def conjugate_transpose_check(l, spectrum: ComplexSpectrum, tol: float = 1e-8) -> bool:
    """The transpose's spectrum is the conjugate of the given one."""
    lt = np.array(l, dtype=float).T
    other = normal_spectrum(lt)
    atol = tol * max(spectrum.scale, 1.0)
    return multisets_close(other.values, spectrum.conjugate().values, atol)
