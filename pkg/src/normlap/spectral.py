"""Eigenvalue bound on separations for digraphs with normal Laplacian.

For a connected digraph X whose Laplacian L is normal, and disjoint
nonempty Y, Z with no arc from Z to Y,

    |Y||Z| / ((n - |Y|)(n - |Z|)) <= |alpha + theta|^2 / alpha^2

where f(l) = |l|^2 / (2 Re l), theta maximizes and nu minimizes f over
the nonzero eigenvalues, and alpha is -f(theta) - f(nu) when every other
nonzero eigenvalue has real part >= Re(theta), and -f(theta) - g(mu)
otherwise (mu minimizes g over the eigenvalues with smaller real part).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import digraph as dg
from .eig import DEFAULT_TOL, ComplexSpectrum, conjugate_transpose_check, normal_spectrum
from .exact import is_normal_laplacian, laplacian

COMPARE_TOL = 1e-8


class NotApplicable(ValueError):
    """Input outside the hypotheses of the bound; ``reason`` says why."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class Status(str, enum.Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    NOT_APPLICABLE = "not-applicable"


class Branch(str, enum.Enum):
    UNIFORM = "uniform-real-part"
    GENERAL = "general"


def f_value(lam: complex) -> float:
    lam = complex(lam)
    if lam.real <= 0:
        raise ValueError(f"f needs Re(lambda) > 0, got {lam}")
    return abs(lam) ** 2 / (2 * lam.real)


def g_value(lam: complex, theta: complex) -> float:
    lam, theta = complex(lam), complex(theta)
    if lam.real == theta.real:
        raise ValueError("g is undefined where Re(lambda) = Re(theta)")
    return lam.real * (f_value(theta) - f_value(lam)) / (theta.real - lam.real)


@dataclass(frozen=True)
class AlphaSelection:
    theta: complex
    nu: complex
    mu: complex             # 0 when no eigenvalue has real part below Re(theta)
    alpha: float
    branch: Branch
    f_theta: float
    f_nu: float
    g_mu: float

    @property
    def rhs(self) -> float:
        return abs(self.alpha + self.theta) ** 2 / self.alpha ** 2


def _upper(z: complex) -> complex:
    return z if z.imag >= 0 else z.conjugate()


def select_alpha(spectrum: ComplexSpectrum) -> AlphaSelection:
    tol = COMPARE_TOL * max(spectrum.scale, 1.0)
    nonzero = spectrum.nonzero(tol)
    if not nonzero:
        raise NotApplicable("no nonzero eigenvalue")
    if any(z.real <= tol for z in nonzero):
        raise NotApplicable("a nonzero eigenvalue has nonpositive real part")
    fs = [f_value(z) for z in nonzero]
    fmax, fmin = max(fs), min(fs)
    # among f-maximizers take the smallest real part
    ftol = COMPARE_TOL * max(fmax, 1.0)
    theta = min((z for z, fz in zip(nonzero, fs) if fz >= fmax - ftol),
                key=lambda z: (z.real, -abs(z.imag)))
    nu = min((z for z, fz in zip(nonzero, fs) if fz <= fmin + ftol),
             key=lambda z: (z.real, abs(z.imag)))
    theta, nu = _upper(theta), _upper(nu)
    f_theta, f_nu = f_value(theta), f_value(nu)
    lower = [z for z in nonzero if z.real < theta.real - tol]
    if not lower:
        return AlphaSelection(theta, nu, 0j, -f_theta - f_nu, Branch.UNIFORM, f_theta, f_nu, 0.0)
    gs = [g_value(z, theta) for z in lower]
    k = int(np.argmin(gs))
    mu = _upper(lower[k])
    return AlphaSelection(theta, nu, mu, -f_theta - gs[k], Branch.GENERAL, f_theta, f_nu, gs[k])


@dataclass
class BoundReport:
    n: int
    status: Status
    reason: str | None = None
    spectrum: ComplexSpectrum | None = None
    selection: AlphaSelection | None = None
    rhs: float | None = None
    lhs_max: Fraction | None = None
    extra: dict = field(default_factory=dict)

    @property
    def verdict(self) -> Status:
        return self.status


def applicability(g: dg.Digraph) -> str | None:
    """None when the bound applies to g, else a human-readable reason."""
    if g.n < 2:
        return "fewer than two vertices"
    if not is_normal_laplacian(g):
        if not dg.is_balanced(g):
            return "Laplacian not normal (not eulerian)"
        return "Laplacian not normal"
    if not dg.is_weakly_connected(g):
        return "digraph not connected"
    return None


def separation_bound(g: dg.Digraph, lhs_max: Fraction | float | None = None,
                     tol: float = DEFAULT_TOL) -> BoundReport:
    """Right-hand side of the separation bound; compared with lhs_max when given."""
    reason = applicability(g)
    if reason is not None:
        return BoundReport(g.n, Status.NOT_APPLICABLE, reason)
    spec = normal_spectrum(laplacian(g).astype(float), tol=tol)
    sel = select_alpha(spec)
    rhs = sel.rhs
    status = Status.HOLDS
    if lhs_max is not None and float(lhs_max) > rhs + COMPARE_TOL:
        status = Status.VIOLATED
    return BoundReport(g.n, status, None, spec, sel, rhs, lhs_max)


def haemers_alpha(spectrum: ComplexSpectrum) -> float:
    """-(sigma_2 + sigma_n)/2 for the Laplacian spectrum of a connected graph."""
    tol = COMPARE_TOL * max(spectrum.scale, 1.0)
    if any(abs(z.imag) > tol for z in spectrum.values):
        raise ValueError("spectrum has a non-real eigenvalue")
    if spectrum.zero_multiplicity(tol) != 1:
        raise ValueError("eigenvalue 0 is not simple")
    pos = sorted(z.real for z in spectrum.nonzero(tol))
    return -(pos[0] + pos[-1]) / 2


def tournament_alpha(spectrum: ComplexSpectrum, n: int) -> float:
    """-(|theta|^2 + |nu|^2)/n with theta, nu the nonzero eigenvalues of largest and smallest modulus."""
    tol = COMPARE_TOL * max(spectrum.scale, 1.0)
    nonzero = spectrum.nonzero(tol)
    if not nonzero:
        raise ValueError("no nonzero eigenvalue")
    if any(abs(z.real - n / 2) > tol for z in nonzero):
        raise ValueError("a nonzero eigenvalue has real part different from n/2")
    mags = [abs(z) ** 2 for z in nonzero]
    return -(max(mags) + min(mags)) / n


@dataclass(frozen=True)
class Diagnostics:
    zero_multiplicity: int
    components: int
    min_nonzero_real: float | None
    conjugate_transpose: bool
    spectrum: ComplexSpectrum


def laplace_diagnostics(g: dg.Digraph) -> Diagnostics:
    if not is_normal_laplacian(g):
        raise NotApplicable("Laplacian not normal")
    lap = laplacian(g).astype(float)
    spec = normal_spectrum(lap)
    nonzero = spec.nonzero()
    return Diagnostics(
        zero_multiplicity=spec.zero_multiplicity(),
        components=len(dg.weak_components(g)),
        min_nonzero_real=min((z.real for z in nonzero), default=None),
        conjugate_transpose=conjugate_transpose_check(lap, spec),
        spectrum=spec,
    )
