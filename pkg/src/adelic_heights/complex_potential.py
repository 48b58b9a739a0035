"""Archimedean potential theory: atomic energies, smoothing kernels,
regularized pairings, positivity diagnostics and discrepancy reports.

Energies follow the off-diagonal convention: the mutual energy of two atomic
measures is minus the weighted sum of log-distances over pairs of distinct
finite atoms.  Atoms at infinity are excluded from every pairing sum and the
number of dropped pairs is reported.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ._kernels import pair_log_sum

INFINITY = object()  # sentinel for the point at infinity on the sphere


def spherical_distance(z, w) -> float:
    """Chordal metric on the Riemann sphere, normalized to diameter 1."""
    if z is INFINITY and w is INFINITY:
        return 0.0
    if z is INFINITY or w is INFINITY:
        t = w if z is INFINITY else z
        return 1.0 / math.sqrt(1.0 + abs(t) ** 2)
    return abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


# ---------------------------------------------------------------------------
# Atomic measures with exact rational weights and complex support.


class AtomicMeasureC:
    """Finite signed combination of point masses at complex points or at
    infinity."""

    def __init__(self, atoms):
        self.atoms = [(z, Fraction(w)) for z, w in atoms]

    @property
    def total_mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    @property
    def is_probability(self) -> bool:
        return (all(w >= 0 for _, w in self.atoms)
                and self.total_mass == 1)

    @staticmethod
    def equidistributed(points) -> "AtomicMeasureC":
        n = len(points)
        return AtomicMeasureC([(z, Fraction(1, n)) for z in points])

    def finite_atoms(self):
        return [(z, w) for z, w in self.atoms if z is not INFINITY]


@dataclass
class EnergyResult:
    value: float
    skipped_diagonal: int
    skipped_infinity: int

    def __float__(self):
        return self.value


def energy_atomic_report(rho: AtomicMeasureC, rhop: AtomicMeasureC,
                         merge_tol: float = 0.0) -> EnergyResult:
    """-sum w_i w'_j log|z_i - z'_j| over pairs of distinct finite atoms.

    Pairs closer than ``merge_tol`` count as diagonal (useful when atoms are
    numerical root approximations).
    """
    total = 0.0
    diag = 0
    at_inf = 0
    for z, w in rho.atoms:
        if z is INFINITY:
            at_inf += 1
            continue
        for zp, wp in rhop.atoms:
            if zp is INFINITY:
                at_inf += 1
                continue
            d = abs(z - zp)
            if d <= merge_tol:
                diag += 1
                continue
            total -= float(w * wp) * math.log(d)
    return EnergyResult(total, diag, at_inf)


def energy_atomic(rho: AtomicMeasureC, rhop: AtomicMeasureC,
                  merge_tol: float = 0.0) -> float:
    return energy_atomic_report(rho, rhop, merge_tol).value


def energy_cloud(points: np.ndarray) -> float:
    """Off-diagonal self-energy of the uniform measure on a large point
    cloud: -(1/n^2) sum_{i != j} log|z_i - z_j|.  Uses the compiled kernel."""
    n = len(points)
    return -pair_log_sum(np.asarray(points, dtype=np.complex128)) / n ** 2


# ---------------------------------------------------------------------------
# Smoothing kernel.


def _bump(u: float) -> float:
    if u >= 1.0:
        return 0.0
    return math.exp(-1.0 / (1.0 - u * u))


class SmoothingKernel:
    """Smooth decreasing radial profile on [0, 1) with unit integral.

    The default profile is phi(r) = c exp(-1/(1-r^2)); the codomain is not
    constrained to [0, 1] (a smooth decreasing profile with unit integral on
    [0, 1] cannot also be bounded by 1 near 0).  ``c_phi`` is the constant
    -int_0^1 log(r) phi(r) dr appearing in the regularization bounds.
    """

    def __init__(self, profile: Callable[[float], float] | None = None):
        raw = profile if profile is not None else _bump
        norm, _ = quad(raw, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13)
        self.profile = lambda u: raw(u) / norm
        self.c_phi, _ = quad(lambda u: -math.log(u) * self.profile(u),
                             0.0, 1.0, epsabs=1e-12, epsrel=1e-12)
        # cumulative Phi(u) = int_0^u phi, tabulated for the max-distribution
        us = np.linspace(0.0, 1.0, 2049)
        vals = np.array([self.profile(u) for u in us])
        cum = np.concatenate([[0.0], np.cumsum((vals[1:] + vals[:-1]) / 2)
                              * (us[1] - us[0])])
        self._cum_grid = (us, cum / cum[-1])

    def phi_eps(self, r: float, eps: float) -> float:
        return self.profile(r / eps) / eps

    def cumulative(self, u: float) -> float:
        us, cum = self._cum_grid
        return float(np.interp(u, us, cum))


DEFAULT_KERNEL = SmoothingKernel()


def regularized_pair(z, zp, eps: float, kernel: SmoothingKernel | None = None
                     ) -> float:
    """Mutual energy of two kernel-smoothed point masses.

    The four-dimensional integral collapses by the circle-average identity
    (the average of log|a - r e^{it}| over t is max(log|a|, log r)) to
    -E[max(L, log max(r, r'))] with L = log|z - z'| and r, r' independent
    with density phi_eps.  The coincident case returns the contract value
    c_phi + log(1/eps).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    k = kernel if kernel is not None else DEFAULT_KERNEL
    if z == zp:
        return k.c_phi + math.log(1.0 / eps)
    L = math.log(abs(z - zp))
    if abs(z - zp) >= eps:
        return -L  # max saturates at L on the whole support
    # m = max(r, r') has density 2 phi_eps(m) Phi(m/eps)
    def integrand(m):
        return max(L, math.log(m)) * 2.0 * k.phi_eps(m, eps) * k.cumulative(m / eps)

    with warnings.catch_warnings():
        # the kink of the integrand at |z - z'| triggers a spurious
        # roundoff warning even though the tolerance is reached
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(integrand, 0.0, eps, epsabs=5e-10, epsrel=5e-10,
                      points=[abs(z - zp)], limit=200)
    return -val


def energy_regularized_set(F: AtomicMeasureC, eps: float,
                           kernel: SmoothingKernel | None = None) -> float:
    """Self-energy of the smoothed measure [F]_eps, assembled pair by pair.

    Satisfies ([F]_eps, [F]_eps) <= ([F], [F]) + |F|^{-1} (c_phi + log 1/eps)
    by construction (equality on the diagonal, domination off it).
    """
    atoms = F.finite_atoms()
    total = 0.0
    for i, (z, w) in enumerate(atoms):
        for zp, wp in atoms:
            total += float(w * wp) * regularized_pair(z, zp, eps, kernel)
    return total


# ---------------------------------------------------------------------------
# Measures with evaluable potentials.


@dataclass
class PotentialMeasureC:
    """Probability measure on the sphere with potential evaluator
    g(z) = int log|z - w| drho(w), a seeded sampler, and its self-energy."""

    kind: str
    potential: Callable[[complex], float]
    sampler: Callable[[int, int], AtomicMeasureC]
    self_energy: float = 0.0

    @staticmethod
    def lambda_circle() -> "PotentialMeasureC":
        def pot(z):
            return max(0.0, math.log(abs(z))) if z != 0 else 0.0

        def sample(n, seed):
            rng = np.random.default_rng(seed)
            angles = rng.uniform(0.0, 2.0 * math.pi, n)
            return AtomicMeasureC.equidistributed(np.exp(1j * angles).tolist())

        return PotentialMeasureC("lambda", pot, sample, 0.0)

    @staticmethod
    def from_atoms(rho: AtomicMeasureC) -> "PotentialMeasureC":
        atoms = rho.finite_atoms()

        def pot(z):
            acc = 0.0
            for w_pt, w in atoms:
                d = abs(z - w_pt)
                if d > 0:
                    acc += float(w) * math.log(d)
            return acc

        def sample(n, seed):
            return rho

        return PotentialMeasureC(
            "explicit_atomic", pot, sample,
            energy_atomic(rho, rho))

    def modulus_of_continuity(self, eps: float, grid_size: int = 60,
                              box: float = 2.5) -> float:
        """Sampled sup over a grid of |g(z + eps e^{it}) - g(z)|."""
        worst = 0.0
        xs = np.linspace(-box, box, grid_size)
        for x in xs:
            for y in xs:
                z = complex(x, y)
                g0 = self.potential(z)
                for t in (0.0, 1.0, 2.3, 4.1, 5.5):
                    g1 = self.potential(z + eps * cmath.exp(1j * t))
                    worst = max(worst, abs(g1 - g0))
        return worst


def pairing_set_vs_potential(points, rho: PotentialMeasureC) -> float:
    """([F], rho) = -(1/|F|) sum g_rho(alpha) over the finite points."""
    pts = [z for z in points if z is not INFINITY]
    return -sum(rho.potential(z) for z in pts) / len(points)


def pairing_regularized_vs_measure(points, rho: PotentialMeasureC,
                                   eps: float,
                                   kernel: SmoothingKernel | None = None,
                                   n_angle: int = 64) -> float:
    """([F]_eps, rho): each atom is smeared over circles of radius r <= eps,
    the potential is circle-averaged by the trapezoid rule (the integrand is
    periodic, so convergence is fast) and radially averaged against
    phi_eps."""
    k = kernel if kernel is not None else DEFAULT_KERNEL
    pts = [z for z in points if z is not INFINITY]
    angles = np.arange(n_angle) * (2.0 * math.pi / n_angle)

    def smeared(z):
        def radial(r):
            avg = sum(rho.potential(z + r * cmath.exp(1j * t))
                      for t in angles) / n_angle
            return avg * k.phi_eps(r, eps)

        with warnings.catch_warnings():
            # kinks of the circle-averaged potential trigger a spurious
            # roundoff warning even though the tolerance is reached
            warnings.simplefilter("ignore", IntegrationWarning)
            val, _ = quad(radial, 0.0, eps, epsabs=1e-9, epsrel=1e-9,
                          limit=100)
        return val

    return -sum(smeared(z) for z in pts) / len(points)


def positivity_check(F: AtomicMeasureC, rho: PotentialMeasureC, eps: float,
                     kernel: SmoothingKernel | None = None) -> float:
    """Self-energy of the mass-zero measure [F]_eps - rho; contractually
    bounded below by a small negative numerical tolerance."""
    if not F.is_probability:
        raise ValueError("F must be a probability measure")
    pts = [z for z, _ in F.finite_atoms()]
    e_ff = energy_regularized_set(F, eps, kernel)
    e_fr = pairing_regularized_vs_measure(pts, rho, eps, kernel)
    return e_ff - 2.0 * e_fr + rho.self_energy


@dataclass
class GapReport:
    lhs: float     # energy of [F] - rho (off-diagonal atomic part)
    rhs: float     # lower bound -2 eta(eps) - |F|^{-1} (c_phi + log 1/eps)
    slack: float
    eta: float
    eps: float


def p130_gap(points, rho: PotentialMeasureC, eps: float,
             eta: float | None = None,
             kernel: SmoothingKernel | None = None) -> GapReport:
    """Both sides of the regularized lower bound for the signed energy
    ([F] - rho, [F] - rho) >= -2 eta(eps) - |F|^{-1} (c_phi + log 1/eps)."""
    k = kernel if kernel is not None else DEFAULT_KERNEL
    if eta is None:
        eta = rho.modulus_of_continuity(eps)
    F = AtomicMeasureC.equidistributed(list(points))
    e_ff = energy_atomic(F, F, merge_tol=1e-12)
    e_fr = pairing_set_vs_potential([z for z, _ in F.atoms], rho)
    lhs = e_ff - 2.0 * e_fr + rho.self_energy
    rhs = -2.0 * eta - (k.c_phi + math.log(1.0 / eps)) / len(points)
    return GapReport(lhs, rhs, lhs - rhs, eta, eps)


# ---------------------------------------------------------------------------
# Test functions and discrepancy reports.


@dataclass
class TestFunctionC:
    """Scalar test function on the sphere with a spherical Lipschitz bound
    and optional exact integrals against named measures."""

    __test__ = False  # not a test case despite the name

    eval: Callable[[complex], float]
    lipschitz_bound: float
    exact_integral_vs: dict = field(default_factory=dict)
    name: str = "phi"

    def integral(self, rho: PotentialMeasureC, n: int = 20000,
                 seed: int = 0) -> float:
        if rho.kind in self.exact_integral_vs:
            return self.exact_integral_vs[rho.kind]
        sample = rho.sampler(n, seed)
        return float(sum(Fraction(w) * 0 for _, w in sample.atoms)) + (
            sum(float(w) * self.eval(z) for z, w in sample.finite_atoms()))

    def sampled_lipschitz(self, points) -> float:
        """Max difference quotient over sample pairs (diagnostic)."""
        worst = 0.0
        pts = list(points)
        for i, z in enumerate(pts):
            for w in pts[i + 1:]:
                d = spherical_distance(z, w)
                if d > 1e-12:
                    worst = max(worst, abs(self.eval(z) - self.eval(w)) / d)
        return worst


@dataclass
class DiscrepancyRow:
    n: int
    h_F: float
    lhs: float
    rhs: float
    lip: float
    ratio: float


def discrepancy_report(points, rho: PotentialMeasureC, phi: TestFunctionC,
                       h_F: float, rate_constant: float = 1.0
                       ) -> DiscrepancyRow:
    """lhs = |mean_F phi - int phi drho| against the height-rate bound
    rhs = (h_F + rate_constant log|F| / |F|) Lip(phi).  Returns both; never
    asserts on its own."""
    pts = list(points)
    n = len(pts)
    mean = sum(phi.eval(z) for z in pts) / n
    lhs = abs(mean - phi.integral(rho))
    rhs = (h_F + rate_constant * math.log(n) / n) * phi.lipschitz_bound
    return DiscrepancyRow(n, h_F, lhs, rhs, phi.lipschitz_bound,
                          lhs / rhs if rhs > 0 else math.inf)
