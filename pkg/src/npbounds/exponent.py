"""Hoeffding-regime error exponent via the tilted family.

For ``0 < delta < D(Q||P)`` there is a unique ``alpha*`` in (0, 1) with
``D(Q_alpha*||P) = delta``; the optimal exponent is ``D(Q_alpha*||Q)``.

Moment conventions: ``sigma_star_sq`` and ``rho_star`` are the variance and
absolute third central moment of ``log p/q`` under ``Q_alpha*``. The moments of
``log q_alpha*/p`` and ``log q_alpha*/q`` follow by scaling with
``(1 - alpha*)`` and ``alpha*`` respectively (see :meth:`ExponentSolution.tau1`
and friends).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import (
    DEGENERATE_VARIANCE,
    TiltedFamily,
    golden_section_min,
    kl_divergence,
    log_z,
    tilted_llr_central_third,
    tilted_llr_moments,
    z_alpha_derivatives,
)
from .errors import DegenerateFamily, DeltaOutOfRange

BISECTION_TOL = 1e-13


def g_alpha(f: TiltedFamily, alpha: float) -> float:
    """``D(Q_alpha||P) = -log Z(alpha) - (1 - alpha) Z'(alpha) / Z(alpha)``."""
    z, z1, _, _ = z_alpha_derivatives(f, alpha)
    return max(-math.log(z) - (1.0 - alpha) * z1 / z, 0.0)


def h_alpha(f: TiltedFamily, alpha: float) -> float:
    """``D(Q_alpha||Q) = -log Z(alpha) + alpha Z'(alpha) / Z(alpha)``."""
    z, z1, _, _ = z_alpha_derivatives(f, alpha)
    return max(-math.log(z) + alpha * z1 / z, 0.0)


@dataclass(frozen=True)
class ExponentSolution:
    delta: float
    alpha_star: float
    d_delta: float
    sigma_star_sq: float
    rho_star: float

    @property
    def sigma_star(self) -> float:
        return math.sqrt(self.sigma_star_sq)

    # moments of log q_alpha*/p under Q_alpha*
    @property
    def tau1(self) -> float:
        return (1.0 - self.alpha_star) * self.sigma_star

    @property
    def r1(self) -> float:
        return (1.0 - self.alpha_star) ** 3 * self.rho_star

    # moments of log q_alpha*/q under Q_alpha*
    @property
    def tau2(self) -> float:
        return self.alpha_star * self.sigma_star

    @property
    def r2(self) -> float:
        return self.alpha_star**3 * self.rho_star

    @property
    def log_n_coefficient(self) -> float:
        """Coefficient ``1 / (2 (1 - alpha*))`` of ``log n``."""
        return 0.5 / (1.0 - self.alpha_star)


def solve_alpha_star(f: TiltedFamily, delta: float, tol: float = BISECTION_TOL) -> ExponentSolution:
    """Find ``alpha*`` with ``D(Q_alpha*||P) = delta`` by bisection.

    ``g_alpha`` decreases strictly from ``D(Q||P)`` at 0 to 0 at 1, so plain
    bisection on (0, 1) converges to the unique root.

    Raises:
        DegenerateFamily: if P and Q coincide.
        DeltaOutOfRange: unless ``0 < delta < D(Q||P)``.
    """
    if f.is_degenerate:
        raise DegenerateFamily("P = Q: no admissible exponent level")
    upper = kl_divergence(f.q, f.p)
    if not (0.0 < delta < upper):
        raise DeltaOutOfRange(f"delta={delta!r} outside (0, D(Q||P)={upper!r})")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g_alpha(f, mid) > delta:
            lo = mid
        else:
            hi = mid
    alpha = 0.5 * (lo + hi)
    _, var, third = tilted_llr_moments(f, alpha)
    return ExponentSolution(
        delta=delta,
        alpha_star=alpha,
        d_delta=h_alpha(f, alpha),
        sigma_star_sq=var,
        rho_star=third,
    )


def exponent_from_identity(f: TiltedFamily, sol: ExponentSolution) -> float:
    """``D(delta)`` rebuilt from ``delta`` and ``Z``: ``-(alpha* delta + log Z(alpha*)) / (1 - alpha*)``.

    Follows from ``log q_a/p = -(1-a) log p/q - log Z`` and
    ``log q_a/q = a log p/q - log Z`` averaged under ``Q_a``.
    """
    a = sol.alpha_star
    return -(a * sol.delta + log_z(f, a)) / (1.0 - a)


def exponent_derivatives(f: TiltedFamily, alpha: float) -> tuple[float, float, float, float]:
    """First and second ``alpha``-derivatives of ``D(Q_alpha||P)`` and ``D(Q_alpha||Q)``.

    Returns ``(dDP, dDQ, d2DP, d2DQ)``, all expressed through the variance and
    signed third central moment of ``log p/q`` under ``Q_alpha``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    _, var, _ = tilted_llr_moments(f, alpha)
    k3 = tilted_llr_central_third(f, alpha)
    return (
        -(1.0 - alpha) * var,
        alpha * var,
        var - (1.0 - alpha) * k3,
        var + alpha * k3,
    )


@dataclass(frozen=True)
class ExtremalMoments:
    sigma0_sq: float
    rho0: float
    alpha_at_sigma0: float
    alpha_at_rho0: float


def extremal_moments(f: TiltedFamily, grid: int = 1025) -> ExtremalMoments:
    """Infimum of the variance and supremum of the absolute third central moment
    of ``log p/q`` under ``Q_alpha`` over ``alpha`` in [0, 1].

    On a finite alphabet both moments extend continuously to the endpoints, so
    the closed interval is searched: a uniform grid locates the best cell and a
    golden-section search refines within its two neighbouring cells.

    Raises:
        DegenerateFamily: if the infimum variance is below 1e-14.
    """
    if f.is_degenerate:
        raise DegenerateFamily("P = Q on the common support")
    alphas = np.linspace(0.0, 1.0, grid)
    var = np.empty(grid)
    third = np.empty(grid)
    for i, a in enumerate(alphas):
        _, var[i], third[i] = tilted_llr_moments(f, float(a))

    def refine(values: np.ndarray, func) -> tuple[float, float]:
        i = int(np.argmin(values))
        lo = float(alphas[max(i - 1, 0)])
        hi = float(alphas[min(i + 1, grid - 1)])
        x, fx = golden_section_min(func, lo, hi, tol=1e-12)
        if values[i] < fx:
            return float(alphas[i]), float(values[i])
        return x, fx

    a_var, v_min = refine(var, lambda a: tilted_llr_moments(f, a)[1])
    a_rho, neg_rho = refine(-third, lambda a: -tilted_llr_moments(f, a)[2])
    if v_min < DEGENERATE_VARIANCE:
        raise DegenerateFamily(f"infimum LLR variance {v_min!r} is degenerate")
    return ExtremalMoments(sigma0_sq=v_min, rho0=-neg_rho, alpha_at_sigma0=a_var, alpha_at_rho0=a_rho)
