"""Closed-form finite-sample bounds and log-scale approximations for ``log e1*``.

Everything is computed in natural-log units; probabilities appear only in
:class:`BoundReport` properties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dist import LLRMoments, TiltedFamily, kl_divergence, llr_moments
from .errors import DeltaOutOfRange, DegenerateFamily, DomainError
from .exponent import ExponentSolution, ExtremalMoments, extremal_moments, solve_alpha_star
from .gaussian import INV_SQRT_2PI, SQRT_2PI, phi_inv

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class Invalid:
    """A bound whose sample-size precondition fails; ``min_n`` is the first valid n."""

    min_n: int
    reason: str = ""

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class BoundQuery:
    """Sample size with exactly one of ``epsilon`` or ``delta``; the other follows
    from ``epsilon = exp(-n delta)``."""

    family: TiltedFamily
    n: int
    epsilon: float | None = None
    delta: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if (self.epsilon is None) == (self.delta is None):
            raise ValueError("give exactly one of epsilon and delta")
        if self.epsilon is not None:
            if not 0.0 < self.epsilon < 1.0:
                raise DomainError(f"epsilon={self.epsilon!r} outside (0, 1)")
            object.__setattr__(self, "delta", -math.log(self.epsilon) / self.n)
        else:
            if self.delta <= 0:
                raise DomainError("delta must be > 0")
            object.__setattr__(self, "epsilon", math.exp(-self.n * self.delta))

    @property
    def log_epsilon(self) -> float:
        return -self.n * self.delta


def one_shot_converse_rhs(e2: float, p_tail: float, gamma: float) -> float:
    """``(1/gamma)(1 - e2 - p_tail)`` clamped at zero."""
    if gamma <= 0:
        raise DomainError("gamma must be > 0")
    return max((1.0 - e2 - p_tail) / gamma, 0.0)


def one_shot_achievability_rhs(q_tail: float) -> float:
    """Upper bound on ``e1*``: the Q-probability that the LLR is at least ``log gamma``,
    valid whenever the P-probability that it is below ``log gamma`` is within budget."""
    return q_tail


def _moments_under_p(f: TiltedFamily) -> LLRMoments:
    mom = llr_moments(f.p, f.p, f.q)
    if mom.degenerate:
        raise DegenerateFamily("LLR variance under P is zero")
    return mom


def stein_converse(q: BoundQuery, Delta: float = 1.0, mom: LLRMoments | None = None) -> float | Invalid:
    """Lower bound on ``log e1*`` in the fixed-epsilon regime.

    Valid for ``n >= ((B + Delta) / (1 - epsilon))^2``.
    """
    if Delta <= 0:
        raise DomainError("Delta must be > 0")
    mom = mom or _moments_under_p(q.family)
    B, eps, n = mom.be_constant, q.epsilon, q.n
    threshold = ((B + Delta) / (1.0 - eps)) ** 2
    if n < threshold:
        return Invalid(math.ceil(threshold), "n below the converse threshold")
    arg = eps + (B + Delta) / math.sqrt(n)
    if arg >= 1.0:
        # only reachable when n equals the threshold
        return Invalid(math.floor(threshold) + 1, "quantile argument reaches 1")
    return -n * mom.mean - math.sqrt(n) * mom.sigma * phi_inv(arg) - 0.5 * math.log(n) + math.log(Delta)


def stein_achievability(q: BoundQuery, mom: LLRMoments | None = None) -> float | Invalid:
    """Upper bound on ``log e1*`` in the fixed-epsilon regime, valid for ``n > (B/epsilon)^2``."""
    mom = mom or _moments_under_p(q.family)
    B, eps, n = mom.be_constant, q.epsilon, q.n
    threshold = (B / eps) ** 2
    if n <= threshold:
        return Invalid(math.floor(threshold) + 1, "n at or below the achievability threshold")
    s = mom.sigma
    return (
        -n * mom.mean
        - math.sqrt(n) * s * phi_inv(eps - B / math.sqrt(n))
        - 0.5 * math.log(n)
        + math.log(INV_SQRT_2PI / s + 2.0 * B)
    )


def be2_bound(sigma: float, rho: float, n: int, x: float) -> float:
    """Upper bound on ``E[exp(-S_n) 1{S_n >= x}]`` for a sum of n i.i.d. terms
    with standard deviation ``sigma`` and absolute third central moment ``rho``."""
    if sigma <= 0:
        raise DomainError("sigma must be > 0")
    if n < 1:
        raise DomainError("n must be >= 1")
    return (INV_SQRT_2PI + rho / sigma**2) * math.exp(-x) / (math.sqrt(n) * sigma)


def achievability_constant(sol: ExponentSolution) -> float:
    """Additive constant of the Hoeffding-regime upper bound.

    Built from the moments of ``log q_alpha*/q`` (``tau2``, ``r2``) and
    ``log q_alpha*/p`` (``tau1``, ``r1``) under ``Q_alpha*``.
    """
    a = sol.alpha_star
    t1, r1, t2, r2 = sol.tau1, sol.r1, sol.tau2, sol.r2
    first = math.log(INV_SQRT_2PI / t2 + r2 / t2**3)
    second = math.log(INV_SQRT_2PI / t1 + r1 / t1**3)
    return first + a / (1.0 - a) * second


def achievability_constant_printed(sol: ExponentSolution) -> float:
    """The same constant in closed form, with ``sigma*`` and ``rho*`` the
    moments of ``log p/q`` under ``Q_alpha*``."""
    a = sol.alpha_star
    s, r = sol.sigma_star, sol.rho_star
    return math.log(1.0 / (s * a * SQRT_2PI) + r / s**3) + a / (1.0 - a) * math.log(
        1.0 / (s * (1.0 - a) * SQRT_2PI) + r / s**3
    )


@dataclass(frozen=True)
class ConverseConstant:
    C_prime: float
    m: float
    n0: int
    n_min: int
    n_min_terms: tuple[int, int, int]


def smallest_n0(slope: float) -> int:
    """Smallest n from which ``log n <= slope * sqrt(n)`` holds for every larger n.

    ``log n / sqrt(n)`` rises to its maximum ``2/e`` at ``n = e^2`` and then
    decreases, so the answer is 1 when the inequality holds at the integer peak
    n = 7, and otherwise the first n >= 8 satisfying it, found by bisection
    below the bracket ``(u log u)^2`` with ``u = 4/slope``.
    """
    if slope <= 0:
        raise DomainError("slope must be > 0")

    def ok(n: int) -> bool:
        return math.log(n) <= slope * math.sqrt(n)

    if ok(7):
        return 1
    u = 4.0 / slope
    hi = max(int(math.ceil((u * math.log(u)) ** 2)), 8)
    while not ok(hi):
        hi *= 2
    lo = 8
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def converse_constant(sol: ExponentSolution, ext: ExtremalMoments) -> ConverseConstant:
    """Additive constant ``C'`` of the Hoeffding-regime lower bound and its validity range.

    The bound is asserted for ``n > max(7 (rho0/sigma0^3 + 1)^2,
    (sigma*^2 + 2 rho0 - 2m + 2 log 2)^2 / ((1-alpha*)^2 sigma*^4), n0)``;
    ``n_min`` is the smallest such integer.
    """
    if ext.sigma0_sq <= 0:
        raise DegenerateFamily("sigma0^2 must be positive")
    a = sol.alpha_star
    s2 = sol.sigma_star_sq
    rho0 = ext.rho0
    sigma0 = math.sqrt(ext.sigma0_sq)
    ratio = rho0 / sigma0**3 + 1.0
    m = -2.0 * SQRT_2PI * (1.0 - a) * ratio * math.sqrt(s2 + rho0)
    c_prime = (
        LOG2 / (1.0 - a)
        - (s2 + 2.0 * rho0) * (2.0 - a) / (2.0 * (1.0 - a))
        - abs(ext.sigma0_sq - rho0) / 2.0
        + m
    )
    n0 = smallest_n0((1.0 - a) * s2)
    t1 = 7.0 * ratio**2
    t2 = (s2 + 2.0 * rho0 - 2.0 * m + 2.0 * LOG2) ** 2 / ((1.0 - a) ** 2 * s2**2)
    # strict inequality n > t: first integer strictly above t
    terms = (math.floor(t1) + 1, math.floor(t2) + 1, n0)
    return ConverseConstant(c_prime, m, n0, max(terms), terms)


def hoeffding_log(n: int, sol: ExponentSolution) -> float:
    return -n * sol.d_delta


def new_approx_log(n: int, sol: ExponentSolution) -> float:
    return -n * sol.d_delta - sol.log_n_coefficient * math.log(n)


def stein_log(n: int, mom: LLRMoments) -> float:
    return -n * mom.mean


def strassen_log(n: int, epsilon: float, mom: LLRMoments) -> float:
    return -n * mom.mean - math.sqrt(n) * mom.sigma * phi_inv(epsilon) - 0.5 * math.log(n)


def _exp(x: float | None) -> float | None:
    if x is None:
        return None
    return math.exp(x) if x < 700 else math.inf


@dataclass(frozen=True)
class BoundReport:
    """All approximations and bounds for one (P, Q, n, epsilon/delta) query.

    Log-scale fields are in nats; ``None`` marks a quantity that does not
    apply (for instance exponent-regime fields when ``delta >= D(Q||P)``).
    """

    n: int
    epsilon: float
    delta: float
    stein: float
    strassen: float
    hoeffding: float | None
    new_approx: float | None
    C: float | None
    C_prime: float | None
    m: float | None
    n0: int | None
    n_min_converse: int | None
    alpha_star: float | None
    d_delta: float | None
    stein_conv_lb: float | None
    stein_ach_ub: float | None
    stein_conv_min_n: int | None = None
    stein_ach_min_n: int | None = None
    flags: dict = field(default_factory=dict)

    @property
    def upper(self) -> float | None:
        """Hoeffding-regime upper bound ``new_approx + C`` (valid for every n)."""
        if self.new_approx is None or self.C is None:
            return None
        return self.new_approx + self.C

    @property
    def lower(self) -> float | None:
        """Hoeffding-regime lower bound ``new_approx + C'``; only asserted for ``n >= n_min``."""
        if self.new_approx is None or self.C_prime is None:
            return None
        return self.new_approx + self.C_prime

    def prob(self, name: str) -> float | None:
        return _exp(getattr(self, name))

    def strassen_clamped(self) -> float:
        return min(math.exp(min(self.strassen, 700.0)), 1.0)


def approximations(
    q: BoundQuery,
    sol: ExponentSolution | None = None,
    mom: LLRMoments | None = None,
    ext: ExtremalMoments | None = None,
    Delta: float = 1.0,
) -> BoundReport:
    """Evaluate every approximation and bound for ``q``.

    ``sol``, ``mom`` and ``ext`` are computed when not supplied; pass them in
    to reuse work across a sweep.
    """
    f = q.family
    f.require_nondegenerate()
    mom = mom or _moments_under_p(f)
    n = q.n
    flags: dict[str, bool] = {}

    conv = stein_converse(q, Delta, mom)
    ach = stein_achievability(q, mom)
    flags["stein_converse_valid"] = not isinstance(conv, Invalid)
    flags["stein_achievability_valid"] = not isinstance(ach, Invalid)

    if sol is None:
        try:
            sol = solve_alpha_star(f, q.delta)
        except DeltaOutOfRange:
            sol = None
    elif abs(sol.delta - q.delta) > 1e-12 * max(1.0, q.delta):
        raise ValueError("solution delta does not match the query")

    if sol is None:
        flags["exponent_applicable"] = False
        hoeff = new = C = None
        cc = None
    else:
        flags["exponent_applicable"] = True
        hoeff = hoeffding_log(n, sol)
        new = new_approx_log(n, sol)
        C = achievability_constant(sol)
        ext = ext or extremal_moments(f)
        cc = converse_constant(sol, ext)
        flags["converse_valid"] = n >= cc.n_min

    return BoundReport(
        n=n,
        epsilon=q.epsilon,
        delta=q.delta,
        stein=stein_log(n, mom),
        strassen=strassen_log(n, q.epsilon, mom),
        hoeffding=hoeff,
        new_approx=new,
        C=C,
        C_prime=cc.C_prime if cc else None,
        m=cc.m if cc else None,
        n0=cc.n0 if cc else None,
        n_min_converse=cc.n_min if cc else None,
        alpha_star=sol.alpha_star if sol else None,
        d_delta=sol.d_delta if sol else None,
        stein_conv_lb=None if isinstance(conv, Invalid) else conv,
        stein_ach_ub=None if isinstance(ach, Invalid) else ach,
        stein_conv_min_n=conv.min_n if isinstance(conv, Invalid) else None,
        stein_ach_min_n=ach.min_n if isinstance(ach, Invalid) else None,
        flags=flags,
    )


def admissible_delta_range(f: TiltedFamily) -> tuple[float, float]:
    """Open interval of exponent levels, ``(0, D(Q||P))``."""
    return 0.0, kl_divergence(f.q, f.p)
