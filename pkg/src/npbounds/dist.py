"""Finite-alphabet distributions, log-likelihood-ratio moments and the tilted family.

All integrals against the counting measure reduce to finite sums. Sums are
accumulated with :func:`math.fsum` so that results do not depend on term order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateFamily, SupportMismatch

NORMALIZATION_TOL = 1e-12
DEGENERATE_VARIANCE = 1e-14


def _fsum(values) -> float:
    return math.fsum(np.asarray(values, dtype=float).tolist())


@dataclass(frozen=True)
class FiniteDistribution:
    """Probability vector over symbols ``0..k-1``."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("probs must be a non-empty 1-d vector")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("probabilities must be finite and nonnegative")
        total = _fsum(arr)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @classmethod
    def bernoulli(cls, p: float) -> "FiniteDistribution":
        """Distribution on {0, 1} with mass ``p`` on symbol 1."""
        if not 0.0 <= p <= 1.0:
            raise ValueError("bernoulli parameter must lie in [0, 1]")
        return cls(np.array([1.0 - p, p]))

    @property
    def k(self) -> int:
        return self.probs.size

    @property
    def support(self) -> np.ndarray:
        return self.probs > 0

    def __len__(self) -> int:
        return self.probs.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteDistribution):
            return NotImplemented
        return self.k == other.k and bool(np.array_equal(self.probs, other.probs))

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())


def _check_same_alphabet(a: FiniteDistribution, b: FiniteDistribution) -> None:
    if a.k != b.k:
        raise ValueError(f"alphabet sizes differ: {a.k} != {b.k}")


def kl_divergence(a: FiniteDistribution, b: FiniteDistribution) -> float:
    """Relative entropy D(a||b) in nats.

    Raises:
        SupportMismatch: if ``a`` charges a symbol that ``b`` does not.
    """
    _check_same_alphabet(a, b)
    pa, pb = a.probs, b.probs
    if np.any((pa > 0) & (pb == 0)):
        raise SupportMismatch("first distribution is not absolutely continuous w.r.t. the second")
    on = pa > 0
    terms = pa[on] * (np.log(pa[on]) - np.log(pb[on]))
    return max(_fsum(terms), 0.0)


def hellinger_sq(a: FiniteDistribution, b: FiniteDistribution) -> float:
    """Squared Hellinger distance with the convention ``1 - sum(sqrt(a*b))``."""
    _check_same_alphabet(a, b)
    bc = _fsum(np.sqrt(a.probs * b.probs))
    return min(max(1.0 - bc, 0.0), 1.0)


@dataclass(frozen=True)
class LLRMoments:
    """Moments of ``log p/q`` under a reference distribution.

    ``be_constant`` is ``T / (2 sigma^3)``; it is ``None`` when the variance is
    degenerate, in which case ``degenerate`` is set.
    """

    mean: float
    variance: float
    abs_third_central: float
    be_constant: float | None
    degenerate: bool = False

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)


def _moments_from(weights: np.ndarray, values: np.ndarray) -> tuple[float, float, float]:
    mean = _fsum(weights * values)
    dev = values - mean
    var = _fsum(weights * dev * dev)
    third = _fsum(weights * np.abs(dev) ** 3)
    return mean, max(var, 0.0), max(third, 0.0)


def llr_moments(reference: FiniteDistribution, p: FiniteDistribution, q: FiniteDistribution) -> LLRMoments:
    """Mean, variance and absolute third central moment of ``log p/q`` under ``reference``."""
    _check_same_alphabet(p, q)
    _check_same_alphabet(reference, p)
    if not np.array_equal(p.support, q.support):
        raise SupportMismatch("p and q must have identical supports")
    if np.any(reference.support & ~p.support):
        raise SupportMismatch("reference charges symbols outside the support of p")
    on = reference.support
    llr = np.log(p.probs[on]) - np.log(q.probs[on])
    mean, var, third = _moments_from(reference.probs[on], llr)
    if var < DEGENERATE_VARIANCE:
        return LLRMoments(mean, var, third, None, degenerate=True)
    return LLRMoments(mean, var, third, third / (2.0 * var**1.5))


@dataclass(frozen=True)
class TiltedFamily:
    """A mutually absolutely continuous pair (P, Q) and its geometric mixtures.

    Symbols outside the common support are dropped; every evaluator works on
    the restricted vectors ``log_p`` and ``log_q``.
    """

    p: FiniteDistribution
    q: FiniteDistribution
    log_p: np.ndarray = field(init=False, repr=False)
    log_q: np.ndarray = field(init=False, repr=False)
    per_symbol_llr: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        _check_same_alphabet(self.p, self.q)
        if self.p.k < 2:
            raise ValueError("alphabet must have at least two symbols")
        if not np.array_equal(self.p.support, self.q.support):
            raise SupportMismatch("P and Q must be mutually absolutely continuous")
        on = self.p.support
        log_p = np.log(self.p.probs[on])
        log_q = np.log(self.q.probs[on])
        llr = log_p - log_q
        for arr in (log_p, log_q, llr):
            arr.setflags(write=False)
        object.__setattr__(self, "log_p", log_p)
        object.__setattr__(self, "log_q", log_q)
        object.__setattr__(self, "per_symbol_llr", llr)

    @classmethod
    def from_probs(cls, p: Sequence[float], q: Sequence[float]) -> "TiltedFamily":
        return cls(FiniteDistribution(np.asarray(p, float)), FiniteDistribution(np.asarray(q, float)))

    @property
    def is_degenerate(self) -> bool:
        """True when P and Q agree on the common support."""
        return bool(np.all(self.per_symbol_llr == 0.0))

    def log_weights(self, alpha: float) -> np.ndarray:
        return alpha * self.log_p + (1.0 - alpha) * self.log_q

    def z_alpha(self, alpha: float) -> float:
        return z_alpha(self, alpha)

    def tilt(self, alpha: float) -> FiniteDistribution:
        return tilt(self, alpha)

    def require_nondegenerate(self) -> None:
        if self.is_degenerate:
            raise DegenerateFamily("P and Q coincide; the log-likelihood ratio is identically zero")


def _check_alpha(alpha: float, closed: bool = True) -> None:
    ok = (0.0 <= alpha <= 1.0) if closed else (0.0 < alpha < 1.0)
    if not ok:
        interval = "[0, 1]" if closed else "(0, 1)"
        raise ValueError(f"alpha={alpha!r} outside {interval}")


def z_alpha(f: TiltedFamily, alpha: float) -> float:
    """``Z(alpha) = sum p^alpha q^(1-alpha)`` over the common support."""
    _check_alpha(alpha)
    if alpha == 0.0 or alpha == 1.0:
        return 1.0
    return _fsum(np.exp(f.log_weights(alpha)))


def z_alpha_derivatives(f: TiltedFamily, alpha: float) -> tuple[float, float, float, float]:
    """``Z`` and its first three derivatives in ``alpha``.

    The m-th derivative is ``sum p^alpha q^(1-alpha) (log p/q)^m``.
    """
    _check_alpha(alpha, closed=False)
    w = np.exp(f.log_weights(alpha))
    llr = f.per_symbol_llr
    return (_fsum(w), _fsum(w * llr), _fsum(w * llr**2), _fsum(w * llr**3))


def tilted_probs(f: TiltedFamily, alpha: float) -> np.ndarray:
    """Tilted masses on the common support (endpoints returned verbatim)."""
    _check_alpha(alpha)
    if alpha == 1.0:
        return f.p.probs[f.p.support]
    if alpha == 0.0:
        return f.q.probs[f.q.support]
    lw = f.log_weights(alpha)
    w = np.exp(lw - lw.max())
    return w / _fsum(w)


def tilt(f: TiltedFamily, alpha: float) -> FiniteDistribution:
    """The tilted distribution ``Q_alpha`` with density ``p^alpha q^(1-alpha) / Z(alpha)``."""
    _check_alpha(alpha)
    if alpha == 1.0:
        return f.p
    if alpha == 0.0:
        return f.q
    full = np.zeros(f.p.k)
    full[f.p.support] = tilted_probs(f, alpha)
    # fix normalization drift so the constructor's 1e-12 check always holds
    full /= _fsum(full)
    return FiniteDistribution(full)


def tilted_llr_moments(f: TiltedFamily, alpha: float) -> tuple[float, float, float]:
    """Mean, variance and absolute third central moment of ``log p/q`` under ``Q_alpha``."""
    return _moments_from(tilted_probs(f, alpha), np.asarray(f.per_symbol_llr))


def tilted_llr_central_third(f: TiltedFamily, alpha: float) -> float:
    """Signed third central moment of ``log p/q`` under ``Q_alpha``."""
    w = tilted_probs(f, alpha)
    llr = np.asarray(f.per_symbol_llr)
    mean = _fsum(w * llr)
    return _fsum(w * (llr - mean) ** 3)


def log_z(f: TiltedFamily, alpha: float) -> float:
    """``log Z(alpha)`` computed with a max shift."""
    _check_alpha(alpha)
    if alpha == 0.0 or alpha == 1.0:
        return 0.0
    lw = f.log_weights(alpha)
    m = lw.max()
    return m + math.log(_fsum(np.exp(lw - m)))


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(func, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    """Minimize a unimodal function on ``[lo, hi]``; returns ``(argmin, min)``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = func(d)
    # the bracket endpoints can beat interior probes when the minimum sits on the boundary
    candidates = [(fc, c), (fd, d), (func(a), a), (func(b), b)]
    best_f, best_x = min(candidates)
    return best_x, best_f


def chernoff_information(f: TiltedFamily) -> float:
    """``-min_{alpha in [0,1]} log Z(alpha)``."""
    if f.is_degenerate:
        return 0.0
    _, val = golden_section_min(lambda a: log_z(f, a), 0.0, 1.0, tol=1e-13)
    return max(-val, 0.0)
