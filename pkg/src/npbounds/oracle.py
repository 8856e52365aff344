"""Exact optimal first-kind error for i.i.d. tests on a finite alphabet.

The log-likelihood ratio of ``n`` observations depends only on the symbol
counts, so the n-fold product measure collapses onto compositions of ``n``.
Each composition ``c`` carries mass ``multinomial(n; c) * prod p_i^c_i`` under
``P^n`` (likewise under ``Q^n``), and LLR ``sum c_i log(p_i/q_i)``. All masses
are held as logarithms.

The randomized Neyman-Pearson test declares Q on the atoms with the lowest
LLR until their P-mass reaches the budget ``epsilon``, randomizing on the
boundary atom so that the second-kind error equals ``epsilon`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.special import gammaln, logsumexp

from .dist import TiltedFamily
from .errors import DomainError, TooLarge

MAX_ATOMS = 2_000_000
MERGE_RTOL = 1e-12


def composition_count(n: int, k: int) -> int:
    return math.comb(n + k - 1, k - 1)


def compositions(n: int, k: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``k`` summing to ``n``, as rows."""
    if k == 1:
        return np.array([[n]], dtype=np.int64)
    blocks = []
    for first in range(n, -1, -1):
        rest = compositions(n - first, k - 1)
        blocks.append(np.column_stack([np.full(len(rest), first, dtype=np.int64), rest]))
    return np.vstack(blocks)


@dataclass(frozen=True)
class LLRAtomTable:
    """Distinct LLR values of the n-sample statistic with their log P/Q masses."""

    llr: np.ndarray
    log_p_mass: np.ndarray
    log_q_mass: np.ndarray
    n: int

    def __len__(self) -> int:
        return self.llr.size


def build_atom_table(f: TiltedFamily, n: int, max_atoms: int = MAX_ATOMS) -> LLRAtomTable:
    """Distribution of the summed LLR over ``n`` i.i.d. draws under P and Q.

    Raises:
        TooLarge: if the number of compositions exceeds ``max_atoms``.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    k = f.per_symbol_llr.size
    count = composition_count(n, k)
    if count > max_atoms:
        raise TooLarge(f"{count} atoms for n={n}, k={k} exceeds limit {max_atoms}", count)
    comps = compositions(n, k)
    log_coef = gammaln(n + 1.0) - gammaln(comps + 1.0).sum(axis=1)
    log_p = log_coef + comps @ f.log_p
    log_q = log_coef + comps @ f.log_q
    llr = comps @ f.per_symbol_llr

    order = np.argsort(llr, kind="stable")
    llr, log_p, log_q = llr[order], log_p[order], log_q[order]
    # merge compositions whose LLR values coincide to 1e-12 relative
    scale = np.maximum(np.maximum(np.abs(llr[1:]), np.abs(llr[:-1])), 1.0)
    new_group = np.concatenate([[True], np.diff(llr) > MERGE_RTOL * scale])
    if new_group.all():
        out = (llr, log_p, log_q)
    else:
        starts = np.flatnonzero(new_group)
        bounds = np.append(starts, llr.size)
        out = (
            llr[starts],
            np.array([logsumexp(log_p[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]),
            np.array([logsumexp(log_q[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]),
        )
    for arr in out:
        arr.setflags(write=False)
    return LLRAtomTable(*out, n=n)


@dataclass(frozen=True)
class OracleResult:
    e1_star: float
    log_e1_star: float
    threshold_llr: float
    boundary_weight: float
    epsilon_used: float
    log_epsilon: float


def _log_diff(a: float, b: float) -> float:
    """``log(exp(a) - exp(b))`` for ``a >= b``."""
    if b == -math.inf:
        return a
    if b >= a:
        return -math.inf
    return a + math.log1p(-math.exp(b - a))


def e1_star(table: LLRAtomTable, epsilon: float | None = None, *, log_epsilon: float | None = None) -> OracleResult:
    """Smallest first-kind error among tests whose second-kind error is at most ``epsilon``.

    The budget may be passed as ``log_epsilon`` to reach values below the
    double-precision range. ``boundary_weight`` is the probability of
    declaring Q on the threshold atom.
    """
    if (epsilon is None) == (log_epsilon is None):
        raise ValueError("give exactly one of epsilon and log_epsilon")
    if log_epsilon is None:
        if not 0.0 <= epsilon <= 1.0:
            raise DomainError(f"epsilon={epsilon!r} outside [0, 1]")
        log_eps = math.log(epsilon) if epsilon > 0 else -math.inf
    else:
        if log_epsilon > 0:
            raise DomainError("log_epsilon must be <= 0")
        log_eps = float(log_epsilon)
    eps_used = math.exp(log_eps)

    llr, lp, lq = table.llr, table.log_p_mass, table.log_q_mass
    if log_eps == 0.0:
        return OracleResult(0.0, -math.inf, float(llr[-1]), 1.0, 1.0, 0.0)
    if log_eps == -math.inf:
        return OracleResult(1.0, 0.0, float(llr[0]), 0.0, 0.0, -math.inf)

    cum_p = np.logaddexp.accumulate(lp)
    # index of the boundary atom: first atom whose inclusion would exceed the budget
    j = int(np.searchsorted(cum_p, log_eps, side="right"))
    if j >= llr.size:
        # budget covers everything up to rounding
        return OracleResult(0.0, -math.inf, float(llr[-1]), 1.0, eps_used, log_eps)
    below = cum_p[j - 1] if j > 0 else -math.inf
    log_room = _log_diff(log_eps, below)
    frac = min(math.exp(log_room - lp[j]), 1.0)
    # Q-mass declared P: atoms above j in full, plus (1 - frac) of atom j
    tail = logsumexp(lq[j + 1:]) if j + 1 < llr.size else -math.inf
    if frac < 1.0:
        log_e1 = np.logaddexp(tail, lq[j] + math.log1p(-frac))
    else:
        log_e1 = tail
    log_e1 = min(float(log_e1), 0.0)
    return OracleResult(
        e1_star=math.exp(log_e1),
        log_e1_star=log_e1,
        threshold_llr=float(llr[j]),
        boundary_weight=frac,
        epsilon_used=eps_used,
        log_epsilon=log_eps,
    )


def E1_star(table: LLRAtomTable, delta: float) -> OracleResult:
    """Optimal first-kind error when the second kind must be at most ``exp(-n delta)``."""
    if delta < 0:
        raise DomainError("delta must be nonnegative")
    return e1_star(table, log_epsilon=-table.n * delta)


def lp_cross_check(f: TiltedFamily, n: int, epsilon: float) -> float:
    """Independent optimum over the raw product space in exact rational arithmetic.

    Enumerates all ``k^n`` outcomes, converts the float masses to exact
    fractions, and fills the ``epsilon`` budget greedily in order of increasing
    likelihood ratio; this greedy fill is the exact solution of the linear
    program over per-outcome randomization vectors.
    """
    k = f.p.k
    if k > 3 or n > 2:
        raise TooLarge(f"cross-check limited to k <= 3, n <= 2 (got k={k}, n={n})", k**n)
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError("epsilon outside [0, 1]")
    p = [Fraction(float(x)) for x in f.p.probs]
    q = [Fraction(float(x)) for x in f.q.probs]
    outcomes = []
    for xs in product(range(k), repeat=n):
        pm = math.prod((p[i] for i in xs), start=Fraction(1))
        qm = math.prod((q[i] for i in xs), start=Fraction(1))
        if pm == 0 and qm == 0:
            continue
        outcomes.append((pm / qm, pm, qm))
    outcomes.sort(key=lambda t: t[0])
    total_q = sum((qm for _, _, qm in outcomes), Fraction(0))
    budget = Fraction(epsilon)
    removed = Fraction(0)
    for _, pm, qm in outcomes:
        if budget <= 0:
            break
        take = min(Fraction(1), budget / pm)
        removed += take * qm
        budget -= take * pm
    return float((total_q - removed) / total_q)
