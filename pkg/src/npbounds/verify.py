"""Self-checks of the numerical identities and bounds, run by ``npbounds verify``.

Each suite returns a :class:`SuiteResult`; a failing suite carries the first
counterexample it found.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np

from . import gaussian
from .bounds import (
    BoundQuery,
    Invalid,
    achievability_constant,
    be2_bound,
    converse_constant,
    new_approx_log,
    stein_achievability,
    stein_converse,
)
from .dist import TiltedFamily, kl_divergence, tilt, tilted_llr_moments, z_alpha, z_alpha_derivatives
from .errors import TooLarge
from .exponent import (
    exponent_derivatives,
    exponent_from_identity,
    extremal_moments,
    solve_alpha_star,
)
from .oracle import E1_star, build_atom_table, e1_star, lp_cross_check

FD_STEP = 1e-5
FD_RTOL = 1e-5
# FD noise floor: roundoff of ~1e-16 * |f| / h sets an absolute error scale
FD_ATOL_FACTOR = 1e-9


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""


def bernoulli_pair() -> TiltedFamily:
    return TiltedFamily.from_probs([0.4, 0.6], [0.75, 0.25])


def random_pairs(rng: np.random.Generator, count: int, kmax: int = 4, min_mass: float = 0.02) -> list[TiltedFamily]:
    """Random mutually absolutely continuous pairs with alphabet size 2..kmax."""
    out = []
    while len(out) < count:
        k = int(rng.integers(2, kmax + 1))
        p = rng.dirichlet(np.ones(k)) * (1 - k * min_mass) + min_mass
        q = rng.dirichlet(np.ones(k)) * (1 - k * min_mass) + min_mass
        p /= p.sum()
        q /= q.sum()
        f = TiltedFamily.from_probs(p, q)
        # keep pairs whose LLR is not nearly constant
        if tilted_llr_moments(f, 0.5)[1] > 1e-3:
            out.append(f)
    return out


def _close(an: float, fd: float, scale: float) -> bool:
    return abs(an - fd) <= FD_RTOL * abs(an) + FD_ATOL_FACTOR * scale


def suite_gaussian(points: int = 1000) -> SuiteResult:
    us = np.logspace(-10, math.log10(0.5), points // 2)
    us = np.concatenate([us, 1.0 - us[::-1]])
    worst, where = 0.0, None
    for u in us:
        err = abs(gaussian.phi_cdf(gaussian.phi_inv(float(u))) - u)
        if err > worst:
            worst, where = err, u
    ok = worst <= 1e-11
    return SuiteResult("gaussian round trip", ok, len(us), f"max |Phi(Phi^-1(u)) - u| = {worst:.3g} at u={where!r}")


def _z_derivative_checks(f: TiltedFamily, alphas) -> str | None:
    h = FD_STEP
    for a in alphas:
        z, z1, z2, z3 = z_alpha_derivatives(f, a)
        zp, z1p, z2p, _ = z_alpha_derivatives(f, a + h)
        zm, z1m, z2m, _ = z_alpha_derivatives(f, a - h)
        checks = (
            ("Z'", z1, (z_alpha(f, a + h) - z_alpha(f, a - h)) / (2 * h), z),
            ("Z''", z2, (z1p - z1m) / (2 * h), abs(z1) + z),
            ("Z'''", z3, (z2p - z2m) / (2 * h), z2 + z),
        )
        for name, an, fd, scale in checks:
            if not _close(an, fd, scale):
                return f"{name} at alpha={a}: analytic {an!r} vs finite difference {fd!r}"
    return None


def _exponent_derivative_checks(f: TiltedFamily, alphas) -> str | None:
    h = FD_STEP

    def d_p(a):
        return kl_divergence(tilt(f, a), f.p)

    def d_q(a):
        return kl_divergence(tilt(f, a), f.q)

    for a in alphas:
        dDP, dDQ, d2DP, d2DQ = exponent_derivatives(f, a)
        plus = exponent_derivatives(f, a + h)
        minus = exponent_derivatives(f, a - h)
        scale = abs(dDP) + abs(dDQ) + d_p(a) + d_q(a)
        checks = (
            ("dD(Q_a||P)", dDP, (d_p(a + h) - d_p(a - h)) / (2 * h)),
            ("dD(Q_a||Q)", dDQ, (d_q(a + h) - d_q(a - h)) / (2 * h)),
            ("d2D(Q_a||P)", d2DP, (plus[0] - minus[0]) / (2 * h)),
            ("d2D(Q_a||Q)", d2DQ, (plus[1] - minus[1]) / (2 * h)),
        )
        for name, an, fd in checks:
            if not _close(an, fd, scale):
                return f"{name} at alpha={a}: analytic {an!r} vs finite difference {fd!r}"
    return None


GRID_ALPHAS = tuple(np.linspace(0.1, 0.9, 9))


def suite_derivatives(pairs) -> SuiteResult:
    for f in pairs:
        for check in (_z_derivative_checks, _exponent_derivative_checks):
            msg = check(f, GRID_ALPHAS)
            if msg:
                return SuiteResult("derivative identities", False, 0, f"{msg}; P={f.p.probs}, Q={f.q.probs}")
    return SuiteResult("derivative identities", True, len(pairs) * len(GRID_ALPHAS) * 7)


def _random_deltas(rng, f: TiltedFamily, count: int) -> list[float]:
    upper = kl_divergence(f.q, f.p)
    return [float(x) for x in rng.uniform(0.02, 0.98, count) * upper]


def suite_exponent_identity(pairs, rng, per_pair: int = 2) -> SuiteResult:
    checked = 0
    for f in pairs:
        for d in _random_deltas(rng, f, per_pair):
            sol = solve_alpha_star(f, d)
            lhs = kl_divergence(tilt(f, sol.alpha_star), f.q)
            rhs = exponent_from_identity(f, sol)
            back = kl_divergence(tilt(f, sol.alpha_star), f.p)
            checked += 1
            if abs(lhs - rhs) > 1e-9 or abs(back - d) > 1e-10:
                return SuiteResult("exponent representation", False, checked,
                                   f"delta={d}: D(Q_a*||Q)={lhs!r}, identity={rhs!r}, D(Q_a*||P)={back!r}")
    return SuiteResult("exponent representation", True, checked)


def _moments(weights, values):
    mean = float(np.dot(weights, values))
    dev = values - mean
    return float(np.dot(weights, dev**2)), float(np.dot(weights, np.abs(dev) ** 3))


def suite_scaling(pairs, rng) -> SuiteResult:
    """Moments of log q_a*/p and log q_a*/q computed directly versus the scaled
    log p/q moments."""
    checked = 0
    for f in pairs:
        for d in _random_deltas(rng, f, 1):
            sol = solve_alpha_star(f, d)
            qa = tilt(f, sol.alpha_star)
            on = f.p.support
            w = qa.probs[on]
            log_qa = np.log(w)
            v1, t1 = _moments(w, log_qa - f.log_p)
            v2, t2 = _moments(w, log_qa - f.log_q)
            pairs_ = ((v1, sol.tau1**2), (t1, sol.r1), (v2, sol.tau2**2), (t2, sol.r2))
            checked += 1
            for direct, scaled in pairs_:
                if abs(direct - scaled) > 1e-11 * max(1.0, abs(direct)):
                    return SuiteResult("variance/third-moment scaling", False, checked,
                                       f"delta={d}: direct {direct!r} vs scaled {scaled!r}")
    return SuiteResult("variance/third-moment scaling", True, checked)


def be2_exact(values: np.ndarray, weights: np.ndarray, n: int, x: float) -> float:
    """``E[exp(-S) 1{S >= x}]`` by enumerating all ``k^n`` sequences."""
    total = 0.0
    for idx in product(range(values.size), repeat=n):
        s = float(values[list(idx)].sum())
        if s >= x:
            total += math.prod(float(weights[i]) for i in idx) * math.exp(-s)
    return total


def be2_violations(f: TiltedFamily, alpha: float, ns, xs) -> list[tuple]:
    qa = tilt(f, alpha)
    on = f.p.support
    w = qa.probs[on]
    out = []
    for ref in (f.log_p, f.log_q):
        z = np.log(w) - ref
        var, rho = _moments(w, z)
        sigma = math.sqrt(var)
        for n in ns:
            for x in xs:
                lhs = be2_exact(z, w, n, float(x))
                rhs = be2_bound(sigma, rho, n, float(x))
                if lhs > rhs:
                    out.append((n, float(x), lhs, rhs))
    return out


def suite_be2(ns=(4, 8, 12), points: int = 30) -> SuiteResult:
    f = bernoulli_pair()
    sol = solve_alpha_star(f, 0.19443)
    xs = np.linspace(-3.0, 5.0, points)
    bad = be2_violations(f, sol.alpha_star, ns, xs)
    count = 2 * len(ns) * points
    if bad:
        return SuiteResult("BE2 domination", False, count, f"violation (n, x, lhs, rhs) = {bad[0]}")
    return SuiteResult("BE2 domination", True, count)


def achievability_sandwich(f: TiltedFamily, deltas, ns) -> list[tuple]:
    bad = []
    for d in deltas:
        sol = solve_alpha_star(f, d)
        C = achievability_constant(sol)
        for n in ns:
            oracle = E1_star(build_atom_table(f, n), d).log_e1_star
            bound = new_approx_log(n, sol) + C
            if oracle > bound + 1e-9:
                bad.append((d, n, oracle, bound))
    return bad


def suite_achievability() -> SuiteResult:
    f = bernoulli_pair()
    deltas = (0.05, 0.10, 0.15, 0.19443)
    bad = achievability_sandwich(f, deltas, range(1, 101))
    if bad:
        return SuiteResult("achievability sandwich", False, 400, f"(delta, n, log oracle, bound) = {bad[0]}")
    return SuiteResult("achievability sandwich", True, 400)


def converse_sandwich(f: TiltedFamily, delta: float, span: int = 50, max_atoms: int = 2_000_000) -> tuple[list, dict]:
    """Check the lower bound at ``n_min .. n_min + span``.

    Returns the violations and a record of thresholds; ``record['feasible']`` is
    False when the oracle cannot reach ``n_min``.
    """
    sol = solve_alpha_star(f, delta)
    ext = extremal_moments(f)
    cc = converse_constant(sol, ext)
    record = {"delta": delta, "n_min": cc.n_min, "terms": cc.n_min_terms, "C_prime": cc.C_prime, "feasible": True}
    bad = []
    for n in range(cc.n_min, cc.n_min + span + 1):
        try:
            table = build_atom_table(f, n, max_atoms=max_atoms)
        except TooLarge:
            record["feasible"] = False
            return bad, record
        oracle = E1_star(table, delta).log_e1_star
        bound = new_approx_log(n, sol) + cc.C_prime
        if oracle < bound - 1e-9:
            bad.append((n, oracle, bound))
    return bad, record


def suite_converse(deltas=(0.05, 0.10, 0.15, 0.19443), span: int = 50) -> SuiteResult:
    f = bernoulli_pair()
    notes = []
    for d in deltas:
        bad, rec = converse_sandwich(f, d, span)
        if not rec["feasible"]:
            # fall back to the ordering of the two constants
            notes.append(f"delta={d}: n_min={rec['n_min']} infeasible, checked C' <= C instead")
            if rec["C_prime"] > achievability_constant(solve_alpha_star(f, d)):
                return SuiteResult("converse sandwich", False, 0, f"C' > C at delta={d}")
        elif bad:
            return SuiteResult("converse sandwich", False, 0, f"delta={d}: (n, log oracle, bound) = {bad[0]}")
        else:
            notes.append(f"delta={d}: n in [{rec['n_min']}, {rec['n_min'] + span}] ok")
    return SuiteResult("converse sandwich", True, len(deltas) * (span + 1), "; ".join(notes))


STEIN_NS = (10, 20, 50, 100, 200, 500, 1000, 2000)
STEIN_EPS = (0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9)


def stein_violations(f: TiltedFamily, ns=STEIN_NS, epsilons=STEIN_EPS) -> tuple[list, int]:
    bad, checked = [], 0
    for n in ns:
        table = build_atom_table(f, n)
        for eps in epsilons:
            q = BoundQuery(f, n, epsilon=eps)
            lo, hi = stein_converse(q), stein_achievability(q)
            if isinstance(lo, Invalid) or isinstance(hi, Invalid):
                continue
            checked += 1
            val = e1_star(table, eps).log_e1_star
            if not (lo <= val <= hi):
                bad.append((n, eps, lo, val, hi))
    return bad, checked


def suite_stein() -> SuiteResult:
    bad, checked = stein_violations(bernoulli_pair())
    if bad:
        return SuiteResult("Stein-regime bounds", False, checked, f"(n, eps, lower, log oracle, upper) = {bad[0]}")
    return SuiteResult("Stein-regime bounds", True, checked)


def lp_disagreements(rng: np.random.Generator, count: int = 100) -> list[tuple]:
    bad = []
    for i in range(count):
        k = 2 if i % 2 == 0 else 3
        n = 1 + (i // 2) % 2
        f = random_pairs(rng, 1, kmax=k)[0]
        while f.p.k != k:
            f = random_pairs(rng, 1, kmax=k)[0]
        eps = float(rng.uniform())
        a = e1_star(build_atom_table(f, n), eps).e1_star
        b = lp_cross_check(f, n, eps)
        if abs(a - b) > 1e-12:
            bad.append((k, n, eps, a, b))
    return bad


def suite_lp(rng) -> SuiteResult:
    bad = lp_disagreements(rng)
    if bad:
        return SuiteResult("oracle optimality", False, 100, f"(k, n, eps, oracle, cross-check) = {bad[0]}")
    return SuiteResult("oracle optimality", True, 100)


def run_all(seed: int = 0, report: Callable[[SuiteResult], None] | None = None) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    pairs = [bernoulli_pair()] + random_pairs(rng, 24)
    suites = (
        lambda: suite_gaussian(),
        lambda: suite_derivatives(pairs),
        lambda: suite_exponent_identity(pairs, rng),
        lambda: suite_scaling(pairs, rng),
        lambda: suite_be2(),
        lambda: suite_achievability(),
        lambda: suite_converse(),
        lambda: suite_stein(),
        lambda: suite_lp(rng),
    )
    results = []
    for run in suites:
        try:
            res = run()
        except Exception as exc:  # a crash counts as a failed suite
            res = SuiteResult(getattr(run, "__name__", "suite"), False, 0, f"{type(exc).__name__}: {exc}")
        results.append(res)
        if report:
            report(res)
    return results
