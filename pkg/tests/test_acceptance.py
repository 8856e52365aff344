"""Acceptance criteria, one test each; every test records a PASS/FAIL line that
is printed in the terminal summary."""

import math
import time

import numpy as np

from npbounds import (
    BoundQuery,
    E1_star,
    build_atom_table,
    e1_star,
    exponent_derivatives,
    extremal_moments,
    kl_divergence,
    lp_cross_check,
    phi_cdf,
    phi_inv,
    solve_alpha_star,
    stein_achievability,
    stein_converse,
    tilt,
    z_alpha,
    z_alpha_derivatives,
)
from npbounds.bounds import Invalid, achievability_constant, converse_constant, new_approx_log
from npbounds.dist import log_z
from npbounds.report import REFERENCE_EPSILONS, RowContext, compute_row, fmt_published
from npbounds.verify import be2_exact, bernoulli_pair, random_pairs

EXACT_PRINTED = ["0.098", "0.055", "0.029", "0.014", "0.006", "0.003", "0.001"]
HOEFFDING_PRINTED = ["0.804", "0.639", "0.472", "0.324", "0.208", "0.126", "0.071"]
NEW_PRINTED = ["0.083", "0.056", "0.035", "0.019", "0.010", "0.005", "0.002"]
STRASSEN_PRINTED = ["84.2", "18.8", "4.23", "0.096", "0.022", "0.050", "0.011"]
SANDWICH_DELTAS = (0.05, 0.10, 0.15, 0.19443)


def mismatches(name, got, want):
    return [f"{name}[{i + 1}] {g}!={w}" for i, (g, w) in enumerate(zip(got, want)) if g != w]


def test_01_exact_column(record_criterion):
    start = time.perf_counter()
    table = build_atom_table(bernoulli_pair(), 50)
    vals = [e1_star(table, log_epsilon=math.log(eps)).e1_star for eps in REFERENCE_EPSILONS]
    elapsed = time.perf_counter() - start
    got = [f"{v:.3f}" for v in vals]
    bad = mismatches("exact", got, EXACT_PRINTED)
    ok = not bad and elapsed < 1.0
    record_criterion("1 exact column", ok, f"{got} in {elapsed:.3f}s " + " ".join(bad))
    assert not bad, bad
    assert elapsed < 1.0


def test_02_approximation_columns(record_criterion):
    ctx = RowContext(bernoulli_pair())
    rows = [compute_row(ctx, 50, epsilon=eps) for eps in REFERENCE_EPSILONS]
    cols = {name: [fmt_published(name, r.get(name)) for r in rows] for name in ("hoeffding", "new_approx", "strassen")}
    bad = (
        mismatches("hoeffding", cols["hoeffding"], HOEFFDING_PRINTED)
        + mismatches("new", cols["new_approx"], NEW_PRINTED)
        + mismatches("strassen", cols["strassen"], STRASSEN_PRINTED)
    )
    stein = {r.get("stein") for r in rows}
    stein_ok = all(1e-6 / 1.5 <= s <= 1.5e-6 for s in stein)
    if not stein_ok:
        bad.append(f"stein {sorted(stein)}")
    record_criterion("2 approximation columns", not bad, " ".join(bad) or f"stein={stein.pop():.3g}")
    assert not bad, bad


def test_03_achievability_sandwich(record_criterion):
    f = bernoulli_pair()
    start = time.perf_counter()
    worst = math.inf
    for delta in SANDWICH_DELTAS:
        sol = solve_alpha_star(f, delta)
        C = achievability_constant(sol)
        for n in range(1, 101):
            oracle = E1_star(build_atom_table(f, n), delta).log_e1_star
            worst = min(worst, new_approx_log(n, sol) + C - oracle)
    elapsed = time.perf_counter() - start
    ok = worst >= -1e-9 and elapsed < 10.0
    record_criterion("3 achievability sandwich", ok, f"min slack {worst:.4g} in {elapsed:.2f}s")
    assert worst >= -1e-9
    assert elapsed < 10.0


def test_04_converse_sandwich(record_criterion):
    f = bernoulli_pair()
    ext = extremal_moments(f)
    notes, worst = [], math.inf
    for delta in SANDWICH_DELTAS:
        sol = solve_alpha_star(f, delta)
        cc = converse_constant(sol, ext)
        notes.append(f"d={delta}:n_min={cc.n_min}")
        # binary alphabet: n + 1 atoms, always within the oracle's feasibility bound
        for n in range(cc.n_min, cc.n_min + 51):
            oracle = E1_star(build_atom_table(f, n), delta).log_e1_star
            worst = min(worst, oracle - (new_approx_log(n, sol) + cc.C_prime))
    ok = worst >= -1e-9
    record_criterion("4 converse sandwich", ok, f"min slack {worst:.4g}; " + " ".join(notes))
    assert ok


def test_05_derivative_identities(record_criterion, rng):
    pairs = [bernoulli_pair()] + random_pairs(rng, 24)
    h = 1e-5
    alphas = np.linspace(0.1, 0.9, 9)
    worst = 0.0

    def rel(an, fd):
        return abs(an - fd) / abs(an)

    for f in pairs:
        def d_p(a):
            return kl_divergence(tilt(f, a), f.p)

        def d_q(a):
            return kl_divergence(tilt(f, a), f.q)

        for a in alphas:
            z = z_alpha_derivatives(f, a)
            zp, zm = z_alpha_derivatives(f, a + h), z_alpha_derivatives(f, a - h)
            d = exponent_derivatives(f, a)
            dp, dm = exponent_derivatives(f, a + h), exponent_derivatives(f, a - h)
            errs = (
                rel(z[1], (z_alpha(f, a + h) - z_alpha(f, a - h)) / (2 * h)),
                rel(z[2], (zp[1] - zm[1]) / (2 * h)),
                rel(z[3], (zp[2] - zm[2]) / (2 * h)),
                rel(d[0], (d_p(a + h) - d_p(a - h)) / (2 * h)),
                rel(d[1], (d_q(a + h) - d_q(a - h)) / (2 * h)),
                rel(d[2], (dp[0] - dm[0]) / (2 * h)),
                rel(d[3], (dp[1] - dm[1]) / (2 * h)),
            )
            worst = max(worst, *errs)
    ok = bool(worst <= 1e-5)
    record_criterion("5 derivative identities", ok, f"max relative error {worst:.3g} over {len(pairs)} pairs")
    assert ok


def test_06_exponent_identity(record_criterion, rng):
    pairs = random_pairs(rng, 50)
    worst_literal = worst_corrected = 0.0
    for f in pairs:
        delta = float(rng.uniform(0.02, 0.98)) * kl_divergence(f.q, f.p)
        sol = solve_alpha_star(f, delta)
        a, lz = sol.alpha_star, log_z(f, sol.alpha_star)
        lhs = kl_divergence(tilt(f, a), f.q)
        literal = a / (1 - a) * delta - lz / (1 - a)
        corrected = -a / (1 - a) * delta - lz / (1 - a)
        worst_literal = max(worst_literal, abs(lhs - literal))
        worst_corrected = max(worst_corrected, abs(lhs - corrected))
    ok = bool(worst_literal <= 1e-9)
    record_criterion(
        "6 exponent identity",
        ok,
        f"max |D - (a/(1-a))d + log Z/(1-a)| = {worst_literal:.3g}; with -(a/(1-a))d: {worst_corrected:.3g}",
    )
    assert ok


def test_07_be2_domination(record_criterion):
    f = bernoulli_pair()
    sol = solve_alpha_star(f, 0.19443)
    qa = tilt(f, sol.alpha_star)
    w = qa.probs
    xs = np.linspace(-3.0, 5.0, 30)
    violations, checked = [], 0
    for ref in (f.log_p, f.log_q):
        z = np.log(w) - ref
        mean = float(w @ z)
        sigma = math.sqrt(float(w @ (z - mean) ** 2))
        rho = float(w @ np.abs(z - mean) ** 3)
        for n in (4, 8, 12):
            for x in xs:
                checked += 1
                lhs = be2_exact(z, w, n, float(x))
                rhs = (1 / math.sqrt(2 * math.pi) + rho / sigma**2) * math.exp(-x) / (math.sqrt(n) * sigma)
                if lhs > rhs:
                    violations.append((n, float(x), lhs, rhs))
    record_criterion("7 BE2 domination", not violations, f"{len(violations)} violations in {checked} checks")
    assert not violations


def test_08_stein_bounds(record_criterion):
    f = bernoulli_pair()
    violations, checked = [], 0
    for n in (10, 20, 50, 100, 200, 500, 1000, 2000):
        table = build_atom_table(f, n)
        for eps in (0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9):
            q = BoundQuery(f, n, epsilon=eps)
            lo, hi = stein_converse(q), stein_achievability(q)
            if isinstance(lo, Invalid) or isinstance(hi, Invalid):
                continue
            checked += 1
            val = e1_star(table, eps).log_e1_star
            if not lo <= val <= hi:
                violations.append((n, eps, lo, val, hi))
    ok = not violations and checked > 0
    record_criterion("8 Stein-regime bounds", ok, f"{len(violations)} violations in {checked} valid points")
    assert ok


def test_09_oracle_optimality(record_criterion, rng):
    worst, count = 0.0, 0
    for i in range(100):
        k, n = 2 + i % 2, 1 + (i // 2) % 2
        f = random_pairs(rng, 1, kmax=k)[0]
        while f.p.k != k:
            f = random_pairs(rng, 1, kmax=k)[0]
        eps = float(rng.uniform())
        worst = max(worst, abs(e1_star(build_atom_table(f, n), eps).e1_star - lp_cross_check(f, n, eps)))
        count += 1
    ok = bool(worst <= 1e-12)
    record_criterion("9 oracle optimality", ok, f"max |oracle - LP| = {worst:.3g} over {count} instances")
    assert ok


def test_10_gaussian_contract(record_criterion):
    half = np.logspace(-10, math.log10(0.5), 500)
    us = np.concatenate([half, 1.0 - half[::-1]])
    worst = max(abs(phi_cdf(phi_inv(float(u))) - u) for u in us)
    ok = bool(worst <= 1e-11)
    record_criterion("10 gaussian contract", ok, f"max |Phi(Phi^-1(u)) - u| = {worst:.3g} on {us.size} points")
    assert ok
