import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from npbounds import (
    FiniteDistribution,
    SupportMismatch,
    TiltedFamily,
    chernoff_information,
    hellinger_sq,
    kl_divergence,
    llr_moments,
    tilt,
    z_alpha,
    z_alpha_derivatives,
)
from npbounds.dist import log_z

# 40-digit mpmath evaluations of the two-term closed forms
KL_PQ = 0.2738377786433903062796
KL_QP = 0.2525893102283056194010
VAR_P = 0.5429397157183904136782
Z_HALF = 0.9350208921259078019749
TILT_HALF = 0.4142135623730950488017
CHERNOFF = 0.06721494009027796828359

GRID = np.linspace(0.0, 1.0, 257)


def bern(p):
    return FiniteDistribution.bernoulli(p)


@st.composite
def pairs(draw, kmax=5):
    k = draw(st.integers(2, kmax))
    raw_p = draw(st.lists(st.floats(0.05, 1.0), min_size=k, max_size=k))
    raw_q = draw(st.lists(st.floats(0.05, 1.0), min_size=k, max_size=k))
    p = np.array(raw_p) / sum(raw_p)
    q = np.array(raw_q) / sum(raw_q)
    return TiltedFamily.from_probs(p, q)


class TestFiniteDistribution:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            FiniteDistribution(np.array([0.5, 0.6]))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            FiniteDistribution(np.array([1.5, -0.5]))

    def test_immutable(self):
        d = bern(0.3)
        with pytest.raises(ValueError):
            d.probs[0] = 0.5

    def test_bernoulli_layout(self):
        assert bern(0.6).probs.tolist() == [0.4, 0.6]


class TestKL:
    def test_identical(self):
        assert kl_divergence(bern(0.6), bern(0.6)) == 0.0

    def test_values(self):
        assert kl_divergence(bern(0.6), bern(0.25)) == pytest.approx(KL_PQ, abs=1e-15)
        assert kl_divergence(bern(0.25), bern(0.6)) == pytest.approx(KL_QP, abs=1e-15)

    def test_support_mismatch(self):
        with pytest.raises(SupportMismatch):
            kl_divergence(bern(0.5), bern(0.0))

    def test_zero_mass_terms_vanish(self):
        a = FiniteDistribution(np.array([0.0, 1.0]))
        assert kl_divergence(a, bern(0.5)) == pytest.approx(math.log(2.0))


class TestLLRMoments:
    def test_identical_pair(self):
        b = bern(0.5)
        m = llr_moments(b, b, b)
        assert (m.mean, m.variance, m.abs_third_central) == (0.0, 0.0, 0.0)
        assert m.degenerate and m.be_constant is None

    def test_bernoulli_under_p(self):
        m = llr_moments(bern(0.6), bern(0.6), bern(0.25))
        assert m.mean == pytest.approx(KL_PQ, abs=1e-15)
        assert m.variance == pytest.approx(VAR_P, abs=1e-15)
        assert m.be_constant == pytest.approx(m.abs_third_central / (2 * m.variance**1.5))

    def test_swap_negates_mean(self):
        ref = bern(0.4)
        a = llr_moments(ref, bern(0.6), bern(0.25))
        b = llr_moments(ref, bern(0.25), bern(0.6))
        assert b.mean == pytest.approx(-a.mean, abs=1e-15)
        assert b.variance == pytest.approx(a.variance, rel=1e-14)

    @given(pairs())
    def test_jensen(self, f):
        m = llr_moments(f.p, f.p, f.q)
        assert m.abs_third_central >= m.variance**1.5 * (1 - 1e-12)


class TestZAlpha:
    def test_endpoints(self, bern_pair):
        assert z_alpha(bern_pair, 0.0) == 1.0
        assert z_alpha(bern_pair, 1.0) == 1.0

    def test_half(self, bern_pair):
        assert z_alpha(bern_pair, 0.5) == pytest.approx(Z_HALF, abs=1e-15)

    def test_derivatives_degenerate(self):
        f = TiltedFamily.from_probs([0.3, 0.7], [0.3, 0.7])
        assert z_alpha_derivatives(f, 0.4) == pytest.approx((1.0, 0.0, 0.0, 0.0))

    def test_derivative_central_difference(self, bern_pair):
        h, a = 1e-5, 0.3
        fd = (z_alpha(bern_pair, a + h) - z_alpha(bern_pair, a - h)) / (2 * h)
        assert abs(z_alpha_derivatives(bern_pair, a)[1] - fd) <= 1e-6

    def test_grid_finite_differences(self, bern_pair):
        h = 1e-5
        for a in np.linspace(0.05, 0.95, 19):
            z, z1, z2, z3 = z_alpha_derivatives(bern_pair, a)
            up, dn = z_alpha_derivatives(bern_pair, a + h), z_alpha_derivatives(bern_pair, a - h)
            assert (z_alpha(bern_pair, a + h) - z_alpha(bern_pair, a - h)) / (2 * h) == pytest.approx(z1, rel=1e-6)
            assert (up[1] - dn[1]) / (2 * h) == pytest.approx(z2, rel=1e-6)
            assert (up[2] - dn[2]) / (2 * h) == pytest.approx(z3, rel=1e-6)

    @given(pairs(), st.floats(0.01, 0.99))
    def test_cauchy_schwarz(self, f, a):
        z, z1, z2, _ = z_alpha_derivatives(f, a)
        assert z2 >= 0
        assert z2 * z >= z1 * z1 * (1 - 1e-12)

    @settings(max_examples=50)
    @given(pairs())
    def test_range_and_log_convexity(self, f):
        lz = np.array([log_z(f, a) for a in GRID])
        assert np.all(np.exp(lz) <= 1 + 1e-12) and np.all(np.exp(lz) > 0)
        # midpoint convexity on the grid
        assert np.all(lz[1:-1] <= 0.5 * (lz[:-2] + lz[2:]) + 1e-12)


class TestTilt:
    def test_endpoints_verbatim(self, bern_pair):
        assert tilt(bern_pair, 1.0) is bern_pair.p
        assert tilt(bern_pair, 0.0) is bern_pair.q

    def test_half(self, bern_pair):
        assert tilt(bern_pair, 0.5).probs[1] == pytest.approx(TILT_HALF, abs=1e-15)

    @settings(max_examples=30)
    @given(pairs())
    def test_normalized_and_absolutely_continuous(self, f):
        for a in GRID:
            t = tilt(f, a)
            assert abs(t.probs.sum() - 1.0) <= 1e-12
            assert math.isfinite(kl_divergence(t, f.p))
            assert math.isfinite(kl_divergence(t, f.q))

    def test_rejects_mismatched_support(self):
        with pytest.raises(SupportMismatch):
            TiltedFamily.from_probs([0.5, 0.5, 0.0], [0.4, 0.4, 0.2])

    def test_shared_zero_is_dropped(self):
        f = TiltedFamily.from_probs([0.5, 0.0, 0.5], [0.2, 0.0, 0.8])
        assert f.per_symbol_llr.size == 2
        assert tilt(f, 0.5).probs[1] == 0.0


class TestChernoffHellinger:
    def test_identical(self):
        f = TiltedFamily.from_probs([0.3, 0.7], [0.3, 0.7])
        assert chernoff_information(f) == 0.0
        assert hellinger_sq(f.p, f.q) == 0.0

    def test_disjoint_hellinger(self):
        assert hellinger_sq(bern(0.0), bern(1.0)) == 1.0

    def test_bernoulli_values(self, bern_pair):
        assert chernoff_information(bern_pair) == pytest.approx(CHERNOFF, abs=1e-10)
        assert hellinger_sq(bern_pair.p, bern_pair.q) == pytest.approx(1 - Z_HALF, abs=1e-15)

    def test_grid_oracle(self, bern_pair):
        dense = min(log_z(bern_pair, a) for a in np.linspace(0, 1, 100001))
        assert chernoff_information(bern_pair) >= -dense - 1e-12
        assert chernoff_information(bern_pair) == pytest.approx(-dense, abs=1e-9)

    @given(pairs())
    def test_dominates_half_point(self, f):
        assert chernoff_information(f) >= -log_z(f, 0.5) - 1e-14
