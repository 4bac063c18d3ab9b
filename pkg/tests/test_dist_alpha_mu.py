"""Tests for the alpha-mu distribution and weighted-sum machinery.

Frozen constants come from 40-digit arbitrary-precision evaluations of the
closed forms, from brute-force coefficient sums, and from direct numeric
convolution of component densities, so the recursion and series code are
checked against independent routes.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from star_thz_perf.dist_alpha_mu import (
    AlphaMuParams,
    alpha_mu_cdf,
    alpha_mu_moment,
    alpha_mu_pdf,
    alpha_mu_sample,
    build_delta_series,
    exact_sum_cdf,
    exact_sum_cdf_batch,
    exact_sum_pdf,
    fit_alpha_mu_approx,
    truncation_error,
)
from star_thz_perf.errors import ConfigurationError, DomainError, NumericalError

# alpha=0.5, mu=1.5 with unit alpha-root mean; beta = Gamma(3.5)/Gamma(1.5) = 15/4
BASE = AlphaMuParams(alpha=0.5, mu=1.5, omega=3.75 / 1.5**2)
RAYLEIGH = AlphaMuParams(alpha=2.0, mu=1.0, omega=0.88622692545275801365)  # x_hat = 1

# weight sets exercised throughout: one per summand count
WEIGHT_SETS = {
    2: (1.0, 0.7),
    3: (1.0, 0.7, 2.5),
    4: (1.0, 0.7, 2.5, 1.4),
    5: (1.0, 0.7, 2.5, 1.4, 0.8),
}


class TestParams:
    def test_beta_and_x_hat(self):
        assert BASE.beta == pytest.approx(3.75, rel=1e-12)
        assert BASE.x_hat == pytest.approx(1.0, rel=1e-12)
        assert RAYLEIGH.x_hat == pytest.approx(1.0, rel=1e-12)

    def test_rejects_nonpositive_fields(self):
        for bad in (dict(alpha=0), dict(mu=-1), dict(omega=0)):
            kw = dict(alpha=1.0, mu=1.0, omega=1.0)
            kw.update(bad)
            with pytest.raises(ConfigurationError):
                AlphaMuParams(**kw)


class TestSingleEnvelope:
    def test_pdf_rayleigh_reduction(self):
        for x in (0.3, 1.0, 2.2):
            assert alpha_mu_pdf(RAYLEIGH, x) == pytest.approx(2 * x * math.exp(-(x**2)), rel=1e-12)

    def test_pdf_oracle(self):
        assert alpha_mu_pdf(BASE, 1.0) == pytest.approx(0.23127049470565391522, rel=1e-12)

    def test_pdf_vanishes_at_origin_when_shape_allows(self):
        # alpha*mu = 4 > 1 so the power-law prefactor wins
        p = AlphaMuParams(alpha=2.0, mu=2.0, omega=1.0)
        assert alpha_mu_pdf(p, 1e-12) < 1e-20

    def test_pdf_rejects_nonpositive_x(self):
        with pytest.raises(DomainError):
            alpha_mu_pdf(BASE, 0.0)

    def test_cdf_oracle_and_edges(self):
        assert alpha_mu_cdf(BASE, 0.0) == 0.0
        assert alpha_mu_cdf(BASE, 2.0) == pytest.approx(0.76357273256886426061, rel=1e-12)
        for x in (0.5, 1.5, 3.0):
            assert alpha_mu_cdf(RAYLEIGH, x) == pytest.approx(1 - math.exp(-(x**2)), rel=1e-12)

    def test_cdf_nondecreasing(self):
        xs = np.sort(np.random.default_rng(7).uniform(0, 20, 200))
        vals = alpha_mu_cdf(BASE, xs)
        assert np.all(np.diff(vals) >= 0)

    def test_moment_first_is_omega(self):
        for p in (BASE, RAYLEIGH, AlphaMuParams(3.1, 0.7, 2.4)):
            assert alpha_mu_moment(p, 1) == pytest.approx(p.omega, rel=1e-10)

    def test_moment_oracles(self):
        assert alpha_mu_moment(AlphaMuParams(2.0, 1.0, 1.0), 2) == pytest.approx(4 / math.pi, rel=1e-12)
        assert alpha_mu_moment(BASE, 4) == pytest.approx(5252.1604938271604938, rel=1e-12)

    def test_sampling_reproducible_and_unbiased(self):
        draws = alpha_mu_sample(BASE, np.random.default_rng(42), size=10**6)
        again = alpha_mu_sample(BASE, np.random.default_rng(42), size=10**6)
        assert np.array_equal(draws, again)
        se = draws.std() / len(draws) ** 0.5
        assert abs(draws.mean() - BASE.omega) < 3 * se

    def test_sampling_rayleigh_reduction(self):
        draws = alpha_mu_sample(RAYLEIGH, np.random.default_rng(3), size=200_000)
        # Rayleigh with sigma^2 = 1/2: P(X <= x) = 1 - exp(-x^2)
        for q in (0.25, 0.5, 0.9):
            expected = math.sqrt(-math.log(1 - q))
            assert np.quantile(draws, q) == pytest.approx(expected, rel=5e-3)


class TestDeltaRecursion:
    def test_single_summand_is_b_column(self):
        s = build_delta_series([1.0], BASE, n_terms=12)
        alpha, mu = BASE.alpha, BASE.mu
        for n, d in enumerate(s.delta):
            b = (-1) ** n * math.gamma(alpha * (n + mu)) * mu**n / math.factorial(n)
            assert d == pytest.approx(b, rel=1e-10)

    def test_two_summand_leading_coefficient(self):
        s = build_delta_series([1.0, 0.7], BASE, n_terms=4)
        alpha, mu = BASE.alpha, BASE.mu
        b0 = lambda a: math.gamma(alpha * mu) / a ** (alpha * mu)
        assert s.delta[0] == pytest.approx(b0(1.0) * b0(0.7), rel=1e-10)
        assert s.delta[0] > 0

    def test_three_summand_fifth_coefficient_matches_brute_force(self):
        s = build_delta_series(WEIGHT_SETS[3], BASE, n_terms=8)
        assert s.delta[5] == pytest.approx(-8.697187607816595216, rel=1e-10)

    def test_sign_alternation(self):
        s = build_delta_series(WEIGHT_SETS[4], BASE, n_terms=20)
        signs = np.sign(s.delta)
        assert np.array_equal(signs, (-1.0) ** np.arange(21))

    def test_rejects_bad_inputs(self):
        with pytest.raises(ConfigurationError):
            build_delta_series([], BASE, 10)
        with pytest.raises(ConfigurationError):
            build_delta_series([1.0, -2.0], BASE, 10)
        with pytest.raises(ConfigurationError):
            build_delta_series([1.0], BASE, 513)


class TestExactSumSeries:
    def test_degenerate_sum_matches_single_pdf(self):
        s = build_delta_series([1.0], BASE, n_terms=60)
        for x in np.linspace(0.25, 5.0, 12):
            assert exact_sum_pdf(s, x) == pytest.approx(alpha_mu_pdf(BASE, x), rel=1e-10)

    def test_three_summand_pdf_matches_convolution_oracle(self):
        s = build_delta_series(WEIGHT_SETS[3], BASE, n_terms=40)
        assert exact_sum_pdf(s, 2.0) == pytest.approx(0.133538891609, rel=1e-6)

    def test_cdf_edges_and_quadrature_consistency(self):
        s = build_delta_series(WEIGHT_SETS[2], BASE, n_terms=40)
        assert exact_sum_cdf(s, 0.0) == 0.0
        quad, _ = integrate.quad(lambda t: exact_sum_pdf(s, t), 0, 2.0, limit=100)
        assert exact_sum_cdf(s, 2.0) == pytest.approx(quad, rel=1e-8)

    def test_pdf_rejects_nonpositive_x(self):
        s = build_delta_series([1.0], BASE, n_terms=10)
        with pytest.raises(DomainError):
            exact_sum_pdf(s, -1.0)

    def test_normalization(self):
        # integral over the support equals the CDF there, and the CDF has
        # already absorbed essentially all mass
        for m, hi, n_terms in ((2, 250.0, 170), (3, 600.0, 280)):
            s = build_delta_series(WEIGHT_SETS[m], BASE, n_terms=n_terms)
            quad, _ = integrate.quad(
                lambda t: exact_sum_pdf(s, t), 0, hi, limit=250, epsabs=1e-10
            )
            assert exact_sum_cdf(s, hi) > 1 - 1e-7
            assert quad == pytest.approx(1.0, abs=1e-6)

    def test_cdf_derivative_matches_pdf(self):
        s = build_delta_series(WEIGHT_SETS[3], BASE, n_terms=80)
        h = 1e-5
        for x in (1.0, 3.0, 7.5):
            num = (exact_sum_cdf(s, x + h) - exact_sum_cdf(s, x - h)) / (2 * h)
            assert num == pytest.approx(exact_sum_pdf(s, x), rel=1e-4)

    def test_equal_weight_sum_matches_self_convolution(self):
        # with equal weights the series must agree with the two-fold
        # convolution of the scaled single-envelope law
        w = 0.8
        s = build_delta_series([w, w], BASE, n_terms=60)

        def conv_cdf(x):
            val, _ = integrate.quad(
                lambda y: alpha_mu_pdf(BASE, y / w) / w * alpha_mu_cdf(BASE, (x - y) / w),
                0, x, limit=200,
            )
            return val

        for x in (1.0, 2.5, 5.0):
            assert exact_sum_cdf(s, x) == pytest.approx(conv_cdf(x), rel=1e-6)


class TestTruncationError:
    # frozen reference magnitudes for the 30-term tail at x = 2
    REFERENCE = {
        (2, "pdf"): 1.5786e-17, (2, "cdf"): 1.9189e-18,
        (3, "pdf"): 6.3065e-17, (3, "cdf"): 7.3328e-18,
        (4, "pdf"): 1.1035e-15, (4, "cdf"): 1.2298e-16,
        (5, "pdf"): 8.2042e-14, (5, "cdf"): 8.7799e-15,
    }

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    @pytest.mark.parametrize("kind", ["pdf", "cdf"])
    def test_reference_magnitudes(self, m, kind):
        s = build_delta_series(WEIGHT_SETS[m], BASE, n_terms=30)
        err = truncation_error(s, 2.0, kind)
        assert err <= 1e-12
        ref = self.REFERENCE[(m, kind)]
        assert 0.9 * ref <= err <= 1.1 * ref

    def test_deep_tail_underflows_to_zero(self):
        s = build_delta_series(WEIGHT_SETS[2], BASE, n_terms=200)
        assert truncation_error(s, 0.5, "pdf") == 0.0

    def test_rejects_unknown_kind(self):
        s = build_delta_series([1.0], BASE, n_terms=10)
        with pytest.raises(ConfigurationError):
            truncation_error(s, 1.0, "quantile")


class TestTruncationGuard:
    """Evaluations past the convergent range must not return silently
    clamped garbage: provably saturated points resolve to exactly one,
    everything else reports the shortfall."""

    WEIGHTS = (2.2e-5, 1.5e-5, 1.0e-5)
    SCALE = sum(WEIGHTS)
    MEAN_ONE = AlphaMuParams(2.0, 1.0, 1.0)

    def test_unconverged_midrange_raises(self):
        s = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=60)
        with pytest.raises(NumericalError) as err:
            exact_sum_cdf(s, 1.10 * self.SCALE)
        bound = err.value.diagnostics["tail_probability_bound"]
        assert 0.0 < bound <= 1.0
        with pytest.raises(NumericalError):
            exact_sum_pdf(s, 1.10 * self.SCALE)

    def test_more_terms_recover_the_same_point(self):
        a = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=120)
        b = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=200)
        x = 1.10 * self.SCALE
        va, vb = exact_sum_cdf(a, x), exact_sum_cdf(b, x)
        assert 0.0 < va < 1.0
        assert va == pytest.approx(vb, rel=1e-10)

    def test_provably_saturated_point_is_one(self):
        s = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=60)
        assert exact_sum_cdf(s, 50.0 * self.SCALE) == 1.0

    def test_looser_tail_tolerance_extends_saturation(self):
        s = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=60)
        x = 2.45 * self.SCALE
        with pytest.raises(NumericalError):
            exact_sum_cdf(s, x)
        assert exact_sum_cdf(s, x, tail_tol=1e-3) == 1.0

    def test_tail_tolerance_validated(self):
        s = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=60)
        for bad in (0.0, 1.0, -1e-3):
            with pytest.raises(ConfigurationError):
                exact_sum_cdf(s, 1.0, tail_tol=bad)


class TestBatchCdf:
    """The grid evaluator must be pointwise indistinguishable from the
    scalar path, including its saturation and failure behaviour."""

    WEIGHTS = (2.2e-5, 1.5e-5, 1.0e-5)
    SCALE = sum(WEIGHTS)
    MEAN_ONE = AlphaMuParams(2.0, 1.0, 1.0)

    def test_matches_scalar_on_mixed_grid(self):
        s = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=200)
        grid = np.array([0.0, 0.1, 0.3, 0.8, 1.1, 1.6, 1.73]) * self.SCALE
        batch = exact_sum_cdf_batch(s, grid)
        scalar = np.array([exact_sum_cdf(s, float(v)) for v in grid])
        np.testing.assert_allclose(batch, scalar, atol=1e-9)
        assert batch[0] == 0.0

    def test_matches_scalar_for_heavy_tailed_base(self):
        s = build_delta_series((1.0, 0.7, 2.5), AlphaMuParams(0.5, 1.5, 1.0),
                               n_terms=280)
        grid = np.geomspace(0.05, 60.0, 50)
        batch = exact_sum_cdf_batch(s, grid)
        scalar = np.array([exact_sum_cdf(s, float(v)) for v in grid])
        np.testing.assert_allclose(batch, scalar, atol=1e-9)

    def test_propagates_saturation_and_failure(self):
        s = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=60)
        assert exact_sum_cdf_batch(s, [50.0 * self.SCALE]) == [1.0]
        with pytest.raises(NumericalError):
            exact_sum_cdf_batch(s, [0.5 * self.SCALE, 2.45 * self.SCALE])

    def test_preserves_shape(self):
        s = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=60)
        grid = np.array([[0.0, 0.2], [0.5, 0.8]]) * self.SCALE
        out = exact_sum_cdf_batch(s, grid)
        assert out.shape == grid.shape
        assert np.all(np.diff(out.ravel()) > 0.0)

    def test_validates_inputs(self):
        s = build_delta_series(self.WEIGHTS, self.MEAN_ONE, n_terms=60)
        with pytest.raises(DomainError):
            exact_sum_cdf_batch(s, [-1.0])
        with pytest.raises(DomainError):
            exact_sum_cdf_batch(s, [np.nan])
        with pytest.raises(ConfigurationError):
            exact_sum_cdf_batch(s, [1.0], abs_tol=0.0)


class TestMomentFit:
    def test_single_summand_identity(self):
        fit = fit_alpha_mu_approx([2.0], BASE)
        assert fit.alpha_star == pytest.approx(BASE.alpha, rel=1e-8)
        assert fit.mu_star == pytest.approx(BASE.mu, rel=1e-8)
        assert fit.omega_star == pytest.approx(2.0 * BASE.omega, rel=1e-8)

    @pytest.mark.parametrize("m", [2, 5])
    def test_fitted_moments_match_targets(self, m):
        weights = WEIGHT_SETS[m]
        fit = fit_alpha_mu_approx(weights, BASE)
        p = fit.as_params()
        # recompute targets by drawing the moments from the summand law
        singles = [alpha_mu_moment(BASE, k) for k in (1, 2)]
        mean = sum(weights) * singles[0]
        var_one = singles[1] - singles[0] ** 2
        second = mean**2 + sum(w**2 for w in weights) * var_one
        assert alpha_mu_moment(p, 1) == pytest.approx(mean, rel=1e-8)
        assert alpha_mu_moment(p, 2) == pytest.approx(second, rel=1e-8)

    def test_fit_tracks_exact_cdf_in_bulk(self):
        weights = WEIGHT_SETS[3]
        s = build_delta_series(weights, BASE, n_terms=120)
        fit = fit_alpha_mu_approx(weights, BASE)
        grid = np.linspace(0.5, 30.0, 30)
        dev = max(
            abs(exact_sum_cdf(s, x) - alpha_mu_cdf(fit.as_params(), x)) for x in grid
        )
        assert dev <= 0.01
