import math

import numpy as np
import pytest
import scipy.integrate

from kinetic_lna import (
    InitialStatePrior,
    NumericalError,
    PosteriorTarget,
    PriorEntry,
    PriorSpec,
    SampleChain,
    TuningConfig,
    TuningWarning,
    ess,
    log_accept_ratio,
    log_prior,
    make_rng,
    rwm_chain,
    summarize,
    tune_proposal,
)


def standard_normal(phi):
    return -0.5 * float(np.dot(phi, phi))


def grid_chain(n=1001, names=("k",)):
    draws = (np.arange(n) / (n - 1)).reshape(-1, 1)
    return SampleChain(draws, np.zeros(n), np.ones(n, dtype=bool), np.eye(1), names=names)


def ar1_series(phi, n, seed):
    rng = make_rng(seed)
    noise = rng.standard_normal(n)
    x = np.empty(n)
    x[0] = noise[0] / math.sqrt(1 - phi**2)
    for i in range(1, n):
        x[i] = phi * x[i - 1] + noise[i]
    return x


class TestPriors:
    def test_gamma_density(self):
        entry = PriorEntry.gamma(2.0, 10.0)
        assert entry.logpdf(0.1) == pytest.approx(math.log(10.0) - 1.0)

    def test_halfcauchy_density(self):
        entry = PriorEntry.halfcauchy(100.0)
        assert entry.logpdf(0.01) == pytest.approx(math.log(100.0 / math.pi))

    @pytest.mark.parametrize("value", [0.0, -1.0, math.inf, math.nan])
    def test_outside_support(self, value):
        assert PriorEntry.gamma(2.0, 10.0).logpdf(value) == -math.inf

    @pytest.mark.parametrize("args", [(0.0, 1.0), (2.0, 0.0), (2.0, -1.0), (math.inf, 1.0)])
    def test_invalid_gamma(self, args):
        with pytest.raises(ValueError):
            PriorEntry.gamma(*args)

    def test_invalid_halfcauchy(self):
        with pytest.raises(ValueError):
            PriorEntry.halfcauchy(-1.0)

    def test_jacobian_term(self):
        prior = PriorSpec.uniform_family(["a", "b"], PriorEntry.gamma(2.0, 10.0))
        theta = [0.1, 0.3]
        gap = log_prior(prior, theta, jacobian=True) - log_prior(prior, theta, jacobian=False)
        assert gap == pytest.approx(math.log(0.1) + math.log(0.3) + 2 * math.log(math.log(10.0)))

    def test_wrong_length(self):
        prior = PriorSpec.uniform_family(["a"], PriorEntry.halfcauchy(1.0))
        with pytest.raises(ValueError):
            log_prior(prior, [1.0, 2.0])

    def test_spec_needs_one_entry_per_name(self):
        with pytest.raises(ValueError):
            PriorSpec(("a", "b"), (PriorEntry.halfcauchy(1.0),))

    @pytest.mark.parametrize("entry", [PriorEntry.gamma(2.0, 10.0), PriorEntry.halfcauchy(100.0)])
    def test_log10_density_integrates_to_one(self, entry):
        target = PosteriorTarget(lambda theta: 0.0, PriorSpec(("k",), (entry,)))
        total, _ = scipy.integrate.quad(lambda phi: math.exp(target(np.array([phi]))), -12.0, 10.0, limit=200)
        assert total == pytest.approx(1.0, abs=1e-6)


class TestPosteriorTarget:
    def test_adds_likelihood(self):
        prior = PriorSpec.uniform_family(["k"], PriorEntry.gamma(2.0, 10.0))
        target = PosteriorTarget(lambda theta: -float(theta[0]), prior, jacobian=False)
        assert target(np.array([-1.0])) == pytest.approx(log_prior(prior, [0.1], False) - 0.1)

    def test_skips_likelihood_outside_prior_support(self):
        prior = PriorSpec.uniform_family(["k"], PriorEntry.gamma(2.0, 10.0))

        def loglik(theta):
            raise AssertionError("likelihood evaluated")

        with np.errstate(over="ignore"):
            assert PosteriorTarget(loglik, prior)(np.array([400.0])) == -math.inf


class TestInitialStatePrior:
    def prior(self):
        return InitialStatePrior.from_moments(("pred", "prey"), [40.0, 140.0], np.diag([0.0, 100.0]))

    def test_free_components(self):
        prior = self.prior()
        assert prior.free == (1,)
        assert prior.names == ("prey",)
        assert len(prior) == 1
        np.testing.assert_array_equal(prior.scale, [10.0])
        np.testing.assert_array_equal(prior.complete([133.0]), [40.0, 133.0])

    def test_density(self):
        prior = self.prior()
        expected = -0.5 * math.log(2 * math.pi * 100.0) - 0.5 * (150.0 - 140.0) ** 2 / 100.0
        assert prior.logpdf([150.0]) == pytest.approx(expected)

    @pytest.mark.parametrize("value", [-0.5, math.nan, math.inf])
    def test_outside_support(self, value):
        assert self.prior().logpdf([value]) == -math.inf

    def test_point_mass_has_no_free_components(self):
        prior = InitialStatePrior.from_moments(("I", "S"), [1.0, 118.0], np.zeros((2, 2)))
        assert len(prior) == 0

    def test_shape_checks(self):
        with pytest.raises(ValueError):
            InitialStatePrior.from_moments(("a",), [1.0, 2.0], np.eye(2))
        with pytest.raises(ValueError):
            self.prior().logpdf([1.0, 2.0])


class TestPosteriorTargetWithInitialState:
    def test_likelihood_sees_full_initial_state(self):
        prior = PriorSpec.uniform_family(["k"], PriorEntry.gamma(2.0, 10.0))
        initial = InitialStatePrior.from_moments(("pred", "prey"), [40.0, 140.0], np.diag([0.0, 100.0]))
        seen = []

        def loglik(theta, x0):
            seen.append((float(theta[0]), x0.copy()))
            return -1.0

        target = PosteriorTarget(loglik, prior, jacobian=False, initial=initial)
        assert target.dim == 2
        value = target(np.array([-1.0, 150.0]))
        assert value == pytest.approx(log_prior(prior, [0.1], False) + initial.logpdf([150.0]) - 1.0)
        assert seen[0][0] == pytest.approx(0.1)
        np.testing.assert_array_equal(seen[0][1], [40.0, 150.0])

    def test_negative_initial_state_skips_likelihood(self):
        prior = PriorSpec.uniform_family(["k"], PriorEntry.gamma(2.0, 10.0))
        initial = InitialStatePrior.from_moments(("x",), [5.0], np.eye(1))

        def loglik(theta, x0):
            raise AssertionError("likelihood evaluated")

        assert PosteriorTarget(loglik, prior, initial=initial)(np.array([-1.0, -2.0])) == -math.inf

    def test_coordinate_count(self):
        prior = PriorSpec.uniform_family(["k"], PriorEntry.gamma(2.0, 10.0))
        with pytest.raises(ValueError):
            PosteriorTarget(lambda theta: 0.0, prior)(np.array([-1.0, 3.0]))


class TestRandomWalkMetropolis:
    def test_flat_target_accepts_everything(self):
        chain = rwm_chain(lambda phi: 0.0, [0.0, 0.0], np.eye(2), 500, seed=1)
        assert chain.accept_count == 500
        assert chain.acceptance_rate() == 1.0

    def test_deterministic_per_seed(self):
        a = rwm_chain(standard_normal, [0.0], [[5.76]], 300, seed=4)
        b = rwm_chain(standard_normal, [0.0], [[5.76]], 300, seed=4)
        np.testing.assert_array_equal(a.draws, b.draws)
        np.testing.assert_array_equal(a.logpost, b.logpost)

    def test_rejected_moves_repeat_the_state(self):
        chain = rwm_chain(standard_normal, [0.0], [[100.0]], 500, seed=2)
        rejected = np.flatnonzero(~chain.accepted[1:]) + 1
        assert rejected.size > 0
        for k in rejected:
            assert chain.draws[k, 0] == chain.draws[k - 1, 0]
            assert chain.logpost[k] == chain.logpost[k - 1]

    def test_numerical_failures_are_rejected_and_counted(self):
        def target(phi):
            if phi[0] > 0:
                raise NumericalError("integration failed")
            return 0.0

        chain = rwm_chain(target, [-1.0], [[1.0]], 400, seed=3)
        assert chain.failures > 0
        assert np.all(chain.draws <= 0)
        assert chain.failure_rate == chain.failures / 400

    def test_nan_counts_as_failure(self):
        chain = rwm_chain(lambda phi: math.nan if phi[0] > 0 else 0.0, [-1.0], [[1.0]], 200, seed=3)
        assert chain.failures > 0
        assert np.all(chain.draws <= 0)

    def test_start_must_be_finite(self):
        with pytest.raises(NumericalError):
            rwm_chain(lambda phi: -math.inf, [0.0], [[1.0]], 10, seed=0)

    def test_names_are_kept(self):
        chain = rwm_chain(standard_normal, [0.0], [[1.0]], 5, seed=0, names=("k",))
        assert chain.names == ("k",)
        assert chain.draws.shape == (5, 1)

    def test_accept_ratio(self):
        assert log_accept_ratio(-1.0, -3.0) == -log_accept_ratio(-3.0, -1.0)
        assert log_accept_ratio(0.0, -math.inf) == -math.inf


class TestTuning:
    def test_standard_normal_reaches_bracket(self):
        cov = tune_proposal(standard_normal, [0.0], seed=5, config=TuningConfig(pilot_iters=4000))
        sd = math.sqrt(cov[0, 0])
        assert 3.0 <= sd <= 6.5
        chain = rwm_chain(standard_normal, [0.0], cov, 20_000, seed=6)
        assert 0.2 <= chain.acceptance_rate() <= 0.35

    def test_flat_target_warns(self):
        with pytest.warns(TuningWarning):
            cov = tune_proposal(lambda phi: 0.0, [0.0], seed=0, config=TuningConfig(pilot_iters=50, max_rounds=3))
        assert cov.shape == (1, 1)

    def test_coordinate_scale_sets_the_starting_spread(self):
        def stretched(phi):
            return -0.5 * (phi[0] ** 2 + (phi[1] / 100.0) ** 2)

        config = TuningConfig(pilot_iters=2000)
        cov = tune_proposal(stretched, [0.0, 0.0], seed=9, config=config, coordinate_scale=[1.0, 100.0])
        ratio = math.sqrt(cov[1, 1] / cov[0, 0])
        assert 30.0 <= ratio <= 300.0

    @pytest.mark.parametrize("scale", [[1.0], [1.0, 0.0]])
    def test_coordinate_scale_shape(self, scale):
        with pytest.raises(ValueError):
            tune_proposal(standard_normal, [0.0, 0.0], seed=0, coordinate_scale=scale)


class TestEffectiveSampleSize:
    def test_independent_draws(self):
        draws = make_rng(0).standard_normal(5000)
        result = ess(draws)
        assert 0.8 * 5000 <= result.value <= 5000
        assert not result.degenerate

    def test_autocorrelated_draws(self):
        n, phi = 20_000, 0.9
        expected = n * (1 - phi) / (1 + phi)
        assert ess(ar1_series(phi, n, 1)).value == pytest.approx(expected, rel=0.5)

    def test_constant_series(self):
        result = ess(np.full(200, 3.0))
        assert result.value == 1.0
        assert result.degenerate

    def test_short_series(self):
        with pytest.raises(ValueError):
            ess(np.arange(99.0))


class TestSummarize:
    def test_quantiles_on_a_grid(self):
        (summary,) = summarize(grid_chain(), burnin=0)
        assert summary.name == "k"
        assert summary.median == pytest.approx(0.5)
        assert summary.lower == pytest.approx(0.025)
        assert summary.upper == pytest.approx(0.975)
        assert summary.acceptance_rate == 1.0

    def test_constant_chain(self):
        n = 300
        chain = SampleChain(np.full((n, 1), 2.0), np.zeros(n), np.zeros(n, dtype=bool), np.eye(1))
        (summary,) = summarize(chain, burnin=50)
        assert summary.median == summary.lower == summary.upper == 2.0
        assert summary.ess_degenerate
        assert summary.acceptance_rate == 0.0

    def test_pooled_chains_add_ess(self):
        single = summarize(grid_chain(), burnin=0)[0].ess
        pooled = summarize([grid_chain(), grid_chain()], burnin=0)[0].ess
        assert pooled == pytest.approx(2 * single)

    def test_default_names(self):
        chain = grid_chain(names=())
        assert summarize(chain, burnin=0)[0].name == "theta1"
        assert summarize(chain, burnin=0, names=["rate"])[0].name == "rate"

    @pytest.mark.parametrize("burnin", [-1, 1001])
    def test_burnin_range(self, burnin):
        with pytest.raises(ValueError):
            summarize(grid_chain(), burnin=burnin)

    def test_posterior_of_a_gaussian(self):
        chain = rwm_chain(standard_normal, [0.0], [[5.76]], 20_000, seed=8)
        (summary,) = summarize(chain, burnin=1000)
        assert summary.median == pytest.approx(0.0, abs=0.1)
        assert summary.lower == pytest.approx(-1.96, abs=0.2)
        assert summary.upper == pytest.approx(1.96, abs=0.2)


@pytest.mark.slow
class TestCorrelatedGaussian:
    def test_sample_covariance(self):
        sigma = np.array([[1.0, 0.8, 0.3], [0.8, 2.0, 0.5], [0.3, 0.5, 1.5]])
        precision = np.linalg.inv(sigma)

        def logpost(phi):
            return -0.5 * float(phi @ precision @ phi)

        chain = rwm_chain(logpost, np.zeros(3), sigma * 2.38**2 / 3, 200_000, seed=12)
        sample = np.cov(chain.draws[20_000:], rowvar=False)
        assert np.linalg.norm(sample - sigma) / np.linalg.norm(sigma) <= 0.1
        assert 0.2 <= chain.acceptance_rate() <= 0.4
