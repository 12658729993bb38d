import pytest

from kinetic_lna import (
    ChainConfig,
    ConfigurationError,
    IntegratorConfig,
    SimulationMethod,
    TuningConfig,
)
from kinetic_lna.config import RTOL_ENV_VAR


class TestIntegratorConfig:
    def test_defaults(self):
        cfg = IntegratorConfig()
        assert (cfg.rtol, cfg.atol, cfg.method) == (1e-6, 1e-8, "RK45")

    def test_reference_is_tight(self):
        assert IntegratorConfig.reference().rtol == 1e-10

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv(RTOL_ENV_VAR, "1e-9")
        assert IntegratorConfig.from_env().rtol == 1e-9

    def test_env_unset(self, monkeypatch):
        monkeypatch.delenv(RTOL_ENV_VAR, raising=False)
        assert IntegratorConfig.from_env() == IntegratorConfig()

    def test_env_garbage(self, monkeypatch):
        monkeypatch.setenv(RTOL_ENV_VAR, "tight")
        with pytest.raises(ConfigurationError):
            IntegratorConfig.from_env()

    def test_flag_wins_over_env(self, monkeypatch):
        monkeypatch.setenv(RTOL_ENV_VAR, "1e-9")
        cfg = IntegratorConfig.from_env().with_overrides(rtol=1e-4, method="DOP853")
        assert (cfg.rtol, cfg.method) == (1e-4, "DOP853")

    @pytest.mark.parametrize(
        "kwargs",
        [{"rtol": 0.0}, {"atol": -1.0}, {"rtol": 1e-14}, {"max_steps": 0}, {"method": "Euler"}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigurationError):
            IntegratorConfig(**kwargs)


class TestChainConfig:
    def test_default_burnin_is_a_fifth(self):
        assert ChainConfig(iters=1000).effective_burnin == 200

    def test_explicit_burnin(self):
        assert ChainConfig(iters=1000, burnin=10).effective_burnin == 10

    def test_burnin_must_be_smaller_than_iters(self):
        with pytest.raises(ConfigurationError):
            ChainConfig(iters=100, burnin=100)


class TestTuningConfig:
    def test_target_is_bracket_midpoint(self):
        assert TuningConfig().target == pytest.approx(0.275)

    def test_invalid_bracket(self):
        with pytest.raises(ConfigurationError):
            TuningConfig(target_low=0.4, target_high=0.3)


class TestSimulationMethod:
    @pytest.mark.parametrize(
        "name, method",
        [("ssa", SimulationMethod.EXACT), ("Exact", SimulationMethod.EXACT), ("em", SimulationMethod.EULER_MARUYAMA)],
    )
    def test_parse(self, name, method):
        assert SimulationMethod.parse(name) is method

    def test_unknown(self):
        with pytest.raises(ConfigurationError, match="Unknown simulation method"):
            SimulationMethod.parse("tau-leap")
