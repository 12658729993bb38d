import numpy as np
import pytest

from kinetic_lna import BUILTINS, ConfigurationError, UnknownNameError, builtin, drift, parse_network
from kinetic_lna.models import LOTKA_VOLTERRA


class TestBuiltin:
    def test_lotka_volterra_defaults(self, lv):
        _, theta, x0 = lv
        np.testing.assert_allclose(theta, [0.01, 0.6, 0.3])
        np.testing.assert_allclose(x0, [40.0, 140.0])

    def test_autoreg_scaled(self):
        net, theta, x0 = builtin("autoreg", 10)
        assert theta[0] == pytest.approx(0.01)
        assert theta[4] == pytest.approx(0.01)
        np.testing.assert_allclose(theta[[1, 2, 3, 5, 6, 7]], [0.7, 0.35, 0.2, 0.9, 0.3, 0.1])
        assert net.constants["k"] == pytest.approx(100.0)
        np.testing.assert_allclose(x0, [50.0, 80.0, 80.0, 80.0])

    def test_sir_is_lotka_volterra_without_prey_birth(self, sir):
        net, theta, x0 = sir
        lv_net = parse_network(LOTKA_VOLTERRA)
        assert net.n_reactions == 2
        np.testing.assert_array_equal(net.net_effect_matrix, lv_net.net_effect_matrix[:2])
        assert [r.rate.source.replace("I", "pred").replace("S", "prey") for r in net.reactions] == [
            r.rate.source for r in lv_net.reactions[:2]
        ]
        np.testing.assert_allclose(np.log10(theta), [-3.06, -1.13])
        np.testing.assert_allclose(x0, [1.0, 118.0])

    def test_ou_is_linear_with_unit_diffusion(self, ou):
        net, theta, _ = ou
        for x in (0.0, 0.3, 1.0):
            np.testing.assert_allclose(drift(net, [x], theta), [-x], atol=1e-15)
            np.testing.assert_allclose(net.diffusion_matrix([x], theta), [[1.0]])

    def test_scale_ignored_outside_autoreg(self):
        small, _, x_small = builtin("lotka-volterra", 1)
        large, _, x_large = builtin("lotka-volterra", 100)
        assert small == large
        np.testing.assert_array_equal(x_small, x_large)

    def test_registry(self):
        assert set(BUILTINS) == {"lotka-volterra", "sir", "autoreg", "ou"}

    def test_unknown_name(self):
        with pytest.raises(UnknownNameError, match="Unknown builtin network"):
            builtin("brusselator")

    @pytest.mark.parametrize("scale", [0.0, -1.0])
    def test_scale_must_be_positive(self, scale):
        with pytest.raises(ConfigurationError):
            builtin("autoreg", scale)
