import numpy as np
import pytest

from kinetic_lna import UnknownNameError, load_dataset, smallpox
from kinetic_lna.datasets import removal_days

REMOVAL_DAYS = [
    0, 7, 9, 12, 12, 12, 13, 17, 22, 25, 27, 27, 29, 29, 34, 37, 38, 42, 42, 43, 44, 45, 47, 47,
    48, 53, 53, 58, 63,
]  # fmt: skip


class TestSmallpox:
    def test_removal_days(self):
        np.testing.assert_array_equal(removal_days(), REMOVAL_DAYS)

    def test_daily_series(self):
        data = smallpox()
        series = data.series
        assert series.times.size == 74
        np.testing.assert_array_equal(series.times, np.arange(74.0))
        assert series.observations[0, 0] == 119
        assert series.observations[-1, 0] == 91
        assert np.all(series.observations[-11:, 0] == 91)
        assert np.all(np.diff(series.observations[:, 0]) <= 0)

    def test_same_day_removals(self):
        y = smallpox().series.observations[:, 0]
        assert y[11] - y[12] == 3
        assert y[12] == 120 - 6

    def test_total_removed(self):
        y = smallpox().series.observations[:, 0]
        assert 120 - y[-1] == len(REMOVAL_DAYS)

    def test_observation_model(self):
        obs = smallpox().obs_model
        np.testing.assert_array_equal(obs.P, [[1.0, 1.0]])
        np.testing.assert_array_equal(obs.V, [[0.0]])
        np.testing.assert_array_equal(obs.mu0, [1.0, 118.0])
        np.testing.assert_array_equal(obs.sigma0, np.zeros((2, 2)))

    def test_tail_days(self):
        assert smallpox(tail_days=0).series.times[-1] == 63.0
        with pytest.raises(ValueError):
            smallpox(tail_days=-1)


class TestLoadDataset:
    def test_by_name(self):
        data = load_dataset("smallpox")
        assert data.network == "sir"
        assert data.columns == ("y",)

    def test_unknown_name(self):
        with pytest.raises(UnknownNameError, match="Unknown dataset"):
            load_dataset("measles")
