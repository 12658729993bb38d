import numpy as np
import pytest

from kinetic_lna import (
    DataFormatError,
    ObservationModel,
    ObservationSeries,
    ParameterSummary,
    PriorFamily,
    SampleChain,
)
from kinetic_lna.formats import (
    MomentRecord,
    chain_text,
    column_labels,
    format_float,
    moments_text,
    obs_model_text,
    read_chain,
    read_moments,
    read_obs_model,
    read_observations,
    read_prior,
    read_summary,
    read_table,
    summary_csv_text,
    summary_table,
    time_label,
    write_observations,
)

SMALLPOX_OBS = """\
# total of infectives and susceptibles, observed exactly
obs_dim 1
P 1 1
Vdiag 0
mu0 1 118
Sigma0diag 0 0
"""


class TestFormatFloat:
    def test_round_trips_doubles(self):
        for value in (0.1, 1 / 3, 2.0**-40, 123456789.123456789):
            assert float(format_float(value)) == value

    def test_integers_stay_short(self):
        assert format_float(118.0) == "118"


class TestObservationCSV:
    def test_round_trip(self, tmp_path):
        series = ObservationSeries([0.0, 0.5, 1.5], [[1.0, 2.5], [3.0, 1 / 3], [0.0, 7.0]])
        path = tmp_path / "obs.csv"
        write_observations(path, series, ["pred", "prey"])
        again, names = read_observations(path)
        assert names == ["pred", "prey"]
        np.testing.assert_array_equal(again.times, series.times)
        np.testing.assert_array_equal(again.observations, series.observations)

    def test_header_must_start_with_time(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("t,y\n0,1\n1,2\n")
        with pytest.raises(DataFormatError) as info:
            read_observations(path)
        assert info.value.line == 1

    def test_non_numeric_field_names_line(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("time,y\n0,1\n1,two\n")
        with pytest.raises(DataFormatError) as info:
            read_observations(path)
        assert info.value.line == 3
        assert str(path) in str(info.value)

    def test_ragged_row(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("time,y\n0,1,5\n")
        with pytest.raises(DataFormatError, match="expected 2 fields"):
            read_table(path)

    def test_times_must_increase(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("time,y\n1,1\n0,2\n")
        with pytest.raises(DataFormatError, match="strictly increasing"):
            read_observations(path)

    def test_non_finite_value(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("time,y\n0,1\n1,nan\n")
        with pytest.raises(DataFormatError, match="non-finite"):
            read_observations(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFormatError, match="cannot read"):
            read_observations(tmp_path / "absent.csv")

    def test_blank_lines_are_skipped(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("time,y\n\n0,1\n1,2\n\n")
        series, _ = read_observations(path)
        assert series.times.size == 2


class TestObservationModelSpec:
    def test_smallpox_spec(self, tmp_path):
        path = tmp_path / "pox.obs"
        path.write_text(SMALLPOX_OBS)
        obs = read_obs_model(path, 2)
        np.testing.assert_array_equal(obs.P, [[1.0, 1.0]])
        np.testing.assert_array_equal(obs.V, [[0.0]])
        np.testing.assert_array_equal(obs.mu0, [1.0, 118.0])
        np.testing.assert_array_equal(obs.sigma0, np.zeros((2, 2)))

    def test_text_round_trip(self, tmp_path):
        obs = ObservationModel.partially_observed([0], [40, 140], [0, 100], [0.25])
        path = tmp_path / "lv.obs"
        path.write_text(obs_model_text(obs))
        again = read_obs_model(path, 2)
        for name in ("P", "V", "mu0", "sigma0"):
            np.testing.assert_array_equal(getattr(again, name), getattr(obs, name))

    @pytest.mark.parametrize(
        "text, message",
        [
            (SMALLPOX_OBS.replace("P 1 1", "P 1 1 1"), "P rows need 2"),
            (SMALLPOX_OBS.replace("obs_dim 1", "obs_dim 2"), "need 2 P rows"),
            (SMALLPOX_OBS.replace("Vdiag 0", "Vdiag -1"), "nonnegative"),
            (SMALLPOX_OBS.replace("mu0 1 118", "mu0 1"), "mu0 and Sigma0diag"),
            (SMALLPOX_OBS.replace("Sigma0diag 0 0\n", ""), "missing"),
            (SMALLPOX_OBS + "mu0 1 118\n", "duplicate"),
            (SMALLPOX_OBS + "Q 1\n", "unknown key"),
            (SMALLPOX_OBS.replace("P 1 1", "P 1 x"), "expected numbers"),
        ],
    )
    def test_malformed(self, tmp_path, text, message):
        path = tmp_path / "bad.obs"
        path.write_text(text)
        with pytest.raises(DataFormatError, match=message):
            read_obs_model(path, 2)

    def test_error_names_line(self, tmp_path):
        path = tmp_path / "bad.obs"
        path.write_text(SMALLPOX_OBS.replace("P 1 1", "P 1 1 1"))
        with pytest.raises(DataFormatError) as info:
            read_obs_model(path, 2)
        assert info.value.line == 3


class TestPriorSpec:
    def test_mixed_families(self, tmp_path):
        path = tmp_path / "prior"
        path.write_text("theta2 halfcauchy 100  # recovery\ntheta1 gamma 2 10\n")
        prior = read_prior(path, ("theta1", "theta2"))
        assert prior.names == ("theta1", "theta2")
        assert prior.entries[0].family is PriorFamily.GAMMA
        assert (prior.entries[0].a, prior.entries[0].b) == (2.0, 10.0)
        assert prior.entries[1].family is PriorFamily.HALFCAUCHY
        assert prior.entries[1].a == 100.0

    @pytest.mark.parametrize(
        "text, message",
        [
            ("theta1 gamma 2 10\n", "no prior for"),
            ("theta1 gamma 2 10\ntheta1 gamma 2 10\ntheta2 gamma 1 1\n", "duplicate"),
            ("theta3 gamma 2 10\n", "unknown parameter"),
            ("theta1 gamma 2\ntheta2 gamma 1 1\n", "expected"),
            ("theta1 lognormal 0 1\ntheta2 gamma 1 1\n", "expected"),
            ("theta1 gamma 2 -1\ntheta2 gamma 1 1\n", "positive rate"),
            ("theta1 halfcauchy 0\ntheta2 gamma 1 1\n", "positive"),
        ],
    )
    def test_malformed(self, tmp_path, text, message):
        path = tmp_path / "prior"
        path.write_text(text)
        with pytest.raises(DataFormatError, match=message):
            read_prior(path, ("theta1", "theta2"))


class TestChainOutput:
    def test_chain_csv_round_trip(self, tmp_path):
        draws = np.array([[-3.0, -1.0], [-2.9, -1.1], [-2.9, -1.1]])
        chain = SampleChain(draws, np.array([-10.5, -9.25, -9.25]), np.array([True, True, False]), np.eye(2))
        path = tmp_path / "run_chain.csv"
        path.write_text(chain_text([chain, chain], column_labels(("theta1", "theta2"))))
        labels, logpost, again = read_chain(path)
        assert labels == ["log10_theta1", "log10_theta2"]
        np.testing.assert_array_equal(again, np.vstack([draws, draws]))
        np.testing.assert_array_equal(logpost[:3], chain.logpost)
        assert path.read_text().splitlines()[0] == "iter,logpost,log10_theta1,log10_theta2"

    def test_read_chain_header(self, tmp_path):
        path = tmp_path / "chain.csv"
        path.write_text("iter,lp,theta1\n0,1,2\n")
        with pytest.raises(DataFormatError):
            read_chain(path)

    def test_summary_csv(self):
        summaries = [ParameterSummary("log10_theta1", -3.06, -3.3, -2.8, 1234.5, 0.27)]
        lines = summary_csv_text(summaries).splitlines()
        assert lines[0] == "parameter,median,q2.5,q97.5,ess,acceptance_rate"
        assert lines[1] == "log10_theta1,-3.0600000000000001,-3.2999999999999998,-2.7999999999999998,1234.5,0.27000000000000002"

    def test_summary_table(self):
        summaries = [
            ParameterSummary("log10_theta1", -3.06, -3.3, -2.8, 1234.5, 0.27),
            ParameterSummary("log10_theta2", -1.13, -1.4, -0.9, 1.0, 0.27, ess_degenerate=True),
        ]
        text = summary_table(summaries, 3.25)
        lines = text.splitlines()
        assert lines[0].split() == ["parameter", "median", "2.5%", "97.5%", "ESS", "accept"]
        assert lines[1].split() == ["log10_theta1", "-3.0600", "-3.3000", "-2.8000", "1234.5", "0.270"]
        assert lines[2].split()[4] == "1.0*"
        assert lines[-1] == "wall-clock seconds: 3.25"

    def test_initial_state_columns(self, tmp_path):
        labels = column_labels(("theta1",), ("prey",))
        assert labels == ["log10_theta1", "x0_prey"]
        chain = SampleChain(np.array([[-2.0, 141.5]]), np.array([-3.0]), np.array([True]), np.eye(2))
        path = tmp_path / "chain.csv"
        path.write_text(chain_text([chain], labels))
        again, _, draws = read_chain(path)
        assert again == labels
        assert draws[0, 1] == 141.5

    def test_summary_round_trip(self, tmp_path):
        summaries = [
            ParameterSummary("log10_theta1", -3.06, -3.3, -2.8, 1234.5, 0.27),
            ParameterSummary("x0_prey", 139.25, 120.0, 160.5, 87.0, 0.27),
        ]
        path = tmp_path / "run_summary.csv"
        path.write_text(summary_csv_text(summaries))
        assert read_summary(path) == summaries

    @pytest.mark.parametrize(
        "text",
        ["name,median\nlog10_k,1\n", "parameter,median,q2.5,q97.5,ess,acceptance_rate\nlog10_k,a,1,2,3,0.2\n", ""],
    )
    def test_malformed_summary(self, tmp_path, text):
        path = tmp_path / "summary.csv"
        path.write_text(text)
        with pytest.raises(DataFormatError):
            read_summary(path)


class TestMoments:
    def test_time_label(self):
        assert time_label(0.1) == "0.1"
        assert time_label(2.0) == "2"
        assert time_label(0.1 + 0.2) == "0.30000000000000004"

    def test_round_trip(self, tmp_path):
        records = [
            MomentRecord(0.1, "ssa", "pred", 40.5, 3.25),
            MomentRecord(0.1 + 0.2, "lna", "prey", 1 / 3, 0.0),
        ]
        path = tmp_path / "fig_moments.csv"
        path.write_text(moments_text(records))
        assert path.read_text().splitlines()[1] == "0.1,ssa,pred,40.5,3.25"
        assert read_moments(path) == records

    def test_non_numeric_row(self, tmp_path):
        path = tmp_path / "fig_moments.csv"
        path.write_text("time,method,species,mean,sd\n0.1,ssa,pred,n/a,1\n")
        with pytest.raises(DataFormatError) as info:
            read_moments(path)
        assert info.value.line == 2
