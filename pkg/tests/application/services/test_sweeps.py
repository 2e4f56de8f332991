import math
import unittest

import numpy as np
import pytest

from application.services.classical_map import (
    angles_to_sphere,
    find_periodic_points,
    grid_phis,
    grid_thetas,
)
from application.services.diagnostics import concurrence, time_average
from application.services.floquet import evolve_qubits
from application.services.spin_algebra import scs_to_qubits
from application.services.sweeps import (
    FidelityTrend,
    SweepRunner,
    fidelity_trend,
    oscs_trace,
)
from domain import (
    DEFAULT_FIDELITY_KAPPAS,
    DEFAULT_FIDELITY_POINTS,
    InvalidStateError,
    KickedTopParams,
    NoiseConfig,
    Observable,
    PhasePoint,
    SweepMode,
    SweepResult,
)
from infrastructure.backends import create_backend
from infrastructure.executor import SequentialExecutor, ThreadPoolCellExecutor

FIG_POINT = PhasePoint(2.25, 2.0)
PERIOD_FOUR_ORBIT = [
    np.array([0.0, 0.0, 1.0]),
    np.array([0.0, 0.0, -1.0]),
    np.array([1.0, 0.0, 0.0]),
    np.array([-1.0, 0.0, 0.0]),
]


def _exact_runner(**kwargs):
    return SweepRunner(create_backend(SweepMode.EXACT), **kwargs)


class TestConcurrenceSeries(unittest.TestCase):
    """Test cases for per-kick concurrence traces."""

    def test_starts_unentangled(self):
        trace = _exact_runner().concurrence_trace(FIG_POINT, 2.5, 5)
        self.assertEqual(len(trace), 6)
        self.assertLess(trace[0], 1e-12)
        self.assertTrue(all(0.0 <= value <= 1.0 for value in trace))

    def test_zero_kappa_never_entangles(self):
        trace = _exact_runner().concurrence_trace(FIG_POINT, 0.0, 20)
        self.assertLess(max(trace), 1e-8)

    def test_circuit_path_matches_matrix_path(self):
        runner = _exact_runner()
        initial = scs_to_qubits(FIG_POINT)
        for kappa in (0.5, 2.5, 4.5, 6.5):
            params = KickedTopParams(kappa=kappa)
            trace = runner.concurrence_trace(FIG_POINT, kappa, 50)
            for n_kicks in (1, 10, 50):
                expected = concurrence(evolve_qubits(initial, params, n_kicks))
                self.assertAlmostEqual(trace[n_kicks], expected, delta=1e-8)

    def test_series_result(self):
        result = _exact_runner().concurrence_series(FIG_POINT, 2.5, 4)
        self.assertEqual(result.observable, Observable.CONCURRENCE)
        self.assertEqual(list(result.axis("kick")), [0, 1, 2, 3, 4])
        self.assertEqual(result.fixed["mode"], "exact")

    def test_negative_kicks(self):
        with self.assertRaises(InvalidStateError):
            _exact_runner().concurrence_trace(FIG_POINT, 2.5, -1)


class TestKappaSweep:
    """Test suite for time-averaged concurrence against kappa."""

    def test_zero_kappa(self):
        result = _exact_runner().kappa_sweep(FIG_POINT, [0.0], 30)
        assert result.values[0] < 1e-8

    def test_average_excludes_kick_zero(self):
        runner = _exact_runner()
        trace = runner.concurrence_trace(FIG_POINT, 2.5, 10)
        result = runner.kappa_sweep(FIG_POINT, [2.5], 10)
        assert result.values[0] == pytest.approx(time_average(trace[1:]), abs=1e-12)

    def test_requires_a_kick(self):
        with pytest.raises(InvalidStateError):
            _exact_runner().kappa_sweep(FIG_POINT, [1.0], 0)

    def test_kick_map_shape(self):
        result = _exact_runner().kappa_kick_map(FIG_POINT, [0.5, 1.5, 2.5], 4)
        assert result.values.shape == (3, 4)
        assert list(result.axis("kick")) == [1, 2, 3, 4]
        assert result.axis_names == ["kappa", "kick"]

    def test_exact_runs_are_identical(self):
        first = _exact_runner().kappa_sweep(FIG_POINT, [1.0, 3.0], 15)
        second = _exact_runner().kappa_sweep(FIG_POINT, [1.0, 3.0], 15)
        assert np.array_equal(first.values, second.values)

    def test_shots_mode_tracks_exact(self):
        kappas = [1.0, 2.5]
        exact = _exact_runner().kappa_sweep(FIG_POINT, kappas, 10).values
        for seed in range(10):
            shots = SweepRunner(create_backend(SweepMode.SHOTS, shots=8192), seed=seed)
            estimate = shots.kappa_sweep(FIG_POINT, kappas, 10).values
            assert np.max(np.abs(estimate - exact)) < 0.05

    def test_seeded_results_do_not_depend_on_executor(self):
        backend = create_backend(SweepMode.SHOTS, shots=256)
        sequential = SweepRunner(backend, SequentialExecutor(), seed=11)
        pool = ThreadPoolCellExecutor(3)
        try:
            threaded = SweepRunner(backend, pool, seed=11)
            kappas = [0.5, 1.5, 2.5, 3.5]
            assert np.array_equal(
                sequential.kappa_sweep(FIG_POINT, kappas, 3).values,
                threaded.kappa_sweep(FIG_POINT, kappas, 3).values,
            )
        finally:
            pool.shutdown()

    def test_metadata_records_backend_and_seed(self):
        result = SweepRunner(create_backend(SweepMode.SHOTS, shots=64), seed=5).kappa_sweep(FIG_POINT, [1.0], 1)
        assert result.metadata["mode"] == "shots"
        assert result.metadata["shots"] == 64
        assert result.metadata["seed"] == 5

    @pytest.mark.slow
    def test_two_pi_periodicity(self):
        kappas = [0.5 * k for k in range(1, 13)]
        runner = _exact_runner()
        base = runner.kappa_sweep(FIG_POINT, kappas, 200).values
        shifted = runner.kappa_sweep(FIG_POINT, [k + 2 * math.pi for k in kappas], 200).values
        assert np.max(np.abs(base - shifted)) < 1e-8


class TestPhaseGrid:
    """Test suite for the (theta, phi) initial-point sweep."""

    def test_zero_kappa_grid(self):
        result = _exact_runner().phase_grid_sweep(0.0, grid_thetas(3), grid_phis(4), 5)
        assert result.values.shape == (3, 4)
        assert np.max(result.values) < 1e-8

    def test_cells_follow_theta_outer_order(self):
        thetas, phis = [0.5, 2.25], [0.0, 2.0]
        result = _exact_runner().phase_grid_sweep(2.5, thetas, phis, 4)
        single = _exact_runner().kappa_sweep(PhasePoint(2.25, 2.0), [2.5], 4)
        assert result.values[1, 1] == pytest.approx(single.values[0], abs=1e-12)
        assert result.axis_names == ["theta", "phi"]

    @pytest.mark.slow
    def test_orbit_maximum_and_island_minimum(self):
        thetas, phis = grid_thetas(17), grid_phis(17)
        result = _exact_runner().phase_grid_sweep(2.5, thetas, phis, 200)

        i, k = np.unravel_index(int(np.argmax(result.values)), result.values.shape)
        top = angles_to_sphere(PhasePoint(thetas[i], phis[k])).as_array()
        assert min(np.linalg.norm(top - v) for v in PERIOD_FOUR_ORBIT) < 1e-9

        i, k = np.unravel_index(int(np.argmin(result.values)), result.values.shape)
        bottom = angles_to_sphere(PhasePoint(thetas[i], phis[k]))
        islands = find_periodic_points(2.5, 1, elliptic_only=True) + find_periodic_points(2.5, 2, elliptic_only=True)
        assert islands
        # one grid cell is about 0.37 of chord on the sphere
        assert min(np.linalg.norm(bottom.as_array() - s.as_array()) for s in islands) < 0.37

        orbit_value = float(result.values.max())
        assert float(np.median(result.values)) < orbit_value
        assert float(np.median(result.values)) > float(result.values.min())


class TestOSCS:
    """Test suite for O_SCS traces."""

    def test_kick_zero_is_one(self):
        trace = oscs_trace(FIG_POINT, 2.5, 3)
        assert len(trace) == 4
        assert trace[0] == pytest.approx(1.0, abs=1e-6)
        assert all(0.0 < value <= 1.0 for value in trace)

    def test_delocalization_tracks_entanglement(self):
        orbit, regular = PhasePoint(math.pi / 2, 0.0), PhasePoint(2.25, 1.0)
        assert np.mean(oscs_trace(orbit, 2.5, 50)) < np.mean(oscs_trace(regular, 2.5, 50))
        runner = _exact_runner()
        averages = runner.kappa_sweep(orbit, [2.5], 50).values[0], runner.kappa_sweep(regular, [2.5], 50).values[0]
        assert averages[0] > averages[1]

    def test_series_result(self):
        result = _exact_runner().oscs_series(FIG_POINT, 2.5, 2, grid=(31, 60))
        assert result.observable == Observable.OSCS
        assert result.metadata["grid"] == [31, 60]


class TestFidelity:
    """Test suite for fidelity sweeps and their trend."""

    def test_exact_backend_is_perfect(self):
        result = _exact_runner().fidelity_sweep(kicks=[1, 2, 3])
        assert result.values.shape == (len(DEFAULT_FIDELITY_POINTS), len(DEFAULT_FIDELITY_KAPPAS), 3)
        assert np.min(result.values) > 1 - 1e-8

    def test_cnot_noise_gives_constant_fidelity(self):
        p2 = 0.02
        runner = SweepRunner(create_backend(SweepMode.NOISY, noise=NoiseConfig(p2=p2)))
        result = runner.fidelity_sweep(kicks=[1, 5, 20])
        survive = (1 - p2) ** 8
        np.testing.assert_allclose(result.values, survive + (1 - survive) / 4, atol=1e-9)

    def test_trend_needs_three_kicks(self):
        result = _exact_runner().fidelity_sweep(kicks=[1, 2])
        with pytest.raises(InvalidStateError):
            fidelity_trend(result)

    def test_trend_rejects_other_observables(self):
        result = _exact_runner().kappa_sweep(FIG_POINT, [1.0], 2)
        with pytest.raises(InvalidStateError):
            fidelity_trend(result)

    def test_trend_of_linear_data(self):
        values = np.array([[[0.9, 0.8, 0.7, 0.6]]])
        result = SweepResult(Observable.FIDELITY, [("point", ["a"]), ("kappa", [1.0]), ("kick", [1, 2, 3, 4])], values)
        trend = fidelity_trend(result)
        assert trend.slope == pytest.approx(-0.1)
        assert trend.intercept == pytest.approx(1.0)
        assert not trend.is_flat()
        assert trend.to_dict()["kicks"] == [1, 2, 3, 4]

    def test_flatness(self):
        assert FidelityTrend(slope=1e-4, stderr=1e-4, intercept=0.9, kicks=(1, 2, 3), mean=(0.9, 0.9, 0.9)).is_flat()

    @pytest.mark.slow
    def test_no_systematic_loss_over_kicks(self):
        backend = create_backend(SweepMode.NOISY, shots=2048, noise=NoiseConfig(p1=0.001, p2=0.02))
        result = SweepRunner(backend, seed=3).fidelity_sweep(kicks=range(1, 51))
        trend = fidelity_trend(result)
        assert trend.is_flat()
        assert 0.5 < trend.intercept < 0.99
