import math
import unittest

import numpy as np
import pytest

from application.services.diagnostics import (
    concurrence,
    entanglement_summary,
    fidelity,
    oscs,
    time_average,
)
from application.services.spin_algebra import scs_to_qubits
from common import operators
from common.linalg import random_density_matrix, random_state, random_unitary
from domain import DensityMatrix, InvalidStateError, PhasePoint, QubitState, SymmetryViolation


class TestConcurrence(unittest.TestCase):
    """Test cases for the Wootters concurrence."""

    def test_bell_state(self):
        bell = QubitState(np.array([1, 0, 0, 1]) / math.sqrt(2))
        self.assertAlmostEqual(concurrence(bell), 1.0, delta=1e-10)
        self.assertAlmostEqual(concurrence(bell.to_density()), 1.0, delta=1e-10)

    def test_product_state(self):
        product = QubitState.basis("00")
        self.assertAlmostEqual(concurrence(product), 0.0, delta=1e-10)
        self.assertAlmostEqual(concurrence(product.to_density()), 0.0, delta=1e-10)

    def test_coherent_states_are_unentangled(self):
        state = scs_to_qubits(PhasePoint(2.25, 2.0))
        self.assertLess(concurrence(state), 1e-12)

    def test_maximally_mixed(self):
        self.assertEqual(concurrence(DensityMatrix.maximally_mixed()), 0.0)

    def test_werner_state(self):
        bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
        for weight in (0.2, 0.5, 0.9):
            rho = weight * np.outer(bell, bell) + (1 - weight) * np.eye(4) / 4
            expected = max(0.0, (3 * weight - 1) / 2)
            self.assertAlmostEqual(concurrence(DensityMatrix(rho)), expected, delta=1e-9)

    def test_pure_and_mixed_paths_agree(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            state = QubitState(random_state(4, rng))
            self.assertAlmostEqual(concurrence(state), concurrence(state.to_density()), delta=1e-7)


class TestConcurrenceProperties:
    """Property tests for the concurrence."""

    def test_bounds_on_random_density_matrices(self, rng):
        for _ in range(10_000):
            value = concurrence(DensityMatrix(random_density_matrix(4, rng)))
            assert 0.0 <= value <= 1.0

    def test_local_unitary_invariance(self, rng):
        for _ in range(100):
            rho = random_density_matrix(4, rng)
            local = np.kron(random_unitary(2, rng), random_unitary(2, rng))
            rotated = local @ rho @ local.conj().T
            assert concurrence(DensityMatrix(rho)) == pytest.approx(
                concurrence(DensityMatrix(rotated)), abs=1e-9
            )


class TestFidelity:
    """Test suite for the Uhlmann fidelity."""

    def test_self_fidelity(self, rng):
        for _ in range(20):
            rho = DensityMatrix(random_density_matrix(4, rng))
            assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_pure_states(self):
        assert fidelity(QubitState.basis("00"), QubitState.basis("11")) == pytest.approx(0.0, abs=1e-10)
        assert fidelity(
            QubitState.basis("01").to_density(), QubitState.basis("10").to_density()
        ) == pytest.approx(0.0, abs=1e-10)

    def test_pure_against_maximally_mixed(self, rng):
        psi = QubitState(random_state(4, rng))
        assert fidelity(psi.to_density(), DensityMatrix.maximally_mixed()) == pytest.approx(0.25, abs=1e-10)

    def test_pure_states_give_squared_overlap(self, rng):
        for _ in range(20):
            a, b = QubitState(random_state(4, rng)), QubitState(random_state(4, rng))
            expected = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
            assert fidelity(a, b) == pytest.approx(expected, abs=1e-10)
            assert fidelity(a.to_density(), b.to_density()) == pytest.approx(expected, abs=1e-10)

    def test_symmetric(self, rng):
        for _ in range(50):
            rho = DensityMatrix(random_density_matrix(4, rng))
            sigma = DensityMatrix(random_density_matrix(4, rng))
            assert fidelity(rho, sigma) == pytest.approx(fidelity(sigma, rho), abs=1e-9)
            assert 0.0 <= fidelity(rho, sigma) <= 1.0

    def test_commuting_mixed_states(self):
        rho = DensityMatrix(np.diag([0.5, 0.5, 0.0, 0.0]))
        sigma = DensityMatrix(np.diag([0.25, 0.25, 0.25, 0.25]))
        assert fidelity(rho, sigma) == pytest.approx(0.5, abs=1e-10)


class TestOSCS(unittest.TestCase):
    """Test cases for the overlap with the closest spin coherent state."""

    def test_coherent_state_overlap_is_one(self):
        for point in (PhasePoint(2.25, 1.0), PhasePoint(0.3, 5.9), PhasePoint(math.pi / 2, 0.0)):
            self.assertAlmostEqual(oscs(scs_to_qubits(point)), 1.0, delta=1e-6)

    def test_basis_state(self):
        self.assertAlmostEqual(oscs(QubitState.basis("00")), 1.0, delta=1e-12)

    def test_symmetric_bell_state(self):
        state = QubitState(np.array([0, 1, 1, 0]) / math.sqrt(2))
        self.assertAlmostEqual(oscs(state), 1 / math.sqrt(2), delta=1e-4)

    def test_value_matches_brute_force(self):
        rng = np.random.default_rng(5)
        isometry = operators.DICKE_ISOMETRY
        amps = isometry @ random_state(3, rng)
        state = QubitState.normalized(amps)
        thetas = np.linspace(0, math.pi, 721)
        phis = np.linspace(0, 2 * math.pi, 1440, endpoint=False)
        c, s = np.cos(thetas / 2)[:, None], np.sin(thetas / 2)[:, None]
        e = np.exp(1j * phis)[None, :]
        a, b, c_amp, d = state.amplitudes
        brute = np.abs(c ** 2 * a + c * s * np.conj(e) * (b + c_amp) + s ** 2 * np.conj(e) ** 2 * d).max()
        value = oscs(state)
        self.assertGreaterEqual(value + 1e-9, brute)
        self.assertLess(value - brute, 1e-4)

    def test_singlet_weight_is_rejected(self):
        singlet = QubitState(operators.SINGLET)
        with self.assertRaises(SymmetryViolation):
            oscs(singlet)

    def test_grid_too_small(self):
        with self.assertRaises(InvalidStateError):
            oscs(QubitState.basis("00"), grid=(1, 10))


class TestTimeAverage(unittest.TestCase):
    """Test cases for per-kick averaging."""

    def test_constant(self):
        self.assertAlmostEqual(time_average([0.3, 0.3, 0.3]), 0.3)

    def test_alternating(self):
        self.assertEqual(time_average([0.0, 1.0] * 10), 0.5)

    def test_empty(self):
        with self.assertRaises(InvalidStateError):
            time_average([])


def test_entanglement_summary(bell_state):
    summary = entanglement_summary(bell_state)
    assert summary["concurrence"] == pytest.approx(1.0)
    assert summary["purity"] == pytest.approx(1.0)
