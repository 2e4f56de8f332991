import math
import unittest

import numpy as np
import pytest

from application.services.diagnostics import fidelity
from application.services.floquet import effective_unitary, floquet_2q
from application.services.spin_algebra import scs_to_qubits
from application.services.synthesis import compile_2q, compile_qkt, sequence_unitary
from common import operators
from common.linalg import random_density_matrix, random_state, random_unitary
from domain import (
    CircuitLevel,
    DensityMatrix,
    Gate,
    GateSequence,
    InvalidStateError,
    KickedTopParams,
    NoiseConfig,
    PhasePoint,
    QubitState,
)
from infrastructure.simulator import (
    basis_probabilities,
    depolarize_pair,
    depolarize_single,
    measure_basis,
    run_circuit,
    run_noisy,
)


class TestRunCircuit(unittest.TestCase):
    """Test cases for pure-state circuit execution."""

    def test_empty_sequence(self):
        state = QubitState(random_state(4, np.random.default_rng(0)))
        out = run_circuit(GateSequence.empty(), state)
        np.testing.assert_allclose(out.amplitudes, state.amplitudes)

    def test_cnot_makes_bell_state(self):
        plus_zero = QubitState(np.array([1, 0, 1, 0]) / math.sqrt(2))
        out = run_circuit(GateSequence((Gate.cnot(0, 1),), CircuitLevel.ROTATION), plus_zero)
        np.testing.assert_allclose(out.amplitudes, np.array([1, 0, 0, 1]) / math.sqrt(2), atol=1e-15)

    def test_reversed_cnot(self):
        out = run_circuit(GateSequence((Gate.cnot(1, 0),), CircuitLevel.ROTATION), QubitState.basis("01"))
        np.testing.assert_allclose(out.amplitudes, QubitState.basis("11").amplitudes)

    def test_single_qubit_gates_act_on_their_qubit(self):
        out = run_circuit(GateSequence((Gate.x(1),), CircuitLevel.ROTATION), QubitState.basis("00"))
        np.testing.assert_allclose(out.amplitudes, QubitState.basis("01").amplitudes)
        out = run_circuit(GateSequence((Gate.x(0),), CircuitLevel.ROTATION), QubitState.basis("00"))
        np.testing.assert_allclose(out.amplitudes, QubitState.basis("10").amplitudes)

    def test_compiled_floquet_matches_matrix(self):
        u = floquet_2q(KickedTopParams(kappa=2.5))
        out = run_circuit(compile_2q(u), QubitState.basis("00"))
        self.assertAlmostEqual(out.overlap(QubitState(u[:, 0])), 1.0, delta=1e-9)

    def test_rejects_non_gates(self):
        sequence = GateSequence.empty()
        object.__setattr__(sequence, "gates", ("CNOT",))
        with self.assertRaises(InvalidStateError):
            run_circuit(sequence, QubitState.basis("00"))


def test_circuits_agree_with_dense_matrices():
    rng = np.random.default_rng(200)
    for index in range(200):
        level = CircuitLevel.ROTATION if index % 2 else CircuitLevel.IBMQ
        sequence = compile_2q(random_unitary(4, rng), level)
        state = QubitState(random_state(4, rng))
        expected = QubitState.normalized(sequence_unitary(sequence) @ state.amplitudes)
        assert run_circuit(sequence, state).overlap(expected) == pytest.approx(1.0, abs=1e-9)


class TestNoise:
    """Test suite for depolarizing density-matrix evolution."""

    def setup_method(self):
        self.params = KickedTopParams(kappa=2.5)
        self.circuit = compile_qkt(self.params, 3)
        self.initial = scs_to_qubits(PhasePoint(2.25, 2.0))

    def test_noiseless_matches_pure_evolution(self):
        rho = run_noisy(self.circuit, self.initial.to_density(), NoiseConfig())
        pure = run_circuit(self.circuit, self.initial).to_density()
        assert np.max(np.abs(rho.entries - pure.entries)) < 1e-10

    def test_full_cnot_depolarization(self):
        sequence = GateSequence((Gate.cnot(0, 1),), CircuitLevel.ROTATION)
        rho = run_noisy(sequence, self.initial.to_density(), NoiseConfig(p2=1.0))
        np.testing.assert_allclose(rho.entries, np.eye(4) / 4, atol=1e-15)

    def test_single_qubit_channel_keeps_other_marginal(self):
        rho = QubitState.basis("01").to_density().entries
        out = depolarize_single(rho, 0, 1.0)
        np.testing.assert_allclose(out, np.kron(np.eye(2) / 2, np.diag([0, 1])), atol=1e-15)
        out = depolarize_single(rho, 1, 1.0)
        np.testing.assert_allclose(out, np.kron(np.diag([1, 0]), np.eye(2) / 2), atol=1e-15)

    def test_channels_preserve_trace(self, rng):
        rho = random_density_matrix(4, rng)
        assert np.trace(depolarize_single(rho, 1, 0.3)).real == pytest.approx(1.0)
        assert np.trace(depolarize_pair(rho, 0.3)).real == pytest.approx(1.0)

    def test_output_is_a_density_matrix(self):
        rho = run_noisy(self.circuit, self.initial.to_density(), NoiseConfig(p1=0.05, p2=0.1))
        assert isinstance(rho, DensityMatrix)
        assert rho.purity < 1.0

    def test_reproducible(self):
        noise = NoiseConfig(p1=0.001, p2=0.01, seed=4)
        ideal = run_circuit(self.circuit, self.initial)
        first = fidelity(run_noisy(self.circuit, self.initial.to_density(), noise), ideal)
        second = fidelity(run_noisy(self.circuit, self.initial.to_density(), noise), ideal)
        assert first == second

    def test_fidelity_decreases_with_noise(self):
        ideal = run_circuit(self.circuit, self.initial)
        for grid in ([NoiseConfig(p1=p) for p in (0.0, 0.001, 0.01, 0.05, 0.2)],
                     [NoiseConfig(p2=p) for p in (0.0, 0.01, 0.05, 0.1, 0.3)]):
            values = [fidelity(run_noisy(self.circuit, self.initial.to_density(), n), ideal) for n in grid]
            assert values[0] == pytest.approx(1.0, abs=1e-10)
            assert all(later <= earlier + 1e-12 for earlier, later in zip(values, values[1:]))


class TestMeasurement:
    """Test suite for basis rotation and shot sampling."""

    def test_computational_basis(self):
        record = measure_basis(QubitState.basis("00"), "ZZ", 1000, seed=1)
        assert record.counts == {"00": 1000, "01": 0, "10": 0, "11": 0}

    def test_bell_statistics(self, bell_state):
        record = measure_basis(bell_state, "ZZ", 100_000, seed=2)
        assert record.counts["01"] == 0 and record.counts["10"] == 0
        assert abs(record.counts["00"] / 100_000 - 0.5) < 0.01

    def test_x_eigenstate(self):
        plus_zero = QubitState(np.array([1, 0, 1, 0]) / math.sqrt(2))
        record = measure_basis(plus_zero, "XZ", 500, seed=3)
        assert record.counts["00"] == 500

    def test_y_eigenstate(self):
        plus_i = np.array([1, 1j]) / math.sqrt(2)
        state = QubitState(np.kron(plus_i, np.array([1, 0])))
        np.testing.assert_allclose(basis_probabilities(state, "YZ"), [1, 0, 0, 0], atol=1e-15)

    def test_density_matrix_probabilities(self, bell_state):
        pure = basis_probabilities(bell_state, "XY")
        mixed = basis_probabilities(bell_state.to_density(), "XY")
        np.testing.assert_allclose(pure, mixed, atol=1e-15)

    def test_same_seed_same_counts(self, bell_state):
        a = measure_basis(bell_state, "XX", 8192, seed=9)
        b = measure_basis(bell_state, "XX", 8192, seed=9)
        assert a == b

    def test_invalid_arguments(self, bell_state):
        with pytest.raises(InvalidStateError):
            measure_basis(bell_state, "ZZ", 0, seed=1)
        with pytest.raises(InvalidStateError):
            measure_basis(bell_state, "IZ", 10, seed=1)


def test_gate_matrix_embedding():
    gate = Gate.ry(1, 0.4)
    np.testing.assert_allclose(gate.matrix, operators.on_qubit(operators.ry(0.4), 1))
    np.testing.assert_allclose(effective_unitary(KickedTopParams(kappa=0.0), 0), np.eye(4))
