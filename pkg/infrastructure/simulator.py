"""
Dense two-qubit simulator.

Pure states are held as 2x2 amplitude tensors psi[q0, q1] so single-qubit
gates are a contraction on one axis and CNOTs are index swaps. Mixed states
are evolved as rho -> G rho G^dagger followed by the depolarizing channel of
the gate that was applied.
"""

import logging
from typing import Iterable

import numpy as np

from common import operators
from common.rng import SeedLike, make_generator
from domain import (
    OUTCOMES,
    PAULI_LABELS,
    DensityMatrix,
    Gate,
    GateKind,
    GateSequence,
    InvalidStateError,
    NoiseConfig,
    QuantumState,
    QubitState,
    ShotRecord,
)

logger = logging.getLogger(__name__)

BASIS_ROTATIONS = {
    "Z": operators.PAULI_I,
    "X": operators.HADAMARD,
    "Y": operators.HADAMARD @ operators.S_DAGGER,
}


def _check_structure(gates: Iterable[Gate]) -> None:
    """Reject anything that is not a well-formed gate before touching the state."""
    for position, gate in enumerate(gates):
        if not isinstance(gate, Gate):
            raise InvalidStateError(f"Item {position} is not a gate: {gate!r}")
        if len(gate.qubits) != gate.kind.n_qubits or any(q not in (0, 1) for q in gate.qubits):
            raise InvalidStateError(f"Gate {position} has bad qubit indices {gate.qubits}")


def _apply_gate(psi: np.ndarray, gate: Gate) -> np.ndarray:
    if gate.kind is GateKind.CNOT:
        control, _ = gate.qubits
        out = psi.copy()
        if control == 0:
            out[1, :] = psi[1, ::-1]
        else:
            out[:, 1] = psi[::-1, 1]
        return out
    m = gate.single_qubit_matrix
    if gate.qubits[0] == 0:
        return m @ psi
    return psi @ m.T


def run_circuit(sequence: GateSequence, state: QubitState) -> QubitState:
    """Apply the gates of `sequence` in order to a pure state.

    Raises:
        InvalidStateError: if the sequence contains a malformed gate
    """
    _check_structure(sequence.gates)
    psi = state.amplitudes.reshape(2, 2)
    for gate in sequence:
        psi = _apply_gate(psi, gate)
    return QubitState.normalized(psi.reshape(4))


def _partial_trace(rho: np.ndarray, qubit: int) -> np.ndarray:
    """Trace out `qubit`, returning the 2x2 state of the other one."""
    tensor = rho.reshape(2, 2, 2, 2)
    if qubit == 0:
        return np.einsum("abad->bd", tensor)
    return np.einsum("abcb->ac", tensor)


def depolarize_single(rho: np.ndarray, qubit: int, probability: float) -> np.ndarray:
    """(1 - p) rho + p (I/2 on `qubit`) (x) Tr_qubit(rho)."""
    if probability == 0.0:
        return rho
    reduced = _partial_trace(rho, qubit)
    half = operators.PAULI_I / 2
    replaced = np.kron(half, reduced) if qubit == 0 else np.kron(reduced, half)
    return (1 - probability) * rho + probability * replaced


def depolarize_pair(rho: np.ndarray, probability: float) -> np.ndarray:
    """(1 - p) rho + p I/4."""
    if probability == 0.0:
        return rho
    return (1 - probability) * rho + probability * np.eye(4, dtype=complex) / 4


def run_noisy(sequence: GateSequence, state: DensityMatrix, noise: NoiseConfig) -> DensityMatrix:
    """Density-matrix evolution with a depolarizing channel after every gate.

    Single-qubit gates are followed by single-qubit depolarization of the acted
    qubit with probability p1; CNOTs by full two-qubit depolarization with p2.
    The channels are applied exactly, so the result does not depend on a seed.
    """
    _check_structure(sequence.gates)
    rho = np.array(state.entries, dtype=complex)
    for gate in sequence:
        g = gate.matrix
        rho = g @ rho @ g.conj().T
        if gate.is_two_qubit:
            rho = depolarize_pair(rho, noise.p2)
        else:
            rho = depolarize_single(rho, gate.qubits[0], noise.p1)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)


def _check_basis(basis: str) -> None:
    if len(basis) != 2 or any(label not in PAULI_LABELS for label in basis):
        raise InvalidStateError(f"Basis must be a pair from X/Y/Z, got '{basis}'")


def basis_probabilities(state: QuantumState, basis: str) -> np.ndarray:
    """Born probabilities of outcomes 00, 01, 10, 11 after rotating into `basis`."""
    _check_basis(basis)
    rotation = np.kron(BASIS_ROTATIONS[basis[0]], BASIS_ROTATIONS[basis[1]])
    if isinstance(state, QubitState):
        probs = np.abs(rotation @ state.amplitudes) ** 2
    else:
        probs = np.real(np.diag(rotation @ state.entries @ rotation.conj().T))
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def measure_basis(
    state: QuantumState, basis: str, shots: int, seed: SeedLike
) -> ShotRecord:
    """Sample `shots` outcomes in a Pauli-pair basis.

    Args:
        state: pure or mixed two-qubit state
        basis: e.g. 'XZ' (X on qubit 0, Z on qubit 1)
        shots: number of samples, at least 1
        seed: integer seed or an existing generator

    Returns:
        ShotRecord: counts for all four outcomes
    """
    if shots < 1:
        raise InvalidStateError(f"shots must be at least 1, got {shots}")
    probs = basis_probabilities(state, basis)
    counts = make_generator(seed).multinomial(shots, probs)
    return ShotRecord(basis=basis, counts=dict(zip(OUTCOMES, (int(c) for c in counts))), shots=shots)
