"""
Two-qubit state tomography by linear inversion over the nine Pauli-pair bases.
"""

import itertools
import logging
from typing import Dict, Iterable, List, Mapping

import numpy as np

from common import operators
from common.rng import SeedLike, make_generator
from domain import (
    OUTCOMES,
    PAULI_LABELS,
    DensityMatrix,
    MissingBasis,
    QuantumState,
    QubitState,
    ShotRecord,
)
from .simulator import measure_basis

logger = logging.getLogger(__name__)

TOMOGRAPHY_BASES = tuple(a + b for a, b in itertools.product(PAULI_LABELS, repeat=2))
ALL_LABELS = tuple(a + b for a, b in itertools.product(("I",) + PAULI_LABELS, repeat=2))
CLIP_WARNING = 1e-3


def _sign(outcome: str, mask: str) -> int:
    """(-1)^(number of 1 bits on the qubits that are not 'I' in mask)."""
    parity = sum(int(bit) for bit, label in zip(outcome, mask) if label != "I")
    return -1 if parity % 2 else 1


def _expectation(probabilities: Mapping[str, float], mask: str) -> float:
    return float(sum(_sign(outcome, mask) * probabilities[outcome] for outcome in OUTCOMES))


def merge_records(records: Iterable[ShotRecord]) -> Dict[str, ShotRecord]:
    """Group records by basis, pooling counts when a basis appears more than once."""
    merged: Dict[str, ShotRecord] = {}
    for record in records:
        previous = merged.get(record.basis)
        if previous is None:
            merged[record.basis] = record
            continue
        counts = {o: previous.counts[o] + record.counts[o] for o in OUTCOMES}
        merged[record.basis] = ShotRecord(record.basis, counts, previous.shots + record.shots)
    return merged


def expectations_from_probabilities(probabilities: Mapping[str, Mapping[str, float]]) -> Dict[str, float]:
    """All 16 Pauli-pair expectations from per-basis outcome probabilities.

    Correlators such as XZ come from their own basis. Single-qubit terms such
    as XI are averaged over the three bases that measure X on qubit 0.

    Raises:
        MissingBasis: if any of the nine bases is absent
    """
    missing = tuple(b for b in TOMOGRAPHY_BASES if b not in probabilities)
    if missing:
        raise MissingBasis(missing)

    expectations: Dict[str, float] = {}
    for label in ALL_LABELS:
        if label == "II":
            expectations[label] = 1.0
            continue
        bases = [
            b for b in TOMOGRAPHY_BASES
            if all(l == "I" or l == bl for l, bl in zip(label, b))
        ]
        expectations[label] = float(np.mean([_expectation(probabilities[b], label) for b in bases]))
    return expectations


def expectations_from_records(records: Iterable[ShotRecord]) -> Dict[str, float]:
    merged = merge_records(records)
    return expectations_from_probabilities({b: r.probabilities() for b, r in merged.items()})


def exact_expectations(state: QuantumState) -> Dict[str, float]:
    """<P (x) Q> for every Pauli pair, computed directly from the state."""
    rho = state.to_density().entries if isinstance(state, QubitState) else state.entries
    return {
        label: float(np.real(np.trace(rho @ np.kron(operators.PAULIS[label[0]], operators.PAULIS[label[1]]))))
        for label in ALL_LABELS
    }


def linear_inversion(expectations: Mapping[str, float]) -> np.ndarray:
    """rho = 1/4 sum <P (x) Q> P (x) Q; may have small negative eigenvalues."""
    rho = np.zeros((4, 4), dtype=complex)
    for label in ALL_LABELS:
        rho += expectations[label] * np.kron(operators.PAULIS[label[0]], operators.PAULIS[label[1]])
    return rho / 4


def project_to_physical(matrix: np.ndarray) -> DensityMatrix:
    """Closest density matrix in the 2-norm to a unit-trace Hermitian estimate.

    Eigenvalues are walked from the smallest up: each negative one is set to
    zero and its weight is spread evenly over the ones not yet visited, until
    the next eigenvalue stays non-negative after the shift.
    """
    hermitian = 0.5 * (matrix + matrix.conj().T)
    trace = float(np.real(np.trace(hermitian)))
    if trace <= 0.0:
        return DensityMatrix.maximally_mixed()
    eigvals, eigvecs = np.linalg.eigh(hermitian / trace)

    # eigh sorts ascending; `remaining` counts the eigenvalues from index i up
    projected = eigvals.copy()
    removed = 0.0
    remaining = len(projected)
    for i in range(len(projected)):
        if projected[i] + removed / remaining >= 0.0:
            break
        removed += projected[i]
        projected[i] = 0.0
        remaining -= 1
    if remaining == 0:
        return DensityMatrix.maximally_mixed()
    projected[len(projected) - remaining:] += removed / remaining

    if -removed > CLIP_WARNING:
        logger.warning(f"Tomography projection removed {-removed:.3e} of negative weight")
    rho = (eigvecs * projected) @ eigvecs.conj().T
    return DensityMatrix(rho)


def tomography(records: Iterable[ShotRecord]) -> DensityMatrix:
    """Reconstruct a physical density matrix from the nine basis records.

    Raises:
        MissingBasis: if any basis has no record
    """
    return project_to_physical(linear_inversion(expectations_from_records(records)))


def measure_all_bases(state: QuantumState, shots: int, seed: SeedLike) -> List[ShotRecord]:
    """Records for the nine bases in XX, XY, ..., ZZ order, drawn from one generator."""
    rng = make_generator(seed)
    return [measure_basis(state, basis, shots, rng) for basis in TOMOGRAPHY_BASES]


def reconstruct(state: QuantumState, shots: int, seed: SeedLike) -> DensityMatrix:
    """Simulated tomography: measure every basis, then invert."""
    return tomography(measure_all_bases(state, shots, seed))
