"""
Angular-momentum algebra, spin coherent states and the spin-1 <-> two-qubit
symmetric embedding.

Conventions: |j, j> maps to |0...0>; qubit 0 is the leftmost tensor factor.
"""

import logging
import math
from functools import lru_cache

import numpy as np

from common import operators
from common.linalg import unitary_exp
from domain import (
    SPIN_ONE,
    AngularMomentumOps,
    InvalidStateError,
    PhasePoint,
    QubitState,
    SpinQuantumNumber,
    SpinState,
    SymmetryViolation,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-8


@lru_cache(maxsize=64)
def build_ops(spin: SpinQuantumNumber) -> AngularMomentumOps:
    """Standard matrices of Jx, Jy, Jz for spin j.

    Jz is diagonal with entries m = j, ..., -j; Jx and Jy come from the ladder
    operator J+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>.

    Args:
        spin: the spin quantum number

    Returns:
        AngularMomentumOps: the three generators
    """
    j = spin.j
    m = spin.m_values
    j_plus = np.zeros((spin.dim, spin.dim), dtype=complex)
    for k in range(1, spin.dim):
        j_plus[k - 1, k] = math.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    j_minus = j_plus.conj().T
    return AngularMomentumOps(
        spin=spin,
        jx=(j_plus + j_minus) / 2,
        jy=(j_plus - j_minus) / 2j,
        jz=np.diag(m).astype(complex),
    )


def highest_weight(spin: SpinQuantumNumber) -> SpinState:
    """The state |j, j>."""
    amps = np.zeros(spin.dim, dtype=complex)
    amps[0] = 1.0
    return SpinState(spin, amps)


def scs(spin: SpinQuantumNumber, point: PhasePoint) -> SpinState:
    """Spin coherent state exp[i theta (Jx sin phi - Jy cos phi)] |j, j>."""
    ops = build_ops(spin)
    generator = ops.jx * math.sin(point.phi) - ops.jy * math.cos(point.phi)
    rotation = unitary_exp(generator, -point.theta)
    return SpinState.normalized(spin, rotation @ highest_weight(spin).amplitudes)


def single_qubit_scs(point: PhasePoint) -> np.ndarray:
    """cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, the spin-1/2 coherent state."""
    return np.array(
        [math.cos(point.theta / 2), np.exp(1j * point.phi) * math.sin(point.theta / 2)],
        dtype=complex,
    )


def scs_to_qubits(point: PhasePoint, spin: SpinQuantumNumber = SPIN_ONE) -> QubitState:
    """Coherent state of spin 1 as the product |theta,phi> (x) |theta,phi>.

    Raises:
        InvalidStateError: for any spin other than j = 1
    """
    _require_spin_one(spin)
    q = single_qubit_scs(point)
    return QubitState.normalized(np.kron(q, q))


def symmetric_embed(state: SpinState) -> QubitState:
    """Map a spin-1 state to the symmetric two-qubit subspace.

    |1,1> -> |00>, |1,0> -> (|01>+|10>)/sqrt2, |1,-1> -> |11>.
    """
    _require_spin_one(state.spin)
    return QubitState.normalized(operators.DICKE_ISOMETRY @ state.amplitudes)


def symmetric_extract(state: QubitState) -> SpinState:
    """Inverse of symmetric_embed.

    Raises:
        SymmetryViolation: if the state has singlet weight above tolerance
    """
    singlet = abs(np.vdot(operators.SINGLET, state.amplitudes))
    if singlet > SYMMETRY_TOLERANCE:
        raise SymmetryViolation(singlet, SYMMETRY_TOLERANCE)
    return SpinState.normalized(SPIN_ONE, operators.DICKE_ISOMETRY.conj().T @ state.amplitudes)


def _require_spin_one(spin: SpinQuantumNumber) -> None:
    if spin != SPIN_ONE:
        raise InvalidStateError(f"Only j = 1 has a two-qubit embedding, got j = {spin}")
