"""
Kick-to-kick Floquet unitaries and their powers.
"""

import logging
from functools import lru_cache

import numpy as np
import scipy.linalg

from common import operators
from common.linalg import unitarity_error, unitary_exp
from domain import SPIN_ONE, InvalidStateError, KickedTopParams, NonUnitaryError, QubitState
from .spin_algebra import build_ops

logger = logging.getLogger(__name__)

UNITARY_TOLERANCE = 1e-8


def floquet_spin(params: KickedTopParams) -> np.ndarray:
    """U = exp(-i kappa/(2j) Jz^2) exp(-i p Jy) in the (2j+1)-dim spin space."""
    spin = params.spin
    ops = build_ops(spin)
    twist = np.exp(-1j * params.kappa * spin.m_values ** 2 / spin.twice_j)
    rotation = unitary_exp(ops.jy, params.p)
    return twist[:, None] * rotation


def floquet_2q(params: KickedTopParams) -> np.ndarray:
    """U = exp(-i kappa/4 (I + Z(x)Z)) exp(-i p/2 (Y(x)I + I(x)Y)) for j = 1.

    The kappa/4 identity term is kept, so U matches floquet_spin on the
    symmetric subspace without any phase correction.
    """
    if params.spin != SPIN_ONE:
        raise InvalidStateError(f"The two-qubit Floquet operator needs j = 1, got j = {params.spin}")
    twist = np.exp(-0.25j * params.kappa * (1 + np.diag(operators.SIGMA_ZZ).real))
    ry = operators.ry(params.p)
    return twist[:, None] * np.kron(ry, ry)


def unitary_power(u: np.ndarray, n: int) -> np.ndarray:
    """U^n through the unitary eigendecomposition U = V D V^dagger.

    The cost does not depend on n. Eigenvalues are renormalized to the unit
    circle before exponentiation so the result stays unitary for large n.

    Raises:
        NonUnitaryError: if u is not unitary within tolerance
        InvalidStateError: for negative n
    """
    if n < 0:
        raise InvalidStateError(f"Power must be non-negative, got {n}")
    deviation = unitarity_error(u)
    if deviation > UNITARY_TOLERANCE:
        raise NonUnitaryError(deviation, UNITARY_TOLERANCE)
    if n == 0:
        return np.eye(u.shape[0], dtype=complex)
    if n == 1:
        return np.array(u, dtype=complex)
    schur, vectors = scipy.linalg.schur(u, output="complex")
    phases = np.angle(np.diag(schur))
    powered = np.exp(1j * n * phases)
    return (vectors * powered) @ vectors.conj().T


@lru_cache(maxsize=8192)
def _effective_unitary(kappa: float, p: float, n_kicks: int) -> np.ndarray:
    u = unitary_power(floquet_2q(KickedTopParams(kappa=kappa, p=p)), n_kicks)
    u.setflags(write=False)
    return u


def effective_unitary(params: KickedTopParams, n_kicks: int) -> np.ndarray:
    """U^N of the two-qubit Floquet operator, memoized per (kappa, p, N)."""
    return _effective_unitary(params.kappa, params.p, n_kicks)


def evolve_qubits(state: QubitState, params: KickedTopParams, n_kicks: int) -> QubitState:
    """Dense-matrix evolution of a two-qubit state by n_kicks kicks."""
    return QubitState.normalized(effective_unitary(params, n_kicks) @ state.amplitudes)
