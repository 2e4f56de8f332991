"""
Chaos diagnostics: concurrence, Uhlmann fidelity, overlap with the closest
spin coherent state (O_SCS) and time averages.
"""

import logging
import math
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from common import operators
from common.linalg import psd_sqrt
from domain import (
    ConsistencyError,
    InvalidStateError,
    QuantumState,
    QubitState,
    SymmetryViolation,
)

logger = logging.getLogger(__name__)

NEGATIVE_EIGENVALUE_TOLERANCE = 1e-10
PURE_STATE_PURITY = 1 - 1e-12
OSCS_SYMMETRY_TOLERANCE = 1e-6
OSCS_RESOLUTION = 1e-6
DEFAULT_OSCS_GRID = (181, 360)
REFINEMENT_POINTS = 11


def concurrence(state: QuantumState) -> float:
    """Wootters concurrence C = max(0, s1 - s2 - s3 - s4).

    s_i are the square roots, in decreasing order, of the eigenvalues of
    rho (Y(x)Y) rho* (Y(x)Y). They are read off the Hermitian matrix
    sqrt(rho) rho~ sqrt(rho), which has the same spectrum. Pure states, and
    density matrices with purity above 1 - 1e-12, use the closed form 2|ad - bc|.

    Raises:
        ConsistencyError: if an eigenvalue falls below -1e-10
    """
    pure = _as_pure(state)
    if pure is not None:
        a, b, c, d = pure.amplitudes
        return float(min(1.0, 2 * abs(a * d - b * c)))

    rho = state.entries
    flipped = operators.SIGMA_YY @ rho.conj() @ operators.SIGMA_YY
    root = psd_sqrt(rho)
    eigvals = np.linalg.eigvalsh(root @ flipped @ root)
    if eigvals.min() < -NEGATIVE_EIGENVALUE_TOLERANCE:
        raise ConsistencyError(f"rho rho~ has eigenvalue {eigvals.min():.3e}")
    roots = np.sort(np.sqrt(np.clip(eigvals, 0.0, None)))[::-1]
    return float(np.clip(roots[0] - roots[1:].sum(), 0.0, 1.0))


def _as_pure(state: QuantumState) -> Optional[QubitState]:
    if isinstance(state, QubitState):
        return state
    if state.purity > PURE_STATE_PURITY:
        eigvals, eigvecs = np.linalg.eigh(state.entries)
        return QubitState.normalized(eigvecs[:, int(np.argmax(eigvals))])
    return None


def fidelity(rho: QuantumState, sigma: QuantumState) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2.

    When either argument is pure, F reduces to <psi|other|psi>, which is
    evaluated directly.
    """
    pure_rho, pure_sigma = _as_pure(rho), _as_pure(sigma)
    if pure_rho is not None and pure_sigma is not None:
        return float(min(1.0, abs(np.vdot(pure_rho.amplitudes, pure_sigma.amplitudes)) ** 2))
    if pure_rho is not None or pure_sigma is not None:
        psi = pure_rho if pure_rho is not None else pure_sigma
        other = sigma if pure_rho is not None else rho
        value = np.real(np.vdot(psi.amplitudes, other.entries @ psi.amplitudes))
        return float(np.clip(value, 0.0, 1.0))

    root = psd_sqrt(sigma.entries)
    eigvals = np.linalg.eigvalsh(root @ rho.entries @ root)
    value = np.sqrt(np.clip(eigvals, 0.0, None)).sum() ** 2
    return float(np.clip(value, 0.0, 1.0))


def _product_overlaps(amps: np.ndarray, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """|<t,f| (x) <t,f| psi> on the outer product of `thetas` and `phis`."""
    a, b, c, d = amps
    cos = np.cos(thetas / 2)[:, None]
    sin = np.sin(thetas / 2)[:, None]
    phase = np.exp(-1j * phis)[None, :]
    value = cos ** 2 * a + cos * sin * phase * (b + c) + sin ** 2 * phase ** 2 * d
    return np.abs(value)


def oscs(state: QubitState, grid: Tuple[int, int] = DEFAULT_OSCS_GRID) -> float:
    """Largest overlap of a symmetric two-qubit state with a product coherent state.

    A coarse (theta, phi) scan finds the best cell, which is then refined by
    repeatedly rescanning a shrinking window until the step drops below 1e-6.

    Args:
        state: state in the symmetric subspace
        grid: (n_theta, n_phi) of the coarse scan

    Raises:
        SymmetryViolation: if the singlet overlap exceeds 1e-6
    """
    n_theta, n_phi = grid
    if n_theta < 2 or n_phi < 1:
        raise InvalidStateError(f"O_SCS grid too small: {grid}")
    singlet = abs(np.vdot(operators.SINGLET, state.amplitudes))
    if singlet > OSCS_SYMMETRY_TOLERANCE:
        raise SymmetryViolation(singlet, OSCS_SYMMETRY_TOLERANCE)

    amps = state.amplitudes
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    overlaps = _product_overlaps(amps, thetas, phis)
    i, k = np.unravel_index(int(np.argmax(overlaps)), overlaps.shape)
    theta, phi, best = thetas[i], phis[k], overlaps[i, k]
    d_theta, d_phi = math.pi / (n_theta - 1), 2 * math.pi / n_phi

    while max(d_theta, d_phi) > OSCS_RESOLUTION:
        thetas = np.clip(np.linspace(theta - d_theta, theta + d_theta, REFINEMENT_POINTS), 0.0, math.pi)
        phis = np.linspace(phi - d_phi, phi + d_phi, REFINEMENT_POINTS)
        overlaps = _product_overlaps(amps, thetas, phis)
        i, k = np.unravel_index(int(np.argmax(overlaps)), overlaps.shape)
        if overlaps[i, k] >= best:
            theta, phi, best = thetas[i], phis[k], overlaps[i, k]
        d_theta /= (REFINEMENT_POINTS - 1) / 4
        d_phi /= (REFINEMENT_POINTS - 1) / 4
    return float(min(best, 1.0))


def time_average(series: Sequence[float]) -> float:
    """Arithmetic mean of a per-kick series.

    Raises:
        InvalidStateError: for an empty series
    """
    if len(series) == 0:
        raise InvalidStateError("Cannot average an empty series")
    return float(np.mean(series))


def entanglement_summary(state: QuantumState) -> Dict[str, float]:
    """Concurrence and purity of a state, as reported by tomo-demo."""
    rho = state.to_density() if isinstance(state, QubitState) else state
    return {"concurrence": concurrence(state), "purity": rho.purity}
