"""
Small dense linear-algebra helpers used across the toolkit.
"""

from typing import Optional

import numpy as np
import scipy.linalg


def unitary_exp(generator: np.ndarray, angle: float) -> np.ndarray:
    """Compute exp(-i * angle * H) for Hermitian H by eigendecomposition.

    Args:
        generator: Hermitian matrix H
        angle: real prefactor

    Returns:
        The unitary exp(-i angle H)
    """
    h = 0.5 * (generator + generator.conj().T)
    eigvals, eigvecs = scipy.linalg.eigh(h)
    phases = np.exp(-1j * angle * eigvals)
    return (eigvecs * phases) @ eigvecs.conj().T


def unitarity_error(matrix: np.ndarray) -> float:
    """Max-entry deviation of U^dagger U from the identity."""
    dim = matrix.shape[0]
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(dim))))


def hermiticity_error(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def phase_aligned_error(actual: np.ndarray, expected: np.ndarray) -> float:
    """Max-entry distance after removing the best global phase.

    The phase applied to `actual` is the unit-modulus scalar maximizing the
    overlap tr(expected^dagger actual). Works for vectors and matrices.
    """
    overlap = np.vdot(actual, expected)
    if abs(overlap) < 1e-300:
        return float(np.max(np.abs(actual - expected)))
    phase = overlap / abs(overlap)
    return float(np.max(np.abs(actual * phase - expected)))


def psd_sqrt(matrix: np.ndarray, floor: float = 1e-15) -> np.ndarray:
    """Square root of a positive semidefinite Hermitian matrix.

    Eigenvalues below `floor` are treated as exact zeros.
    """
    eigvals, eigvecs = scipy.linalg.eigh(0.5 * (matrix + matrix.conj().T))
    roots = np.sqrt(np.where(eigvals > floor, eigvals, 0.0))
    return (eigvecs * roots) @ eigvecs.conj().T


def nearest_unitary(matrix: np.ndarray) -> np.ndarray:
    """Polar projection of an almost-unitary matrix onto the unitary group."""
    u, _, vh = np.linalg.svd(matrix)
    return u @ vh


def random_unitary(dim: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    rng = rng if rng is not None else np.random.default_rng()
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(dim: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    rng = rng if rng is not None else np.random.default_rng()
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Normalized A A^dagger for a complex Gaussian A."""
    rng = rng if rng is not None else np.random.default_rng()
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
