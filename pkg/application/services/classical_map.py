"""
Classical stroboscopic map of the kicked top for p = pi/2.
"""

import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
import scipy.optimize

from domain import ClassicalState, InvalidStateError, PhasePoint

logger = logging.getLogger(__name__)

POLE_TOLERANCE = 1e-15
PERIODIC_RESIDUAL = 1e-10
DUPLICATE_DISTANCE = 1e-6


def classical_step(state: ClassicalState, kappa: float) -> ClassicalState:
    """One kick: twist about z by kappa*X after a pi/2 rotation about y.

    X' = Z cos(kX) + Y sin(kX), Y' = Y cos(kX) - Z sin(kX), Z' = -X,
    renormalized onto the sphere.
    """
    x, y, z = state.x, state.y, state.z
    c, s = math.cos(kappa * x), math.sin(kappa * x)
    return ClassicalState.from_vector((z * c + y * s, y * c - z * s, -x))


def classical_trajectory(
    initial: ClassicalState, kappa: float, n_kicks: int
) -> List[ClassicalState]:
    """Stroboscopic trajectory of length n_kicks + 1, starting with `initial`."""
    if n_kicks < 0:
        raise InvalidStateError(f"n_kicks must be non-negative, got {n_kicks}")
    trajectory = [initial]
    for _ in range(n_kicks):
        trajectory.append(classical_step(trajectory[-1], kappa))
    return trajectory


def angles_to_sphere(point: PhasePoint) -> ClassicalState:
    """(X, Y, Z) = (sin t cos f, sin t sin f, cos t)."""
    st = math.sin(point.theta)
    return ClassicalState.from_vector(
        (st * math.cos(point.phi), st * math.sin(point.phi), math.cos(point.theta))
    )


def sphere_to_angles(state: ClassicalState) -> PhasePoint:
    """Inverse of angles_to_sphere; phi is 0 at the poles."""
    rho = math.hypot(state.x, state.y)
    theta = math.atan2(rho, state.z)
    phi = 0.0 if rho < POLE_TOLERANCE else math.atan2(state.y, state.x)
    return PhasePoint(theta, phi)


def phase_grid(n_theta: int = 17, n_phi: int = 17) -> List[PhasePoint]:
    """Uniform lattice over [0, pi] x [0, 2 pi), theta outer and phi inner."""
    if n_theta < 1 or n_phi < 1:
        raise InvalidStateError("Grid dimensions must be positive")
    thetas = grid_thetas(n_theta)
    phis = grid_phis(n_phi)
    return [PhasePoint(t, f) for t in thetas for f in phis]


def grid_thetas(n_theta: int) -> np.ndarray:
    if n_theta == 1:
        return np.array([math.pi / 2])
    return np.linspace(0.0, math.pi, n_theta)


def grid_phis(n_phi: int) -> np.ndarray:
    return np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)


def stroboscopic_map(
    points: Sequence[PhasePoint], kappa: float, n_kicks: int
) -> List[List[ClassicalState]]:
    """Trajectories for every initial point, in input order."""
    logger.debug(f"Iterating {len(points)} initial points for {n_kicks} kicks at kappa={kappa}")
    return [classical_trajectory(angles_to_sphere(p), kappa, n_kicks) for p in points]


def iterate(state: ClassicalState, kappa: float, times: int) -> ClassicalState:
    for _ in range(times):
        state = classical_step(state, kappa)
    return state


def _tangent_basis(v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    axis = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = axis - np.dot(axis, v) * v
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(v, e1)


def stability_trace(point: ClassicalState, kappa: float, period: int = 1, step: float = 1e-6) -> float:
    """Trace of the Jacobian of F^period at a periodic point, in a tangent-plane chart.

    The map preserves area, so the point is elliptic when |trace| < 2.
    """
    v = point.as_array()
    basis = _tangent_basis(v)
    jacobian = np.empty((2, 2))
    for j, direction in enumerate(basis):
        ahead = iterate(ClassicalState.from_vector(v + step * direction), kappa, period).as_array()
        behind = iterate(ClassicalState.from_vector(v - step * direction), kappa, period).as_array()
        for i, axis in enumerate(basis):
            jacobian[i, j] = np.dot(ahead - behind, axis) / (2 * step)
    return float(np.trace(jacobian))


def is_elliptic(point: ClassicalState, kappa: float, period: int = 1) -> bool:
    return abs(stability_trace(point, kappa, period)) < 2.0


def find_periodic_points(
    kappa: float, period: int = 1, n_theta: int = 12, n_phi: int = 24, elliptic_only: bool = False
) -> List[ClassicalState]:
    """Points s with F^period(s) = s, found by least squares from a lattice of starts.

    Results are deduplicated and sorted by (x, y, z) so the output is stable.

    Args:
        kappa: chaoticity parameter
        period: number of kicks after which the point returns
        n_theta: lattice rows used as starting guesses
        n_phi: lattice columns used as starting guesses
        elliptic_only: keep only the stable centres of regular islands

    Returns:
        List[ClassicalState]: distinct periodic points
    """
    if period < 1:
        raise InvalidStateError("period must be at least 1")

    def residual(angles: np.ndarray) -> np.ndarray:
        theta, phi = angles
        st = math.sin(theta)
        v = np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])
        image = iterate(ClassicalState.from_vector(v), kappa, period).as_array()
        return image - v

    found: List[ClassicalState] = []
    starts = [
        (t, f)
        for t in np.linspace(0.05, math.pi - 0.05, n_theta)
        for f in np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    ]
    for start in starts:
        solution = scipy.optimize.least_squares(residual, np.array(start), xtol=1e-14, ftol=1e-14, gtol=1e-14)
        if np.linalg.norm(residual(solution.x)) > PERIODIC_RESIDUAL:
            continue
        theta, phi = solution.x
        st = math.sin(theta)
        candidate = ClassicalState.from_vector((st * math.cos(phi), st * math.sin(phi), math.cos(theta)))
        if all(angular_distance(candidate, other) > DUPLICATE_DISTANCE for other in found):
            found.append(candidate)

    if elliptic_only:
        found = [point for point in found if is_elliptic(point, kappa, period)]
    found.sort(key=lambda s: (round(s.x, 9), round(s.y, 9), round(s.z, 9)))
    logger.debug(f"Found {len(found)} period-{period} points at kappa={kappa}")
    return found


def angular_distance(a: ClassicalState, b: ClassicalState) -> float:
    """Great-circle distance between two points on the sphere."""
    cosine = float(np.clip(np.dot(a.as_array(), b.as_array()), -1.0, 1.0))
    return math.acos(cosine)
