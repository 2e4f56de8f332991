"""
Parameter sweeps behind the concurrence, phase-space, O_SCS and fidelity studies.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.stats

from application.interfaces import CellExecutor, EvolutionBackend
from common.rng import task_generator
from domain import (
    DEFAULT_FIDELITY_KAPPAS,
    DEFAULT_FIDELITY_POINTS,
    InvalidStateError,
    KickedTopParams,
    Observable,
    PhasePoint,
    QuantumState,
    SweepResult,
)
from .diagnostics import DEFAULT_OSCS_GRID, concurrence, fidelity, oscs, time_average
from .floquet import evolve_qubits
from .spin_algebra import scs_to_qubits

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FidelityTrend:
    """Least-squares line through the configuration-averaged fidelity per kick."""
    slope: float
    stderr: float
    intercept: float
    kicks: Tuple[int, ...]
    mean: Tuple[float, ...]
    std: Tuple[float, ...] = field(default=())

    def is_flat(self, sigmas: float = 3.0) -> bool:
        """True when the slope is consistent with zero within `sigmas` standard errors."""
        return abs(self.slope) <= sigmas * self.stderr

    def to_dict(self) -> Dict[str, Any]:
        return {
            "slope": self.slope,
            "stderr": self.stderr,
            "intercept": self.intercept,
            "kicks": list(self.kicks),
            "mean": list(self.mean),
            "std": list(self.std),
        }


def _series_concurrence(states: Sequence[QuantumState]) -> List[float]:
    return [concurrence(state) for state in states]


def _check_kicks(n_kicks: int, minimum: int = 1) -> None:
    if n_kicks < minimum:
        raise InvalidStateError(f"n_kicks must be at least {minimum}, got {n_kicks}")


def oscs_trace(
    point: PhasePoint,
    kappa: float,
    n_kicks: int,
    p: float = math.pi / 2,
    grid: Tuple[int, int] = DEFAULT_OSCS_GRID,
) -> List[float]:
    """O_SCS after kicks 0..n_kicks along the exact evolution of SCS(point)."""
    _check_kicks(n_kicks, minimum=0)
    params = KickedTopParams(kappa=kappa, p=p)
    initial = scs_to_qubits(point)
    return [oscs(evolve_qubits(initial, params, k), grid) for k in range(n_kicks + 1)]


def fidelity_trend(result: SweepResult) -> FidelityTrend:
    """Fit fidelity against kick number after averaging every other axis.

    Args:
        result: fidelity sweep with a 'kick' axis

    Returns:
        FidelityTrend: slope, its standard error and the per-kick statistics
    """
    if result.observable is not Observable.FIDELITY:
        raise InvalidStateError(f"Expected a fidelity sweep, got {result.observable.value}")
    names = result.axis_names
    if "kick" not in names:
        raise InvalidStateError("Fidelity sweep has no 'kick' axis")
    kick_axis = names.index("kick")
    values = np.moveaxis(result.values, kick_axis, -1).reshape(-1, result.values.shape[kick_axis])
    kicks = tuple(int(k) for k in result.axis("kick"))
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    if len(kicks) < 3:
        raise InvalidStateError("Need at least three kick values to fit a trend")
    fit = scipy.stats.linregress(np.array(kicks, dtype=float), mean)
    return FidelityTrend(
        slope=float(fit.slope),
        stderr=float(fit.stderr),
        intercept=float(fit.intercept),
        kicks=kicks,
        mean=tuple(float(v) for v in mean),
        std=tuple(float(v) for v in std),
    )


class SweepRunner:
    """
    Runs sweeps over kicked-top parameters on one evolution backend.
    Every cell draws from its own generator seeded by (seed, cell index), so
    results do not depend on the executor or on completion order.
    """

    def __init__(
        self,
        backend: EvolutionBackend,
        executor: Optional[CellExecutor] = None,
        seed: int = 0,
        p: float = math.pi / 2,
    ) -> None:
        """Initialize the runner.

        Args:
            backend: how the state after N kicks is obtained
            executor: worker pool for the cells; runs sequentially when None
            seed: master seed of the sweep
            p: rotation angle per kick in radians
        """
        self.backend = backend
        self.executor = executor
        self.seed = seed
        self.p = p

    def _map(self, func: Callable[[int], Any], count: int) -> List[Any]:
        indices = list(range(count))
        if self.executor is None:
            return [func(i) for i in indices]
        return self.executor.map(func, indices)

    def _metadata(self, **extra: Any) -> Dict[str, Any]:
        return {**self.backend.describe(), "seed": self.seed, "p": self.p, **extra}

    def _trace(self, point: PhasePoint, kappa: float, n_kicks: int, index: int) -> List[float]:
        """Concurrence after kicks 1..n_kicks for one cell."""
        rng = task_generator(self.seed, index)
        params = KickedTopParams(kappa=kappa, p=self.p)
        states = self.backend.trajectory(scs_to_qubits(point), params, n_kicks, rng)
        return _series_concurrence(states)

    def concurrence_trace(
        self, point: PhasePoint, kappa: float, n_kicks: int
    ) -> List[float]:
        """Concurrence after each kick 0..n_kicks; kick 0 is the product SCS."""
        _check_kicks(n_kicks, minimum=0)
        initial = concurrence(scs_to_qubits(point))
        return [initial] + self._trace(point, kappa, n_kicks, 0)

    def concurrence_series(self, point: PhasePoint, kappa: float, n_kicks: int) -> SweepResult:
        """concurrence_trace packaged as a SweepResult over kicks 0..n_kicks."""
        trace = self.concurrence_trace(point, kappa, n_kicks)
        return SweepResult(
            observable=Observable.CONCURRENCE,
            axes=[("kick", list(range(n_kicks + 1)))],
            values=np.array(trace),
            fixed={"theta": point.theta, "phi": point.phi, "kappa": kappa, "mode": self.backend.mode.value},
            metadata=self._metadata(),
        )

    def kappa_sweep(
        self, point: PhasePoint, kappas: Sequence[float], n_kicks: int
    ) -> SweepResult:
        """Time-averaged concurrence over kicks 1..n_kicks for every kappa.

        Args:
            point: initial coherent state
            kappas: chaoticity values
            n_kicks: number of kicks averaged over

        Returns:
            SweepResult: one value per kappa
        """
        _check_kicks(n_kicks)
        kappas = [float(k) for k in kappas]
        logger.info(f"kappa sweep: {len(kappas)} values, {n_kicks} kicks, mode {self.backend.mode.value}")

        def cell(index: int) -> float:
            return time_average(self._trace(point, kappas[index], n_kicks, index))

        values = self._map(cell, len(kappas))
        return SweepResult(
            observable=Observable.AVERAGE_CONCURRENCE,
            axes=[("kappa", kappas)],
            values=np.array(values),
            fixed={"theta": point.theta, "phi": point.phi, "n_kicks": n_kicks, "mode": self.backend.mode.value},
            metadata=self._metadata(),
        )

    def kappa_kick_map(
        self, point: PhasePoint, kappas: Sequence[float], n_kicks: int
    ) -> SweepResult:
        """Concurrence for every (kappa, kick) pair, kicks 1..n_kicks, without averaging."""
        _check_kicks(n_kicks)
        kappas = [float(k) for k in kappas]
        logger.info(f"kappa-kick map: {len(kappas)} x {n_kicks} cells, mode {self.backend.mode.value}")
        rows = self._map(lambda i: self._trace(point, kappas[i], n_kicks, i), len(kappas))
        return SweepResult(
            observable=Observable.CONCURRENCE,
            axes=[("kappa", kappas), ("kick", list(range(1, n_kicks + 1)))],
            values=np.array(rows),
            fixed={"theta": point.theta, "phi": point.phi, "mode": self.backend.mode.value},
            metadata=self._metadata(),
        )

    def phase_grid_sweep(
        self,
        kappa: float,
        thetas: Sequence[float],
        phis: Sequence[float],
        n_kicks: int,
    ) -> SweepResult:
        """Time-averaged concurrence for every initial point of a (theta, phi) lattice.

        Cells are indexed theta-outer, phi-inner, which is also the row order
        of the CSV output.
        """
        _check_kicks(n_kicks)
        thetas = [float(t) for t in thetas]
        phis = [float(f) for f in phis]
        n_phi = len(phis)
        logger.info(
            f"phase grid: {len(thetas)} x {n_phi} points, kappa={kappa}, {n_kicks} kicks, "
            f"mode {self.backend.mode.value}"
        )

        def cell(index: int) -> float:
            point = PhasePoint(thetas[index // n_phi], phis[index % n_phi])
            value = time_average(self._trace(point, kappa, n_kicks, index))
            logger.debug(f"cell {index}: {value:.6f}")
            return value

        values = self._map(cell, len(thetas) * n_phi)
        return SweepResult(
            observable=Observable.AVERAGE_CONCURRENCE,
            axes=[("theta", thetas), ("phi", phis)],
            values=np.array(values).reshape(len(thetas), n_phi),
            fixed={"kappa": kappa, "n_kicks": n_kicks, "mode": self.backend.mode.value},
            metadata=self._metadata(),
        )

    def oscs_series(
        self,
        point: PhasePoint,
        kappa: float,
        n_kicks: int,
        grid: Tuple[int, int] = DEFAULT_OSCS_GRID,
    ) -> SweepResult:
        """O_SCS over kicks 0..n_kicks as a SweepResult."""
        trace = oscs_trace(point, kappa, n_kicks, self.p, grid)
        return SweepResult(
            observable=Observable.OSCS,
            axes=[("kick", list(range(n_kicks + 1)))],
            values=np.array(trace),
            fixed={"theta": point.theta, "phi": point.phi, "kappa": kappa},
            metadata={"p": self.p, "grid": list(grid)},
        )

    def fidelity_sweep(
        self,
        points: Sequence[PhasePoint] = DEFAULT_FIDELITY_POINTS,
        kappas: Sequence[float] = DEFAULT_FIDELITY_KAPPAS,
        kicks: Sequence[int] = tuple(range(1, 51)),
    ) -> SweepResult:
        """Fidelity of the backend's state to the exact state for every (point, kappa, N).

        The exact reference is the dense U^N applied to the initial SCS. With a
        noisy backend that tomographs its output this is the simulated
        counterpart of a hardware fidelity study.
        """
        points = list(points)
        kappas = [float(k) for k in kappas]
        kicks = [int(k) for k in kicks]
        if not kicks or min(kicks) < 0:
            raise InvalidStateError("kick numbers must be non-negative")
        n_cells = len(points) * len(kappas)
        logger.info(f"fidelity sweep: {n_cells} configurations x {len(kicks)} kicks")

        def cell(index: int) -> List[float]:
            point = points[index // len(kappas)]
            params = KickedTopParams(kappa=kappas[index % len(kappas)], p=self.p)
            rng = task_generator(self.seed, index)
            initial = scs_to_qubits(point)
            row = []
            for k in kicks:
                actual = self.backend.evolve(initial, params, k, rng)
                row.append(fidelity(actual, evolve_qubits(initial, params, k)))
            return row

        rows = self._map(cell, n_cells)
        labels = [f"{p.theta:.6g},{p.phi:.6g}" for p in points]
        return SweepResult(
            observable=Observable.FIDELITY,
            axes=[("point", labels), ("kappa", kappas), ("kick", kicks)],
            values=np.array(rows).reshape(len(points), len(kappas), len(kicks)),
            fixed={"mode": self.backend.mode.value},
            metadata=self._metadata(),
        )
