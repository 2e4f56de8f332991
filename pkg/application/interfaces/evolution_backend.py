from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, List, Sequence, TypeVar
import logging

import numpy as np

from domain import CircuitLevel, KickedTopParams, QuantumState, QubitState, SweepMode

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


class EvolutionBackend(ABC):
    """Abstract base class for the ways a sweep obtains the state after N kicks.

    Every backend follows the hybrid scheme: U^N is computed classically,
    compiled to the fixed-size circuit and executed on the initial state.
    """

    mode: SweepMode

    def __init__(self, level: CircuitLevel = CircuitLevel.ROTATION) -> None:
        self.level = level

    @abstractmethod
    def evolve(
        self,
        initial: QubitState,
        params: KickedTopParams,
        n_kicks: int,
        rng: np.random.Generator,
    ) -> QuantumState:
        """Run the compiled N-kick circuit on `initial`.

        Args:
            initial: two-qubit starting state
            params: kicked-top parameters (j = 1)
            n_kicks: number of kicks N
            rng: task-local generator for any sampling the backend performs

        Returns:
            QuantumState: pure state for exact runs, density matrix otherwise
        """
        pass

    def trajectory(
        self,
        initial: QubitState,
        params: KickedTopParams,
        n_kicks: int,
        rng: np.random.Generator,
    ) -> List[QuantumState]:
        """States after kicks 1..n_kicks, each from its own U^N circuit."""
        return [self.evolve(initial, params, k, rng) for k in range(1, n_kicks + 1)]

    def describe(self) -> Dict[str, Any]:
        """Backend settings recorded in sweep metadata."""
        return {"mode": self.mode.value, "level": self.level.value}


class CellExecutor(ABC):
    """Runs independent sweep cells, returning results in input order."""

    @abstractmethod
    def map(self, func: Callable[[T], R], items: Sequence[T]) -> List[R]:
        pass

    def shutdown(self) -> None:
        """Release worker resources; a no-op for executors that own none."""
