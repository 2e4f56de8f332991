import logging
from typing import Any, Dict

import numpy as np

from domain import CircuitLevel, DensityMatrix, InvalidStateError, KickedTopParams, QubitState, SweepMode
from infrastructure.tomography import reconstruct
from .exact_backend import ExactBackend

logger = logging.getLogger(__name__)

DEFAULT_SHOTS = 8192


class ShotsBackend(ExactBackend):
    """Exact circuit execution followed by simulated nine-basis tomography."""

    mode = SweepMode.SHOTS

    def __init__(self, shots: int = DEFAULT_SHOTS, level: CircuitLevel = CircuitLevel.ROTATION) -> None:
        super().__init__(level)
        if shots < 1:
            raise InvalidStateError(f"shots must be at least 1, got {shots}")
        self.shots = shots

    def evolve(
        self,
        initial: QubitState,
        params: KickedTopParams,
        n_kicks: int,
        rng: np.random.Generator,
    ) -> DensityMatrix:
        exact = super().evolve(initial, params, n_kicks, rng)
        return reconstruct(exact, self.shots, rng)

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "shots": self.shots}
