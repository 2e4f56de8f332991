import logging
from typing import Any, Dict, Optional

import numpy as np

from application.interfaces import EvolutionBackend
from application.services.synthesis import compile_qkt
from domain import CircuitLevel, DensityMatrix, InvalidStateError, KickedTopParams, NoiseConfig, QubitState, SweepMode
from infrastructure.simulator import run_noisy
from infrastructure.tomography import reconstruct

logger = logging.getLogger(__name__)


class NoisyBackend(EvolutionBackend):
    """Depolarizing density-matrix execution of the compiled circuit.

    With `shots` set, the noisy state is additionally passed through simulated
    tomography; otherwise the exact noisy density matrix is returned.
    """

    mode = SweepMode.NOISY

    def __init__(
        self,
        noise: NoiseConfig,
        shots: Optional[int] = None,
        level: CircuitLevel = CircuitLevel.ROTATION,
    ) -> None:
        super().__init__(level)
        if shots is not None and shots < 1:
            raise InvalidStateError(f"shots must be at least 1, got {shots}")
        self.noise = noise
        self.shots = shots

    def evolve(
        self,
        initial: QubitState,
        params: KickedTopParams,
        n_kicks: int,
        rng: np.random.Generator,
    ) -> DensityMatrix:
        circuit = compile_qkt(params, n_kicks, self.level)
        rho = run_noisy(circuit, initial.to_density(), self.noise)
        if self.shots is None:
            return rho
        return reconstruct(rho, self.shots, rng)

    def describe(self) -> Dict[str, Any]:
        return {
            **super().describe(),
            "p1": self.noise.p1,
            "p2": self.noise.p2,
            "shots": self.shots,
        }
