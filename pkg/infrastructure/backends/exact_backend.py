import logging

import numpy as np

from application.interfaces import EvolutionBackend
from application.services.synthesis import compile_qkt
from domain import KickedTopParams, QubitState, SweepMode
from infrastructure.simulator import run_circuit

logger = logging.getLogger(__name__)


class ExactBackend(EvolutionBackend):
    """Noiseless statevector execution of the compiled circuit."""

    mode = SweepMode.EXACT

    def evolve(
        self,
        initial: QubitState,
        params: KickedTopParams,
        n_kicks: int,
        rng: np.random.Generator,
    ) -> QubitState:
        return run_circuit(compile_qkt(params, n_kicks, self.level), initial)
