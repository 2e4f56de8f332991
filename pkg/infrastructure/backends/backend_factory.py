from typing import Optional
import logging

from application.interfaces import EvolutionBackend
from domain import CircuitLevel, InvalidStateError, NoiseConfig, SweepMode
from .exact_backend import ExactBackend
from .noisy_backend import NoisyBackend
from .shots_backend import DEFAULT_SHOTS, ShotsBackend

logger = logging.getLogger(__name__)


def create_backend(
    mode: SweepMode,
    shots: Optional[int] = None,
    noise: Optional[NoiseConfig] = None,
    level: CircuitLevel = CircuitLevel.ROTATION,
) -> EvolutionBackend:
    """
    Create the evolution backend for a sweep mode.

    Args:
        mode: exact, shots or noisy
        shots: shots per tomography basis (shots mode; optional in noisy mode)
        noise: depolarizing strengths, required in noisy mode
        level: circuit level the backends compile to

    Returns:
        EvolutionBackend: the configured backend

    Raises:
        InvalidStateError: if noisy mode is requested without a NoiseConfig
    """
    if mode is SweepMode.EXACT:
        backend: EvolutionBackend = ExactBackend(level)
    elif mode is SweepMode.SHOTS:
        backend = ShotsBackend(shots if shots is not None else DEFAULT_SHOTS, level)
    elif mode is SweepMode.NOISY:
        if noise is None:
            raise InvalidStateError("Noisy mode needs a NoiseConfig")
        backend = NoisyBackend(noise, shots, level)
    else:
        raise InvalidStateError(f"Unknown sweep mode {mode}")
    logger.debug(f"Created {type(backend).__name__} with {backend.describe()}")
    return backend
