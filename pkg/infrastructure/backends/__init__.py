from .backend_factory import create_backend
from .exact_backend import ExactBackend
from .noisy_backend import NoisyBackend
from .shots_backend import DEFAULT_SHOTS, ShotsBackend

__all__ = [
    'create_backend',
    'DEFAULT_SHOTS',
    'ExactBackend',
    'NoisyBackend',
    'ShotsBackend',
]
