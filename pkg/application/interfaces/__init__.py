from .evolution_backend import CellExecutor, EvolutionBackend

__all__ = [
    'CellExecutor',
    'EvolutionBackend',
]
