"""
Exception hierarchy shared by every layer of the toolkit.

Errors that describe bad input also derive from the matching builtin so that
callers catching ValueError or RuntimeError keep working.
"""

from typing import Iterable


class KickedTopError(Exception):
    """Base class for all toolkit errors."""


class InvalidStateError(KickedTopError, ValueError):
    """A value object was constructed with data violating its invariants."""


class NonUnitaryError(KickedTopError, ValueError):
    """A matrix handed to synthesis is not unitary within tolerance."""

    def __init__(self, deviation: float, tolerance: float) -> None:
        super().__init__(
            f"Matrix deviates from unitarity by {deviation:.3e} (tolerance {tolerance:.0e})"
        )
        self.deviation = deviation
        self.tolerance = tolerance


class DecompositionFailure(KickedTopError, RuntimeError):
    """Template reconstruction error exceeded its tolerance."""

    def __init__(self, error: float, tolerance: float) -> None:
        super().__init__(
            f"Two-qubit decomposition reconstructs with error {error:.3e} "
            f"(tolerance {tolerance:.0e})"
        )
        self.error = error
        self.tolerance = tolerance


class MissingBasis(KickedTopError, LookupError):
    """Tomography was asked to reconstruct a state without all nine bases."""

    def __init__(self, missing: Iterable[str]) -> None:
        self.missing = tuple(sorted(missing))
        super().__init__(f"Missing measurement bases: {', '.join(self.missing)}")


class SymmetryViolation(KickedTopError, ValueError):
    """A state carries weight outside the symmetric two-qubit subspace."""

    def __init__(self, singlet_overlap: float, tolerance: float) -> None:
        super().__init__(
            f"State has singlet overlap {singlet_overlap:.3e} above {tolerance:.0e}"
        )
        self.singlet_overlap = singlet_overlap


class ConsistencyError(KickedTopError, RuntimeError):
    """An internal numerical cross-check failed."""


class ConfigurationError(KickedTopError, ValueError):
    """Experiment configuration is malformed or out of range."""


class VerificationError(KickedTopError, RuntimeError):
    """A post-run verification of written artifacts failed."""
