from .enums import CircuitLevel, GateKind, Observable, OutputFormat, SweepMode
from .exceptions import (
    ConfigurationError,
    ConsistencyError,
    DecompositionFailure,
    InvalidStateError,
    KickedTopError,
    MissingBasis,
    NonUnitaryError,
    SymmetryViolation,
    VerificationError,
)
from .models import (
    DEFAULT_FIDELITY_KAPPAS,
    DEFAULT_FIDELITY_POINTS,
    OUTCOMES,
    PAULI_LABELS,
    SPIN_HALF,
    SPIN_ONE,
    AngularMomentumOps,
    ClassicalState,
    DensityMatrix,
    EulerZYZ,
    Gate,
    GateSequence,
    KickedTopParams,
    NoiseConfig,
    PhasePoint,
    QuantumState,
    QubitState,
    ShotRecord,
    SpinQuantumNumber,
    SpinState,
    SweepResult,
    TemplateBlock,
    TemplateDecomposition,
)

__all__ = [
    'DEFAULT_FIDELITY_KAPPAS',
    'DEFAULT_FIDELITY_POINTS',
    'OUTCOMES',
    'PAULI_LABELS',
    'CircuitLevel',
    'GateKind',
    'Observable',
    'OutputFormat',
    'SweepMode',
    'ConfigurationError',
    'ConsistencyError',
    'DecompositionFailure',
    'InvalidStateError',
    'KickedTopError',
    'MissingBasis',
    'NonUnitaryError',
    'SymmetryViolation',
    'VerificationError',
    'SPIN_HALF',
    'SPIN_ONE',
    'AngularMomentumOps',
    'ClassicalState',
    'DensityMatrix',
    'EulerZYZ',
    'Gate',
    'GateSequence',
    'KickedTopParams',
    'NoiseConfig',
    'PhasePoint',
    'QuantumState',
    'QubitState',
    'ShotRecord',
    'SpinQuantumNumber',
    'SpinState',
    'SweepResult',
    'TemplateBlock',
    'TemplateDecomposition',
]
