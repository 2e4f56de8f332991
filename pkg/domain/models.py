import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from common import operators
from common.linalg import hermiticity_error
from .enums import CircuitLevel, GateKind, Observable
from .exceptions import InvalidStateError

NORM_TOLERANCE = 1e-12
SPHERE_TOLERANCE = 1e-9
DENSITY_TOLERANCE = 1e-10
EIGENVALUE_FLOOR = -1e-9
RENORMALIZE_TOLERANCE = 1e-8

PAULI_LABELS = ("X", "Y", "Z")
OUTCOMES = ("00", "01", "10", "11")


def _frozen_array(values: Any, dtype: type = complex) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class SpinQuantumNumber:
    """Spin j stored as the integer 2j."""
    twice_j: int

    def __post_init__(self) -> None:
        if isinstance(self.twice_j, bool) or not isinstance(self.twice_j, (int, np.integer)):
            raise InvalidStateError("2j must be an integer")
        if self.twice_j < 1:
            raise InvalidStateError(f"2j must be positive, got {self.twice_j}")

    @classmethod
    def from_j(cls, j: Union[int, float, str, Fraction]) -> "SpinQuantumNumber":
        """Build from j itself, e.g. 1, 0.5, '3/2'."""
        twice = Fraction(j) * 2
        if twice.denominator != 1:
            raise InvalidStateError(f"j must be a half-integer, got {j}")
        return cls(int(twice))

    @property
    def j(self) -> float:
        return self.twice_j / 2

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    @property
    def m_values(self) -> np.ndarray:
        """m = j, j-1, ..., -j (index 0 is m = j)."""
        return (self.twice_j - 2 * np.arange(self.dim)) / 2

    def __str__(self) -> str:
        if self.twice_j % 2 == 0:
            return str(self.twice_j // 2)
        return f"{self.twice_j}/2"


SPIN_ONE = SpinQuantumNumber(2)
SPIN_HALF = SpinQuantumNumber(1)


@dataclass(frozen=True)
class PhasePoint:
    """Point (theta, phi) on the unit sphere; phi is reduced modulo 2 pi."""
    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise InvalidStateError("Angles must be finite")
        if self.theta < -1e-12 or self.theta > math.pi + 1e-12:
            raise InvalidStateError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "theta", min(max(self.theta, 0.0), math.pi))
        phi = math.fmod(self.phi, 2 * math.pi)
        if phi < 0:
            phi += 2 * math.pi
        if phi >= 2 * math.pi:
            phi = 0.0
        object.__setattr__(self, "phi", phi)


# initial points and kappas of the fidelity study
DEFAULT_FIDELITY_POINTS = (
    PhasePoint(2.25, 0.0),
    PhasePoint(math.pi / 2, math.pi / 2),
    PhasePoint(math.pi / 2, 0.0),
)
DEFAULT_FIDELITY_KAPPAS = (0.5, 2.5, 4.5, 6.5)


@dataclass(frozen=True)
class ClassicalState:
    """Classical angular momentum direction (X, Y, Z) on the unit sphere."""
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm = math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)
        if abs(norm - 1.0) > SPHERE_TOLERANCE:
            raise InvalidStateError(f"Classical state must lie on the unit sphere, |s| = {norm}")

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "ClassicalState":
        """Project an arbitrary non-zero vector onto the sphere."""
        v = np.asarray(vector, dtype=float)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise InvalidStateError("Cannot normalize the zero vector")
        v = v / norm
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)


@dataclass(frozen=True)
class KickedTopParams:
    """Parameters of the kicked top.

    `tau` is kept for bookkeeping only; the rotation angle per kick is `p`.
    """
    kappa: float
    p: float = math.pi / 2
    spin: SpinQuantumNumber = SPIN_ONE
    tau: float = 1.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.kappa):
            raise InvalidStateError("kappa must be finite")
        if self.kappa < 0:
            raise InvalidStateError(f"kappa must be non-negative, got {self.kappa}")
        if not math.isfinite(self.p):
            raise InvalidStateError("p must be finite")
        if self.tau != 1.0:
            raise InvalidStateError("Only tau = 1 is supported")


@dataclass(frozen=True)
class AngularMomentumOps:
    """Matrices Jx, Jy, Jz of spin j in the |j, m> basis (hbar = 1)."""
    spin: SpinQuantumNumber
    jx: np.ndarray = field(repr=False)
    jy: np.ndarray = field(repr=False)
    jz: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        for name in ("jx", "jy", "jz"):
            matrix = _frozen_array(getattr(self, name))
            if matrix.shape != (self.spin.dim, self.spin.dim):
                raise InvalidStateError(f"{name} has shape {matrix.shape}")
            if hermiticity_error(matrix) > NORM_TOLERANCE:
                raise InvalidStateError(f"{name} is not Hermitian")
            object.__setattr__(self, name, matrix)

    def commutator_error(self) -> float:
        """Max-entry deviation of [Jx, Jy] from i Jz."""
        comm = self.jx @ self.jy - self.jy @ self.jx
        return float(np.max(np.abs(comm - 1j * self.jz)))

    def casimir_error(self) -> float:
        """Max-entry deviation of J^2 from j(j+1) I."""
        j = self.spin.j
        casimir = self.jx @ self.jx + self.jy @ self.jy + self.jz @ self.jz
        return float(np.max(np.abs(casimir - j * (j + 1) * np.eye(self.spin.dim))))


@dataclass(frozen=True, eq=False)
class SpinState:
    """Normalized amplitude vector in the (2j+1)-dim space, index 0 <-> m = j."""
    spin: SpinQuantumNumber
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = _frozen_array(self.amplitudes)
        if amps.shape != (self.spin.dim,):
            raise InvalidStateError(
                f"Spin-{self.spin} state needs {self.spin.dim} amplitudes, got {amps.shape}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidStateError(f"Spin state is not normalized (|psi| = {norm})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, spin: SpinQuantumNumber, amplitudes: Any) -> "SpinState":
        """Renormalize numerically produced amplitudes that are already close to unit norm."""
        amps = np.asarray(amplitudes, dtype=complex)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > RENORMALIZE_TOLERANCE:
            raise InvalidStateError(f"Amplitudes too far from unit norm (|psi| = {norm})")
        return cls(spin, amps / norm)

    def overlap(self, other: "SpinState") -> float:
        """|<self|other>|, insensitive to global phase."""
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)))


@dataclass(frozen=True, eq=False)
class QubitState:
    """Two-qubit pure state, basis order |00>, |01>, |10>, |11>."""
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = _frozen_array(self.amplitudes)
        if amps.shape != (4,):
            raise InvalidStateError(f"Two-qubit state needs 4 amplitudes, got {amps.shape}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidStateError(f"Qubit state is not normalized (|psi| = {norm})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes: Any) -> "QubitState":
        amps = np.asarray(amplitudes, dtype=complex)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > RENORMALIZE_TOLERANCE:
            raise InvalidStateError(f"Amplitudes too far from unit norm (|psi| = {norm})")
        return cls(amps / norm)

    @classmethod
    def basis(cls, label: str) -> "QubitState":
        """Computational basis state from a label such as '01'."""
        if label not in OUTCOMES:
            raise InvalidStateError(f"Unknown basis label '{label}'")
        amps = np.zeros(4, dtype=complex)
        amps[int(label, 2)] = 1.0
        return cls(amps)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "QubitState") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Two-qubit mixed state."""
    entries: np.ndarray

    def __post_init__(self) -> None:
        rho = np.array(self.entries, dtype=complex)
        if rho.shape != (4, 4):
            raise InvalidStateError(f"Density matrix must be 4x4, got {rho.shape}")
        if hermiticity_error(rho) > DENSITY_TOLERANCE:
            raise InvalidStateError("Density matrix is not Hermitian")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > DENSITY_TOLERANCE:
            raise InvalidStateError(f"Density matrix trace is {trace}, expected 1")
        rho = 0.5 * (rho + rho.conj().T)
        if float(np.linalg.eigvalsh(rho).min()) < EIGENVALUE_FLOOR:
            raise InvalidStateError("Density matrix has negative eigenvalues")
        object.__setattr__(self, "entries", _frozen_array(rho))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(np.eye(4, dtype=complex) / 4)

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


QuantumState = Union[QubitState, DensityMatrix]


@dataclass(frozen=True)
class NoiseConfig:
    """Depolarizing strengths per single-qubit gate (p1) and per CNOT (p2)."""
    p1: float = 0.0
    p2: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("p1", "p2"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise InvalidStateError(f"{name} must lie in [0, 1], got {value}")

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0


@dataclass(frozen=True)
class ShotRecord:
    """Measurement counts of one Pauli-pair basis."""
    basis: str
    counts: Mapping[str, int]
    shots: int

    def __post_init__(self) -> None:
        if len(self.basis) != 2 or any(label not in PAULI_LABELS for label in self.basis):
            raise InvalidStateError(f"Basis must be a pair from X/Y/Z, got '{self.basis}'")
        if self.shots < 1:
            raise InvalidStateError("shots must be at least 1")
        counts = {outcome: int(self.counts.get(outcome, 0)) for outcome in OUTCOMES}
        unknown = set(self.counts) - set(OUTCOMES)
        if unknown:
            raise InvalidStateError(f"Unknown outcomes {sorted(unknown)}")
        if any(value < 0 for value in counts.values()):
            raise InvalidStateError("Counts must be non-negative")
        if sum(counts.values()) != self.shots:
            raise InvalidStateError(
                f"Counts sum to {sum(counts.values())}, expected {self.shots}"
            )
        object.__setattr__(self, "counts", counts)

    def probabilities(self) -> Dict[str, float]:
        return {outcome: count / self.shots for outcome, count in self.counts.items()}

    def to_dict(self) -> Dict[str, Any]:
        return {"basis": self.basis, "shots": self.shots, "counts": dict(self.counts)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ShotRecord":
        return cls(basis=data["basis"], counts=data["counts"], shots=int(data["shots"]))


@dataclass(frozen=True)
class EulerZYZ:
    """w = exp(i delta) Rz(alpha) Ry(theta) Rz(beta)."""
    alpha: float
    beta: float
    theta: float
    delta: float

    def special_unitary(self) -> np.ndarray:
        """The SU(2) factor Rz(alpha) Ry(theta) Rz(beta)."""
        return operators.rz(self.alpha) @ operators.ry(self.theta) @ operators.rz(self.beta)

    def matrix(self) -> np.ndarray:
        return np.exp(1j * self.delta) * self.special_unitary()


@dataclass(frozen=True)
class Gate:
    """A primitive gate. `qubits` is (qubit,) or (control, target) for CNOT."""
    kind: GateKind
    qubits: Tuple[int, ...]
    params: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        qubits = tuple(int(q) for q in self.qubits)
        params = tuple(float(a) for a in self.params)
        if len(qubits) != self.kind.n_qubits:
            raise InvalidStateError(
                f"{self.kind.value} acts on {self.kind.n_qubits} qubit(s), got {qubits}"
            )
        if any(q not in (0, 1) for q in qubits):
            raise InvalidStateError(f"Qubit index out of range in {self.kind.value} {qubits}")
        if self.kind is GateKind.CNOT and qubits[0] == qubits[1]:
            raise InvalidStateError("CNOT control and target must differ")
        if len(params) != self.kind.n_params:
            raise InvalidStateError(
                f"{self.kind.value} takes {self.kind.n_params} parameter(s), got {len(params)}"
            )
        if not all(math.isfinite(a) for a in params):
            raise InvalidStateError(f"Non-finite angle in {self.kind.value}")
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "params", params)

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def x(cls, qubit: int) -> "Gate":
        return cls(GateKind.X, (qubit,))

    @classmethod
    def rz(cls, qubit: int, angle: float) -> "Gate":
        return cls(GateKind.RZ, (qubit,), (angle,))

    @classmethod
    def ry(cls, qubit: int, angle: float) -> "Gate":
        return cls(GateKind.RY, (qubit,), (angle,))

    @classmethod
    def u1(cls, qubit: int, lam: float) -> "Gate":
        return cls(GateKind.U1, (qubit,), (lam,))

    @classmethod
    def u3(cls, qubit: int, theta: float, phi: float, lam: float) -> "Gate":
        return cls(GateKind.U3, (qubit,), (theta, phi, lam))

    @property
    def is_two_qubit(self) -> bool:
        return self.kind.n_qubits == 2

    @cached_property
    def single_qubit_matrix(self) -> np.ndarray:
        """2x2 matrix of a single-qubit gate."""
        if self.kind is GateKind.X:
            return operators.PAULI_X
        if self.kind is GateKind.RZ:
            return operators.rz(self.params[0])
        if self.kind is GateKind.RY:
            return operators.ry(self.params[0])
        if self.kind is GateKind.U1:
            return operators.u1(self.params[0])
        if self.kind is GateKind.U3:
            return operators.u3(*self.params)
        raise InvalidStateError(f"{self.kind.value} is not a single-qubit gate")

    @cached_property
    def matrix(self) -> np.ndarray:
        """4x4 matrix of the gate on the two-qubit register."""
        if self.kind is GateKind.CNOT:
            return operators.CNOT_01 if self.qubits == (0, 1) else operators.CNOT_10
        return operators.on_qubit(self.single_qubit_matrix, self.qubits[0])

    def is_identity(self, tolerance: float = 1e-12) -> bool:
        """True for rotations that act as the identity up to global phase."""
        if not self.kind.is_rotation:
            return False
        m = self.single_qubit_matrix
        return abs(m[0, 1]) < tolerance and abs(m[1, 0]) < tolerance and abs(m[1, 1] / m[0, 0] - 1) < tolerance


@dataclass(frozen=True)
class GateSequence:
    """Ordered gates on two qubits; gates[0] is applied first."""
    gates: Tuple[Gate, ...]
    level: CircuitLevel

    def __post_init__(self) -> None:
        gates = tuple(self.gates)
        if self.level is CircuitLevel.TEMPLATE:
            raise InvalidStateError("Template blocks are not a gate sequence")
        disallowed = {g.kind for g in gates} - self.level.allowed_kinds
        if disallowed:
            names = ", ".join(sorted(k.value for k in disallowed))
            raise InvalidStateError(f"Gates {names} not allowed at {self.level.value} level")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: "GateSequence") -> "GateSequence":
        if other.level is not self.level:
            raise InvalidStateError("Cannot join sequences of different levels")
        return GateSequence(self.gates + other.gates, self.level)

    @classmethod
    def empty(cls, level: CircuitLevel = CircuitLevel.ROTATION) -> "GateSequence":
        return cls((), level)

    @property
    def cnot_count(self) -> int:
        return sum(1 for g in self.gates if g.is_two_qubit)

    @property
    def single_qubit_count(self) -> int:
        return len(self.gates) - self.cnot_count

    def counts(self) -> Dict[str, int]:
        """Gate counts: total, cnot, single_qubit and one entry per kind."""
        result = {"total": len(self.gates), "cnot": self.cnot_count, "single_qubit": self.single_qubit_count}
        for kind in GateKind:
            result[kind.value] = sum(1 for g in self.gates if g.kind is kind)
        return result


AxisValues = Union[np.ndarray, Sequence[Any]]


@dataclass(eq=False)
class SweepResult:
    """Observable values over one or more parameter axes.

    `fixed` holds scalar parameters written as constant CSV columns; `metadata`
    holds everything else (seeds, shots, noise, level).
    """
    observable: Observable
    axes: List[Tuple[str, AxisValues]]
    values: np.ndarray
    fixed: Dict[str, Any] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        expected = tuple(len(values) for _, values in self.axes)
        if self.values.shape != expected:
            raise InvalidStateError(
                f"Values shape {self.values.shape} does not match axes {expected}"
            )
        if self.values.size and (self.values.min() < -1e-9 or self.values.max() > 1 + 1e-9):
            raise InvalidStateError(f"{self.observable.value} values must lie in [0, 1]")
        self.values = np.clip(self.values, 0.0, 1.0)

    @property
    def axis_names(self) -> List[str]:
        return [name for name, _ in self.axes]

    def axis(self, name: str) -> AxisValues:
        for axis_name, values in self.axes:
            if axis_name == name:
                return values
        raise KeyError(name)

    def cells(self) -> Iterator[Tuple[Tuple[Any, ...], float]]:
        """Yield (axis values, value) in row-major order."""
        for index in np.ndindex(*self.values.shape):
            coords = tuple(self.axes[d][1][i] for d, i in enumerate(index))
            yield coords, float(self.values[index])


@dataclass(frozen=True)
class TemplateBlock:
    """One factor V_i of the six-block template; `control` is None when uncontrolled."""
    index: int
    matrix: np.ndarray = field(repr=False)
    target: int
    control: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen_array(self.matrix))
        if self.control is not None and self.control == self.target:
            raise InvalidStateError("Block control and target must differ")

    @property
    def is_controlled(self) -> bool:
        return self.control is not None

    def unitary(self) -> np.ndarray:
        """4x4 matrix of the block."""
        if self.control is None:
            return operators.on_qubit(self.matrix, self.target)
        return operators.controlled(self.matrix, self.control, self.target)


@dataclass(frozen=True)
class TemplateDecomposition:
    """U = U1 U2 U3 U4 U5 U6 with blocks stored as V1..V6 (V6 acts first)."""
    blocks: Tuple[TemplateBlock, ...]
    level: CircuitLevel = CircuitLevel.TEMPLATE

    def __post_init__(self) -> None:
        if [b.index for b in self.blocks] != [1, 2, 3, 4, 5, 6]:
            raise InvalidStateError("Template needs blocks V1..V6 in order")

    def in_time_order(self) -> Tuple[TemplateBlock, ...]:
        return tuple(reversed(self.blocks))

    def unitary(self) -> np.ndarray:
        result = np.eye(4, dtype=complex)
        for block in self.blocks:
            result = result @ block.unitary()
        return result
