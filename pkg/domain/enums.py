from enum import Enum


class GateKind(Enum):
    """Primitive gates understood by the simulator and the netlist format."""
    CNOT = "CNOT"
    X = "X"
    RZ = "RZ"
    RY = "RY"
    U1 = "U1"
    U3 = "U3"

    @property
    def n_qubits(self) -> int:
        """Number of qubits the gate acts on."""
        return 2 if self is GateKind.CNOT else 1

    @property
    def n_params(self) -> int:
        """Number of angle parameters carried by the gate."""
        return {
            GateKind.CNOT: 0,
            GateKind.X: 0,
            GateKind.RZ: 1,
            GateKind.RY: 1,
            GateKind.U1: 1,
            GateKind.U3: 3,
        }[self]

    @property
    def is_rotation(self) -> bool:
        """Indicates whether the gate is a parameterized single-qubit rotation."""
        return self.n_params > 0


class CircuitLevel(Enum):
    """Lowering stage of a compiled circuit."""
    TEMPLATE = "template"
    ROTATION = "rotation"
    IBMQ = "ibmq"

    @property
    def allowed_kinds(self) -> frozenset[GateKind]:
        """Gate kinds a sequence at this level may contain."""
        if self is CircuitLevel.IBMQ:
            return frozenset({GateKind.CNOT, GateKind.U1, GateKind.U3})
        return frozenset({GateKind.CNOT, GateKind.X, GateKind.RZ, GateKind.RY})


class SweepMode(Enum):
    """How the final state of every kick is obtained during a sweep."""
    EXACT = "exact"
    SHOTS = "shots"
    NOISY = "noisy"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


class Observable(Enum):
    """Quantities recorded in a SweepResult."""
    CONCURRENCE = "concurrence"
    AVERAGE_CONCURRENCE = "average_concurrence"
    FIDELITY = "fidelity"
    OSCS = "oscs"
