"""
Two-qubit unitary synthesis.

An arbitrary 4x4 unitary is factored into the fixed six-block template

    U = (I (x) V1) . C0(V2) . (V3 (x) I) . C0(V4) . C1(V5) . C0(V6)

where Ck(V) is V on the other qubit controlled by qubit k, and every block is
then lowered either to CNOT + Rz/Ry/X rotations (46 gates, 8 CNOTs) or to
CNOT + U1/U3 gates (26 gates, 8 CNOTs). The gate count never depends on the
input, which is what lets U^N be executed at constant depth.

The template factors are found by Givens eliminations on the columns of U:
I (x) G1, C0(G2) and G3 (x) I reduce column 0 to e0, C0(G4) and C1(G5) reduce
column 1 to e1, and the remaining 2x2 block is V6.
"""

import logging
import math
from functools import lru_cache
from typing import Any, List, Mapping, Optional

import numpy as np

from common import operators
from common.linalg import nearest_unitary, phase_aligned_error, unitarity_error
from domain import (
    SPIN_ONE,
    CircuitLevel,
    DecompositionFailure,
    EulerZYZ,
    Gate,
    GateKind,
    GateSequence,
    InvalidStateError,
    KickedTopParams,
    NonUnitaryError,
    TemplateBlock,
    TemplateDecomposition,
)
from .floquet import effective_unitary

logger = logging.getLogger(__name__)

UNITARY_TOLERANCE = 1e-8
RECONSTRUCTION_TOLERANCE = 1e-8
DEGENERATE_TOLERANCE = 1e-12

CNOT_COUNT = 8
ROTATION_GATE_COUNT = 46
IBMQ_GATE_COUNT = 26


def canonical_angle(angle: float) -> float:
    """Reduce an angle modulo 4 pi into (-2 pi, 2 pi]."""
    reduced = math.fmod(angle, 4 * math.pi)
    if reduced <= -2 * math.pi:
        reduced += 4 * math.pi
    elif reduced > 2 * math.pi:
        reduced -= 4 * math.pi
    return reduced


def _check_unitary(matrix: np.ndarray, dim: int) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (dim, dim):
        raise InvalidStateError(f"Expected a {dim}x{dim} matrix, got {matrix.shape}")
    deviation = unitarity_error(matrix)
    if deviation > UNITARY_TOLERANCE:
        raise NonUnitaryError(deviation, UNITARY_TOLERANCE)
    return matrix


def zyz_decompose(w: np.ndarray) -> EulerZYZ:
    """Euler angles with w = e^{i delta} Rz(alpha) Ry(theta) Rz(beta).

    theta is in [0, pi] and delta in (-pi/2, pi/2]. When theta is 0 or pi the
    split between alpha and beta is not unique and beta is set to 0.

    Raises:
        NonUnitaryError: if w deviates from unitarity by more than 1e-8
    """
    w = _check_unitary(w, 2)
    delta = float(np.angle(np.linalg.det(w))) / 2
    su = w * np.exp(-1j * delta)
    a, b = su[0, 0], su[1, 0]
    theta = 2 * math.atan2(abs(b), abs(a))
    if abs(b) < DEGENERATE_TOLERANCE:
        alpha, beta = -2 * float(np.angle(a)), 0.0
    elif abs(a) < DEGENERATE_TOLERANCE:
        alpha, beta = 2 * float(np.angle(b)), 0.0
    else:
        plus = -2 * float(np.angle(a))
        minus = 2 * float(np.angle(b))
        alpha, beta = (plus + minus) / 2, (plus - minus) / 2
    return EulerZYZ(
        alpha=canonical_angle(alpha),
        beta=canonical_angle(beta),
        theta=theta,
        delta=delta,
    )


def _abc_factors(euler: EulerZYZ) -> List[np.ndarray]:
    """C, B, A with A X B X C = Rz(alpha) Ry(theta) Rz(beta) and A B C = I."""
    c = operators.rz((euler.beta - euler.alpha) / 2)
    b = operators.ry(-euler.theta / 2) @ operators.rz(-(euler.alpha + euler.beta) / 2)
    a = operators.rz(euler.alpha) @ operators.ry(euler.theta / 2)
    return [c, b, a]


def _u3_gate(qubit: int, matrix: np.ndarray) -> Gate:
    euler = zyz_decompose(matrix)
    return Gate.u3(qubit, euler.theta, euler.alpha, euler.beta)


def _rotation_pattern(euler: EulerZYZ, target: int, flip: List[Gate]) -> List[Gate]:
    """Rz, flip, Rz, Ry, flip, Ry, Rz on `target`; `flip` is a CNOT or an X."""
    alpha, beta, theta = euler.alpha, euler.beta, euler.theta
    return [
        Gate.rz(target, canonical_angle((beta - alpha) / 2)),
        flip[0],
        Gate.rz(target, canonical_angle(-(alpha + beta) / 2)),
        Gate.ry(target, canonical_angle(-theta / 2)),
        flip[1],
        Gate.ry(target, canonical_angle(theta / 2)),
        Gate.rz(target, canonical_angle(alpha)),
    ]


def lower_controlled(
    v: np.ndarray, control: int, target: int, level: CircuitLevel = CircuitLevel.ROTATION
) -> GateSequence:
    """Lower |0><0| (x) I + |1><1| (x) V to two CNOTs plus single-qubit gates.

    V = e^{i delta} W with W in SU(2). W uses the two-CNOT pattern; the phase
    becomes Rz(delta) (rotation level) or U1(delta) (IBMQ level) on the control.
    """
    if control == target:
        raise InvalidStateError("Control and target must differ")
    euler = zyz_decompose(v)
    cnots = [Gate.cnot(control, target), Gate.cnot(control, target)]
    if level is CircuitLevel.ROTATION:
        gates = _rotation_pattern(euler, target, cnots)
        gates.append(Gate.rz(control, canonical_angle(euler.delta)))
    elif level is CircuitLevel.IBMQ:
        c, b, a = _abc_factors(euler)
        gates = [
            _u3_gate(target, c),
            cnots[0],
            _u3_gate(target, b),
            cnots[1],
            _u3_gate(target, a),
            Gate.u1(control, canonical_angle(euler.delta)),
        ]
    else:
        raise InvalidStateError(f"Cannot lower to {level.value} level")
    return GateSequence(tuple(gates), level)


def lower_uncontrolled(
    v: np.ndarray, target: int, level: CircuitLevel = CircuitLevel.ROTATION
) -> GateSequence:
    """Lower a single-qubit V on `target`; its phase is global and dropped.

    Rotation level emits 5 rotations and 2 X gates, IBMQ level a single U3.
    """
    euler = zyz_decompose(v)
    if level is CircuitLevel.ROTATION:
        gates = _rotation_pattern(euler, target, [Gate.x(target), Gate.x(target)])
    elif level is CircuitLevel.IBMQ:
        gates = [Gate.u3(target, euler.theta, euler.alpha, euler.beta)]
    else:
        raise InvalidStateError(f"Cannot lower to {level.value} level")
    return GateSequence(tuple(gates), level)


def _givens(a: complex, b: complex) -> np.ndarray:
    """SU(2) matrix G with G [a, b]^T = [r, 0]^T, r = sqrt(|a|^2 + |b|^2)."""
    r = math.hypot(abs(a), abs(b))
    if r == 0.0:
        return np.eye(2, dtype=complex)
    return np.array([[np.conj(a), np.conj(b)], [-b, a]], dtype=complex) / r


def _annihilate_first(a: complex, b: complex) -> np.ndarray:
    """Unitary G with G [a, b]^T = [0, r]^T."""
    if a == 0:
        return np.eye(2, dtype=complex)
    return operators.PAULI_X @ _givens(a, b)


def template_decompose(u: np.ndarray) -> TemplateDecomposition:
    """Factor a two-qubit unitary into the six template blocks.

    Args:
        u: 4x4 unitary

    Returns:
        TemplateDecomposition: V1 on qubit 1, C0(V2), V3 on qubit 0, C0(V4),
        C1(V5), C0(V6); V6 acts first

    Raises:
        NonUnitaryError: if u is not unitary
        DecompositionFailure: if the blocks do not reproduce u within 1e-8
    """
    u = _check_unitary(u, 4)
    w = u.copy()

    g1 = _givens(w[0, 0], w[1, 0])
    w = operators.on_qubit(g1, 1) @ w
    g2 = _givens(w[2, 0], w[3, 0])
    w = operators.controlled(g2, 0, 1) @ w
    g3 = _givens(w[0, 0], w[2, 0])
    w = operators.on_qubit(g3, 0) @ w

    g4 = _annihilate_first(w[2, 1], w[3, 1])
    w = operators.controlled(g4, 0, 1) @ w
    g5 = _givens(w[1, 1], w[3, 1])
    w = operators.controlled(g5, 1, 0) @ w

    v6 = nearest_unitary(w[2:, 2:])

    decomposition = TemplateDecomposition(
        (
            TemplateBlock(1, g1.conj().T, target=1),
            TemplateBlock(2, g2.conj().T, target=1, control=0),
            TemplateBlock(3, g3.conj().T, target=0),
            TemplateBlock(4, g4.conj().T, target=1, control=0),
            TemplateBlock(5, g5.conj().T, target=0, control=1),
            TemplateBlock(6, v6, target=1, control=0),
        )
    )
    error = phase_aligned_error(decomposition.unitary(), u)
    if error > RECONSTRUCTION_TOLERANCE:
        raise DecompositionFailure(error, RECONSTRUCTION_TOLERANCE)
    return decomposition


def lower_template(decomposition: TemplateDecomposition, level: CircuitLevel) -> GateSequence:
    """Concatenate the lowered blocks in time order (V6 first)."""
    gates: List[Gate] = []
    for block in decomposition.in_time_order():
        if block.control is not None:
            lowered = lower_controlled(block.matrix, block.control, block.target, level)
        else:
            lowered = lower_uncontrolled(block.matrix, block.target, level)
        gates.extend(lowered.gates)
    return GateSequence(tuple(gates), level)


def sequence_unitary(sequence: GateSequence) -> np.ndarray:
    """Dense 4x4 matrix of a gate sequence."""
    result = np.eye(4, dtype=complex)
    for gate in sequence:
        result = gate.matrix @ result
    return result


def reconstruction_error(sequence: GateSequence, u: np.ndarray) -> float:
    """Phase-aligned max-entry distance between a sequence and a target unitary."""
    return phase_aligned_error(sequence_unitary(sequence), np.asarray(u, dtype=complex))


def compile_2q(u: np.ndarray, level: CircuitLevel = CircuitLevel.ROTATION) -> GateSequence:
    """Compile any two-qubit unitary to a fixed-size gate sequence.

    Args:
        u: 4x4 unitary
        level: ROTATION (46 gates) or IBMQ (26 gates); 8 CNOTs either way

    Returns:
        GateSequence: circuit equal to u up to global phase

    Raises:
        DecompositionFailure: if the compiled circuit misses u by more than 1e-8
    """
    if level is CircuitLevel.TEMPLATE:
        raise InvalidStateError("Use template_decompose for the template level")
    decomposition = template_decompose(u)
    sequence = lower_template(decomposition, level)
    error = reconstruction_error(sequence, u)
    if error > RECONSTRUCTION_TOLERANCE:
        raise DecompositionFailure(error, RECONSTRUCTION_TOLERANCE)
    logger.debug(f"Compiled {level.value} circuit with {len(sequence)} gates, error {error:.2e}")
    return sequence


@lru_cache(maxsize=16384)
def _compile_cached(kappa: float, p: float, n_kicks: int, level: CircuitLevel) -> GateSequence:
    return compile_2q(effective_unitary(KickedTopParams(kappa=kappa, p=p), n_kicks), level)


def compile_qkt(
    params: KickedTopParams, n_kicks: int, level: CircuitLevel = CircuitLevel.ROTATION
) -> GateSequence:
    """Circuit for N kicks of the j = 1 top: compile_2q(U^N).

    Circuits are memoized per (kappa, p, N, level), so sweeps sharing kappa
    compile every U^N once.
    """
    if params.spin != SPIN_ONE:
        raise InvalidStateError(f"Circuit synthesis needs j = 1, got j = {params.spin}")
    if n_kicks < 0:
        raise InvalidStateError(f"n_kicks must be non-negative, got {n_kicks}")
    return _compile_cached(params.kappa, params.p, n_kicks, level)


def prune_identities(sequence: GateSequence) -> GateSequence:
    """Drop rotations equal to the identity up to phase (breaks the fixed count)."""
    return GateSequence(tuple(g for g in sequence if not g.is_identity()), sequence.level)


def to_netlist(sequence: GateSequence, header: Optional[Mapping[str, Any]] = None) -> str:
    """One gate per line; angles with 17 significant digits; header as comments."""
    lines = [f"# {key} = {value}" for key, value in (header or {}).items()]
    lines.append(f"# level = {sequence.level.value}")
    for gate in sequence:
        fields = [gate.kind.value, *(str(q) for q in gate.qubits)]
        fields.extend(f"{angle:.17g}" for angle in gate.params)
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def parse_netlist(text: str) -> GateSequence:
    """Parse the netlist format written by to_netlist.

    Raises:
        InvalidStateError: on unknown gates or malformed lines
    """
    gates: List[Gate] = []
    level: Optional[CircuitLevel] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            if key.strip() == "level":
                level = CircuitLevel(value.strip())
            continue
        tokens = line.split()
        try:
            kind = GateKind(tokens[0])
            qubits = tuple(int(t) for t in tokens[1:1 + kind.n_qubits])
            params = tuple(float(t) for t in tokens[1 + kind.n_qubits:])
            gates.append(Gate(kind, qubits, params))
        except (ValueError, IndexError) as e:
            raise InvalidStateError(f"Malformed netlist line {number}: '{line}' ({e})") from e
    if level is None:
        ibmq = any(g.kind in (GateKind.U1, GateKind.U3) for g in gates)
        level = CircuitLevel.IBMQ if ibmq else CircuitLevel.ROTATION
    return GateSequence(tuple(gates), level)
