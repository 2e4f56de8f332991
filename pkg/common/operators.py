"""
Fixed single- and two-qubit matrices.

Conventions: |0> is spin up (Z eigenvalue +1), qubit 0 is the leftmost tensor
factor, so the two-qubit basis order is |00>, |01>, |10>, |11>.
"""

import math

import numpy as np

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULIS = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S_DAGGER = np.array([[1, 0], [0, -1j]], dtype=complex)

SIGMA_YY = np.kron(PAULI_Y, PAULI_Y)
SIGMA_ZZ = np.kron(PAULI_Z, PAULI_Z)

# Dicke isometry: columns are |00>, (|01>+|10>)/sqrt2, |11>  <->  |1,1>, |1,0>, |1,-1>
DICKE_ISOMETRY = np.array(
    [
        [1, 0, 0],
        [0, 1 / math.sqrt(2), 0],
        [0, 1 / math.sqrt(2), 0],
        [0, 0, 1],
    ],
    dtype=complex,
)

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)


def rz(angle: float) -> np.ndarray:
    """Rz(a) = exp(-i a Z / 2)."""
    return np.array(
        [[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex
    )


def ry(angle: float) -> np.ndarray:
    """Ry(a) = exp(-i a Y / 2)."""
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def u1(lam: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * lam)]], dtype=complex)


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (lam + phi)) * c],
        ],
        dtype=complex,
    )


def on_qubit(matrix: np.ndarray, qubit: int) -> np.ndarray:
    """Embed a 2x2 operator acting on `qubit` into the 4-dim space."""
    if qubit == 0:
        return np.kron(matrix, PAULI_I)
    return np.kron(PAULI_I, matrix)


def controlled(matrix: np.ndarray, control: int, target: int) -> np.ndarray:
    """|0><0|_c (x) I + |1><1|_c (x) V_t as a 4x4 matrix."""
    if control == target:
        raise ValueError("Control and target must differ")
    p0 = np.diag([1, 0]).astype(complex)
    p1 = np.diag([0, 1]).astype(complex)
    if control == 0:
        return np.kron(p0, PAULI_I) + np.kron(p1, matrix)
    return np.kron(PAULI_I, p0) + np.kron(matrix, p1)


CNOT_01 = controlled(PAULI_X, 0, 1)
CNOT_10 = controlled(PAULI_X, 1, 0)
