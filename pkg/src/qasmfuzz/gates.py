"""Built-in gate vocabulary: signatures, matrices, and inverse tables.

The vocabulary is the closed set of gates every adapter in this repo
understands.  Matrices follow the usual conventions: qubit 0 is the least
significant bit of a basis index, controls come first in an operand list,
and controlled gates act when all controls are |1>.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

# name -> (number of angle parameters, number of qubit operands)
GATE_SIGNATURES: dict[str, tuple[int, int]] = {
    "h": (0, 1),
    "x": (0, 1),
    "y": (0, 1),
    "z": (0, 1),
    "s": (0, 1),
    "sdg": (0, 1),
    "t": (0, 1),
    "tdg": (0, 1),
    "sx": (0, 1),
    "id": (0, 1),
    "rx": (1, 1),
    "ry": (1, 1),
    "rz": (1, 1),
    "p": (1, 1),
    "u1": (1, 1),
    "u2": (2, 1),
    "u3": (3, 1),
    "cx": (0, 2),
    "cy": (0, 2),
    "cz": (0, 2),
    "ch": (0, 2),
    "swap": (0, 2),
    "crx": (1, 2),
    "cry": (1, 2),
    "crz": (1, 2),
    "cp": (1, 2),
    "cu": (4, 2),
    "rxx": (1, 2),
    "ccx": (0, 3),
    "cswap": (0, 3),
    "c3x": (0, 4),
    "c4x": (0, 5),
}

# barrier is a statement, not a gate application; it takes no params and
# one or more qubit operands.
BARRIER = "barrier"

BUILTIN_GATES = frozenset(GATE_SIGNATURES)

# Gates that are their own inverse (parameterless).
SELF_INVERSE = frozenset(
    {"h", "x", "y", "z", "id", "cx", "cy", "cz", "ch", "swap", "ccx", "cswap", "c3x", "c4x"}
)

# Parameterless gates cancelled by a distinct partner.
DAGGER_PAIRS = {"s": "sdg", "sdg": "s", "t": "tdg", "tdg": "t"}

# One-parameter gates where g(a) * g(-a) == identity.
NEGATION_CANCELS = frozenset({"rx", "ry", "rz", "p", "u1", "crx", "cry", "crz", "cp", "rxx"})

# Rotation families merged by angle addition: g(a) * g(b) == g(a + b).
ROTATION_MERGE = frozenset({"rx", "ry", "rz", "p", "u1", "crx", "cry", "crz", "cp", "rxx"})


def num_params(name: str) -> int:
    return GATE_SIGNATURES[name][0]


def num_qubits(name: str) -> int:
    return GATE_SIGNATURES[name][1]


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def controlled(u: np.ndarray, num_controls: int) -> np.ndarray:
    """Embed ``u`` as a multi-controlled gate.

    Operand convention: controls occupy the low bit positions (gate qubits
    0..num_controls-1), targets the high positions.  The result applies
    ``u`` on the target block iff every control bit is 1.
    """
    tdim = u.shape[0]
    cdim = 1 << num_controls
    full = np.eye(cdim * tdim, dtype=complex)
    ones = cdim - 1
    for r in range(tdim):
        for c in range(tdim):
            full[r * cdim + ones, c * cdim + ones] = u[r, c]
    return full


_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED: dict[str, np.ndarray] = {
    "h": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.diag([1, -1]).astype(complex),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
    "t": np.diag([1, np.exp(1j * math.pi / 4)]),
    "tdg": np.diag([1, np.exp(-1j * math.pi / 4)]),
    "sx": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    "id": np.eye(2, dtype=complex),
    "swap": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}


def _rx(theta: float) -> np.ndarray:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(theta: float) -> np.ndarray:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def _phase(lam: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * lam)]).astype(complex)


def _rxx(theta: float) -> np.ndarray:
    c = math.cos(theta / 2.0)
    s = -1j * math.sin(theta / 2.0)
    m = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        m[i, i] = c
        m[i, 3 - i] = s
    return m


@lru_cache(maxsize=None)
def _cached_fixed(name: str) -> np.ndarray:
    if name in _FIXED:
        return _FIXED[name]
    if name == "ccx":
        return controlled(_FIXED["x"], 2)
    if name == "c3x":
        return controlled(_FIXED["x"], 3)
    if name == "c4x":
        return controlled(_FIXED["x"], 4)
    if name == "cswap":
        return controlled(_FIXED["swap"], 1)
    if name in ("cx", "cy", "cz", "ch"):
        return controlled(_FIXED[name[1:]], 1)
    raise KeyError(name)


def gate_matrix(name: str, params: tuple[float, ...] = ()) -> np.ndarray:
    """Unitary for one gate application, in the gate's own operand order."""
    n_par, _ = GATE_SIGNATURES[name]
    if len(params) != n_par:
        raise ValueError(f"'{name}' takes {n_par} parameters but {len(params)} were given")
    if n_par == 0:
        return _cached_fixed(name)
    if name == "rx":
        return _rx(params[0])
    if name == "ry":
        return _ry(params[0])
    if name == "rz":
        return _rz(params[0])
    if name in ("p", "u1"):
        return _phase(params[0])
    if name == "u2":
        return u3_matrix(math.pi / 2.0, params[0], params[1])
    if name == "u3":
        return u3_matrix(*params)
    if name == "crx":
        return controlled(_rx(params[0]), 1)
    if name == "cry":
        return controlled(_ry(params[0]), 1)
    if name == "crz":
        return controlled(_rz(params[0]), 1)
    if name == "cp":
        return controlled(_phase(params[0]), 1)
    if name == "cu":
        theta, phi, lam, gamma = params
        return controlled(np.exp(1j * gamma) * u3_matrix(theta, phi, lam), 1)
    if name == "rxx":
        return _rxx(params[0])
    raise KeyError(name)
