"""Flat circuit representation and exact unitary semantics.

A :class:`Circuit` is a list of builtin gate applications over flat qubit
indices.  Lowering a program concatenates its quantum registers in
declaration order, inlines custom gate definitions, and drops barriers;
raising emits the circuit back as builtin statements.

Unitary convention: qubit 0 is the least significant bit of a basis index,
and for ops ``[g1, g2, ...]`` the circuit unitary is ``... @ U(g2) @ U(g1)``
(the later gate multiplies on the left).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qasm
from .gates import BARRIER, GATE_SIGNATURES, gate_matrix

DEFAULT_MAX_QUBITS = 8


class LoweringError(Exception):
    """A structurally invalid program cannot be lowered."""


class TooLargeError(Exception):
    """Unitary construction refused: the circuit exceeds the qubit limit."""


@dataclass(frozen=True)
class GateApp:
    """One builtin gate over flat qubit indices; params are plain floats."""

    kind: str
    params: tuple[float, ...]
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    ops: tuple[GateApp, ...]
    # flat index -> (source register name, index within register)
    source_register_map: tuple[tuple[str, int], ...] = field(default=())

    def __post_init__(self):
        for op in self.ops:
            if op.kind not in GATE_SIGNATURES:
                raise ValueError(f"unknown gate kind '{op.kind}'")
            n_par, n_q = GATE_SIGNATURES[op.kind]
            if len(op.params) != n_par or len(op.qubits) != n_q:
                raise ValueError(f"bad arity for '{op.kind}'")
            if len(set(op.qubits)) != len(op.qubits):
                raise ValueError(f"repeated qubit in '{op.kind}'")
            if any(q < 0 or q >= self.num_qubits for q in op.qubits):
                raise ValueError(f"qubit index out of range in '{op.kind}'")


def gate_count(circuit: Circuit) -> int:
    return len(circuit.ops)


def unique_gate_count(circuit: Circuit) -> int:
    """Number of distinct gate kinds used (a kind is counted once however
    many times it appears)."""
    return len({op.kind for op in circuit.ops})


# ---------------------------------------------------------------------------
# Lowering / raising
# ---------------------------------------------------------------------------


def lower(program: qasm.QasmProgram) -> Circuit:
    """Flatten a program to a Circuit.

    Quantum registers are concatenated in declaration order; gate
    definitions are inlined with their arguments and parameters bound;
    barriers are dropped.
    """
    flat: dict[tuple[str, int], int] = {}
    reg_map: list[tuple[str, int]] = []
    for name, size in program.qregs:
        for i in range(size):
            if (name, i) in flat:
                raise LoweringError(f"duplicate register name '{name}'")
            flat[(name, i)] = len(reg_map)
            reg_map.append((name, i))

    defs = {gd.name: gd for gd in program.gate_defs}
    ops: list[GateApp] = []
    for stmt in program.statements:
        if stmt.gate_name == BARRIER:
            continue
        try:
            qubits = tuple(flat[op] for op in stmt.operands)
        except KeyError as e:
            raise LoweringError(f"operand {e.args[0]} references no declared qubit") from None
        if stmt.gate_name in GATE_SIGNATURES:
            n_par, n_q = GATE_SIGNATURES[stmt.gate_name]
            if len(stmt.params) != n_par or len(qubits) != n_q:
                raise LoweringError(f"bad arity for '{stmt.gate_name}'")
            ops.append(
                GateApp(stmt.gate_name, tuple(p.value for p in stmt.params), qubits)
            )
        elif stmt.gate_name in defs:
            gd = defs[stmt.gate_name]
            if len(stmt.params) != len(gd.params) or len(qubits) != len(gd.args):
                raise LoweringError(f"bad arity for '{stmt.gate_name}'")
            env = dict(zip(gd.params, (p.value for p in stmt.params)))
            binding = dict(zip(gd.args, qubits))
            for b in gd.body:
                if b.gate_name == BARRIER:
                    continue
                try:
                    bound_params = tuple(float(e.eval(env)) for e in b.params)
                except KeyError as e:
                    raise LoweringError(
                        f"'{e.args[0]}' is not a parameter of gate '{gd.name}'"
                    ) from None
                ops.append(
                    GateApp(
                        b.gate_name,
                        bound_params,
                        tuple(binding[a] for a in b.operands),
                    )
                )
        else:
            raise LoweringError(f"'{stmt.gate_name}' is not defined in this scope")
    try:
        return Circuit(
            num_qubits=len(reg_map), ops=tuple(ops), source_register_map=tuple(reg_map)
        )
    except ValueError as e:
        raise LoweringError(str(e)) from None


def raise_program(circuit: Circuit) -> qasm.QasmProgram:
    """Emit a circuit as a program of builtin statements.

    The source register map, when consistent, dictates register names and
    sizes; otherwise a single register ``q`` covers all qubits.
    """
    reg_map = circuit.source_register_map
    if len(reg_map) == circuit.num_qubits and _map_is_consistent(reg_map):
        qregs: list[tuple[str, int]] = []
        for name, _ in reg_map:
            if not qregs or qregs[-1][0] != name:
                qregs.append((name, 0))
        sizes = {name: 0 for name, _ in qregs}
        for name, _ in reg_map:
            sizes[name] += 1
        qregs = [(name, sizes[name]) for name, _ in qregs]
        operand_of = list(reg_map)
    else:
        qregs = [("q", circuit.num_qubits)]
        operand_of = [("q", i) for i in range(circuit.num_qubits)]

    statements = tuple(
        qasm.QasmStatement(
            gate_name=op.kind,
            params=tuple(qasm.ParamExpr.from_value(v) for v in op.params),
            operands=tuple(operand_of[q] for q in op.qubits),
        )
        for op in circuit.ops
    )
    return qasm.QasmProgram(
        version="2.0",
        includes=("qelib1.inc",),
        gate_defs=(),
        qregs=tuple(qregs),
        cregs=(),
        statements=statements,
    )


def _map_is_consistent(reg_map: tuple[tuple[str, int], ...]) -> bool:
    """True if registers appear as contiguous runs indexed 0..size-1."""
    seen: set[str] = set()
    i = 0
    n = len(reg_map)
    while i < n:
        name = reg_map[i][0]
        if name in seen:
            return False
        seen.add(name)
        j = 0
        while i < n and reg_map[i][0] == name:
            if reg_map[i][1] != j:
                return False
            i += 1
            j += 1
    return True


# ---------------------------------------------------------------------------
# Unitaries
# ---------------------------------------------------------------------------


def apply_gate(u: np.ndarray, gate: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Left-multiply ``u`` (2^n x 2^n) by ``gate`` embedded at ``qubits``."""
    m = len(qubits)
    dim = 1 << n
    t = u.reshape((2,) * n + (dim,))
    g = gate.reshape((2,) * (2 * m))
    # gate column axis for gate-qubit k is 2m-1-k; u row axis for circuit
    # qubit q is n-1-q.
    gate_cols = [2 * m - 1 - k for k in range(m)]
    u_rows = [n - 1 - q for q in qubits]
    res = np.tensordot(g, t, axes=(gate_cols, u_rows))
    # res axes 0..m-1 are gate row axes for gate-qubits m-1..0; send each
    # back to its circuit position.
    dest = [n - 1 - qubits[m - 1 - j] for j in range(m)]
    res = np.moveaxis(res, range(m), dest)
    return res.reshape(dim, dim)


def unitary_of(circuit: Circuit, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Dense unitary of the whole circuit; refuses above ``max_qubits``."""
    n = circuit.num_qubits
    if n > max_qubits:
        raise TooLargeError(f"{n} qubits exceeds the {max_qubits}-qubit limit")
    dim = 1 << n
    u = np.eye(dim, dtype=complex)
    for op in circuit.ops:
        u = apply_gate(u, gate_matrix(op.kind, op.params), op.qubits, n)
    return u
