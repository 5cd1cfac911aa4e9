"""Semantics-preserving circuit transforms used by the reference adapters.

Every transform maps Circuit -> Circuit and preserves the unitary up to a
global phase.  Decomposition tables are fixed; each identity is verified
numerically by the test suite (see scripts/dev_verify_decompositions.py for
the derivation scratchpad).
"""

from __future__ import annotations

import cmath
import heapq
import math
from collections.abc import Callable, Iterable

import numpy as np

from .gates import (
    DAGGER_PAIRS,
    NEGATION_CANCELS,
    ROTATION_MERGE,
    SELF_INVERSE,
    gate_matrix,
)
from .ir import Circuit, GateApp

_PI = math.pi
_FOUR_PI = 4.0 * math.pi


def _replace_ops(circuit: Circuit, ops: Iterable[GateApp]) -> Circuit:
    return Circuit(
        num_qubits=circuit.num_qubits,
        ops=tuple(ops),
        source_register_map=circuit.source_register_map,
    )


# ---------------------------------------------------------------------------
# Cancellation and merging
# ---------------------------------------------------------------------------


def _cancels(a: GateApp, b: GateApp) -> bool:
    """True if b directly follows a on identical operands and undoes it."""
    if a.qubits != b.qubits:
        return False
    if a.kind == b.kind:
        if a.kind in SELF_INVERSE:
            return True
        if a.kind in NEGATION_CANCELS:
            return b.params[0] == -a.params[0]
        if a.kind == "u3":
            t, p, l = a.params
            return b.params == (-t, -l, -p)
        if a.kind == "cu":
            t, p, l, g = a.params
            return b.params == (-t, -l, -p, -g)
        return False
    return DAGGER_PAIRS.get(a.kind) == b.kind


def _cancel_pass(circuit: Circuit) -> Circuit:
    out: list[GateApp] = []
    for op in circuit.ops:
        if out and _cancels(out[-1], op):
            out.pop()
        else:
            out.append(op)
    return _replace_ops(circuit, out)


def remove_redundancies(circuit: Circuit) -> Circuit:
    """Cancel adjacent inverse pairs on identical operands, to fixpoint."""
    return _cancel_pass(circuit)


def cancel_inverses(circuit: Circuit) -> Circuit:
    """Adjacent-inverse cancellation (adapter B's flavor)."""
    return _cancel_pass(circuit)


def merge_rotations(circuit: Circuit) -> Circuit:
    """Fuse adjacent same-kind rotations on the same operands, summing the
    angles mod 4*pi; exact zero results are dropped."""
    out: list[GateApp] = []
    for op in circuit.ops:
        if (
            out
            and op.kind in ROTATION_MERGE
            and out[-1].kind == op.kind
            and out[-1].qubits == op.qubits
        ):
            angle = math.fmod(out[-1].params[0] + op.params[0], _FOUR_PI)
            out.pop()
            if angle != 0.0:
                out.append(GateApp(op.kind, (angle,), op.qubits))
        else:
            out.append(op)
    return _replace_ops(circuit, out)


# ---------------------------------------------------------------------------
# Single-qubit run fusion
# ---------------------------------------------------------------------------

_ZYZ_TINY = 1e-10


def u3_angles_of(mat: np.ndarray) -> tuple[float, float, float]:
    """Angles (theta, phi, lam) with u3(theta,phi,lam) == mat up to a global
    phase.  ``mat`` must be unitary."""
    a = abs(mat[0, 0])
    b = abs(mat[1, 0])
    theta = 2.0 * math.atan2(b, a)
    if b < _ZYZ_TINY:
        alpha = cmath.phase(mat[0, 0])
        return (theta, 0.0, cmath.phase(mat[1, 1]) - alpha)
    if a < _ZYZ_TINY:
        alpha = cmath.phase(-mat[0, 1])
        return (theta, cmath.phase(mat[1, 0]) - alpha, 0.0)
    alpha = cmath.phase(mat[0, 0])
    phi = cmath.phase(mat[1, 0]) - alpha
    lam = cmath.phase(-mat[0, 1]) - alpha
    return (theta, phi, lam)


def fuse_single_qubit_runs(circuit: Circuit) -> Circuit:
    """Fuse each maximal run of single-qubit gates on one qubit into a u3.

    A run may be interleaved with operations on other qubits (those commute);
    it ends when a multi-qubit gate touches the run's qubit.  The fused u3 is
    emitted at the position where the run ends.
    """
    out: list[GateApp] = []
    pending: dict[int, np.ndarray] = {}

    def flush(q: int):
        mat = pending.pop(q, None)
        if mat is not None:
            theta, phi, lam = u3_angles_of(mat)
            out.append(GateApp("u3", (theta, phi, lam), (q,)))

    for op in circuit.ops:
        if len(op.qubits) == 1:
            q = op.qubits[0]
            mat = gate_matrix(op.kind, op.params)
            pending[q] = mat @ pending[q] if q in pending else mat
        else:
            for q in sorted(op.qubits):
                flush(q)
            out.append(op)
    for q in sorted(pending):
        flush(q)
    return _replace_ops(circuit, out)


def level1(circuit: Circuit) -> Circuit:
    """Light optimization: redundancy removal, then 1q-run fusion."""
    return fuse_single_qubit_runs(remove_redundancies(circuit))


# ---------------------------------------------------------------------------
# Rebase
# ---------------------------------------------------------------------------

# Fixed single-qubit-to-u3 angle table (verified exact up to global phase).
_U3_TABLE: dict[str, Callable[[tuple[float, ...]], tuple[float, float, float]]] = {
    "h": lambda p: (_PI / 2, 0.0, _PI),
    "x": lambda p: (_PI, 0.0, _PI),
    "y": lambda p: (_PI, _PI / 2, _PI / 2),
    "z": lambda p: (0.0, 0.0, _PI),
    "s": lambda p: (0.0, 0.0, _PI / 2),
    "sdg": lambda p: (0.0, 0.0, -_PI / 2),
    "t": lambda p: (0.0, 0.0, _PI / 4),
    "tdg": lambda p: (0.0, 0.0, -_PI / 4),
    "sx": lambda p: (_PI / 2, -_PI / 2, _PI / 2),
    "id": lambda p: (0.0, 0.0, 0.0),
    "rx": lambda p: (p[0], -_PI / 2, _PI / 2),
    "ry": lambda p: (p[0], 0.0, 0.0),
    "rz": lambda p: (0.0, 0.0, p[0]),
    "p": lambda p: (0.0, 0.0, p[0]),
    "u1": lambda p: (0.0, 0.0, p[0]),
    "u2": lambda p: (_PI / 2, p[0], p[1]),
}


def _g(kind: str, qubits: tuple[int, ...], *params: float) -> GateApp:
    return GateApp(kind, tuple(params), qubits)


def _mcp(theta: float, controls: tuple[int, ...], target: int) -> list[GateApp]:
    """Multi-controlled phase: adds exp(i*theta) iff all controls and the
    target are |1>.  Recursion over one fewer control; exact."""
    if len(controls) == 1:
        return [_g("cp", (controls[0], target), theta)]
    c_last = controls[-1]
    rest = controls[:-1]
    mcx_kind = {1: "cx", 2: "ccx", 3: "c3x"}[len(rest)]
    return [
        _g("cp", (c_last, target), theta / 2),
        _g(mcx_kind, rest + (c_last,)),
        _g("cp", (c_last, target), -theta / 2),
        _g(mcx_kind, rest + (c_last,)),
        *_mcp(theta / 2, rest, target),
    ]


def _expand_one(op: GateApp) -> list[GateApp]:
    kind = op.kind
    q = op.qubits
    p = op.params
    if kind in _U3_TABLE:
        return [_g("u3", q, *_U3_TABLE[kind](p))]
    if kind == "swap":
        a, b = q
        return [_g("cx", (a, b)), _g("cx", (b, a)), _g("cx", (a, b))]
    if kind == "cz":
        c, t = q
        return [_g("h", (t,)), _g("cx", (c, t)), _g("h", (t,))]
    if kind == "cy":
        c, t = q
        return [_g("sdg", (t,)), _g("cx", (c, t)), _g("s", (t,))]
    if kind == "ch":
        c, t = q
        return [
            _g("h", (t,)),
            _g("sdg", (t,)),
            _g("cx", (c, t)),
            _g("h", (t,)),
            _g("t", (t,)),
            _g("cx", (c, t)),
            _g("t", (t,)),
            _g("h", (t,)),
            _g("s", (t,)),
            _g("x", (t,)),
            _g("s", (c,)),
        ]
    if kind == "cp":
        c, t = q
        lam = p[0]
        return [
            _g("p", (c,), lam / 2),
            _g("cx", (c, t)),
            _g("p", (t,), -lam / 2),
            _g("cx", (c, t)),
            _g("p", (t,), lam / 2),
        ]
    if kind == "crz":
        c, t = q
        lam = p[0]
        return [
            _g("p", (t,), lam / 2),
            _g("cx", (c, t)),
            _g("p", (t,), -lam / 2),
            _g("cx", (c, t)),
        ]
    if kind == "cry":
        c, t = q
        lam = p[0]
        return [
            _g("ry", (t,), lam / 2),
            _g("cx", (c, t)),
            _g("ry", (t,), -lam / 2),
            _g("cx", (c, t)),
        ]
    if kind == "crx":
        c, t = q
        lam = p[0]
        return [
            _g("p", (t,), _PI / 2),
            _g("cx", (c, t)),
            _g("u3", (t,), -lam / 2, 0.0, 0.0),
            _g("cx", (c, t)),
            _g("u3", (t,), lam / 2, -_PI / 2, 0.0),
        ]
    if kind == "cu":
        c, t = q
        theta, phi, lam, gamma = p
        return [
            _g("p", (c,), gamma),
            _g("p", (c,), (lam + phi) / 2),
            _g("p", (t,), (lam - phi) / 2),
            _g("cx", (c, t)),
            _g("u3", (t,), -theta / 2, 0.0, -(phi + lam) / 2),
            _g("cx", (c, t)),
            _g("u3", (t,), theta / 2, phi, 0.0),
        ]
    if kind == "rxx":
        a, b = q
        theta = p[0]
        return [
            _g("h", (a,)),
            _g("h", (b,)),
            _g("cx", (a, b)),
            _g("rz", (b,), theta),
            _g("cx", (a, b)),
            _g("h", (a,)),
            _g("h", (b,)),
        ]
    if kind == "ccx":
        a, b, c = q
        return [
            _g("h", (c,)),
            _g("cx", (b, c)),
            _g("tdg", (c,)),
            _g("cx", (a, c)),
            _g("t", (c,)),
            _g("cx", (b, c)),
            _g("tdg", (c,)),
            _g("cx", (a, c)),
            _g("t", (b,)),
            _g("t", (c,)),
            _g("h", (c,)),
            _g("cx", (a, b)),
            _g("t", (a,)),
            _g("tdg", (b,)),
            _g("cx", (a, b)),
        ]
    if kind == "cswap":
        c, a, b = q
        return [_g("cx", (b, a)), _g("ccx", (c, a, b)), _g("cx", (b, a))]
    if kind in ("c3x", "c4x"):
        controls, target = q[:-1], q[-1]
        return [_g("h", (target,)), *_mcp(_PI, controls, target), _g("h", (target,))]
    raise KeyError(kind)


def _u3_to_zsx(op: GateApp) -> list[GateApp]:
    theta, phi, lam = op.params
    q = op.qubits
    return [
        _g("rz", q, lam),
        _g("sx", q),
        _g("rz", q, theta + _PI),
        _g("sx", q),
        _g("rz", q, phi + _PI),
    ]


def _rebase(circuit: Circuit, target: frozenset[str], extra: dict) -> Circuit:
    out: list[GateApp] = []
    stack = list(reversed(circuit.ops))
    while stack:
        op = stack.pop()
        if op.kind in target:
            out.append(op)
        elif op.kind in extra:
            stack.extend(reversed(extra[op.kind](op)))
        else:
            stack.extend(reversed(_expand_one(op)))
    return _replace_ops(circuit, out)


def rebase_u3cx(circuit: Circuit) -> Circuit:
    """Rewrite every operation into the {u3, cx} basis."""
    return _rebase(circuit, frozenset({"u3", "cx"}), {})


def rebase_rzsxxcx(circuit: Circuit) -> Circuit:
    """Rewrite every operation into the {rz, sx, x, cx} basis."""
    return _rebase(circuit, frozenset({"rz", "sx", "x", "cx"}), {"u3": _u3_to_zsx})


# ---------------------------------------------------------------------------
# Statement reordering (adapter B's export order)
# ---------------------------------------------------------------------------


def qubit_major_reorder(circuit: Circuit) -> Circuit:
    """Stable reordering that lists single-qubit gates qubit-major.

    Only operations on disjoint qubits are ever commuted: the order of any
    two operations sharing a qubit is preserved, so the unitary is unchanged.
    """
    ops = circuit.ops
    n = len(ops)
    preds: list[set[int]] = [set() for _ in range(n)]
    succs: list[list[int]] = [[] for _ in range(n)]
    last: dict[int, int] = {}
    for i, op in enumerate(ops):
        for q in op.qubits:
            if q in last:
                preds[i].add(last[q])
            last[q] = i
    for i, ps in enumerate(preds):
        for p in ps:
            succs[p].append(i)
    indeg = [len(ps) for ps in preds]

    def key(i: int) -> tuple[int, int, int]:
        op = ops[i]
        return (0 if len(op.qubits) == 1 else 1, min(op.qubits), i)

    ready = [key(i) for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    out: list[GateApp] = []
    while ready:
        _, _, i = heapq.heappop(ready)
        out.append(ops[i])
        for s in succs[i]:
            indeg[s] -= 1
            if indeg[s] == 0:
                heapq.heappush(ready, key(s))
    return _replace_ops(circuit, out)


# Transform ids as adapters advertise them.
TRANSFORMS: dict[str, Callable[[Circuit], Circuit]] = {
    "opt.remove_redundancies": remove_redundancies,
    "opt.cancel_inverses": cancel_inverses,
    "opt.merge_rotations": merge_rotations,
    "opt.level1": level1,
    "rebase.u3cx": rebase_u3cx,
    "rebase.rzsxxcx": rebase_rzsxxcx,
}
