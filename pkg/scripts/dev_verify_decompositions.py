"""Development scratchpad: numerically verify every decomposition identity
before it is frozen into the transform tables.  Not part of the test suite.
"""

import math

import numpy as np

from qasmfuzz.gates import controlled, gate_matrix, u3_matrix
from qasmfuzz.ir import Circuit, GateApp, unitary_of


def dist_up_to_phase(a, b):
    m = b.conj().T @ a
    idx = np.unravel_index(np.argmax(np.abs(m)), m.shape)
    phase = m[idx] / abs(m[idx])
    return np.max(np.abs(a - phase * b))


def check(name, ops, n, expected):
    got = unitary_of(Circuit(n, tuple(GateApp(k, tuple(p), tuple(q)) for k, p, q in ops)))
    d = dist_up_to_phase(got, expected)
    status = "OK " if d < 1e-12 else "FAIL"
    print(f"{status} {name:38s} dist={d:.3e}")
    return d < 1e-12


ok = True
pi = math.pi

# single-qubit -> u3 table
table = {
    "h": (pi / 2, 0.0, pi),
    "x": (pi, 0.0, pi),
    "y": (pi, pi / 2, pi / 2),
    "z": (0.0, 0.0, pi),
    "s": (0.0, 0.0, pi / 2),
    "sdg": (0.0, 0.0, -pi / 2),
    "t": (0.0, 0.0, pi / 4),
    "tdg": (0.0, 0.0, -pi / 4),
    "sx": (pi / 2, -pi / 2, pi / 2),
    "id": (0.0, 0.0, 0.0),
}
for kind, angles in table.items():
    ok &= check(f"{kind} -> u3{angles}", [("u3", angles, (0,))], 1, gate_matrix(kind))

theta = 0.7345
ok &= check("rx -> u3", [("u3", (theta, -pi / 2, pi / 2), (0,))], 1, gate_matrix("rx", (theta,)))
ok &= check("ry -> u3", [("u3", (theta, 0.0, 0.0), (0,))], 1, gate_matrix("ry", (theta,)))
ok &= check("rz -> u3", [("u3", (0.0, 0.0, theta), (0,))], 1, gate_matrix("rz", (theta,)))
ok &= check("p -> u3", [("u3", (0.0, 0.0, theta), (0,))], 1, gate_matrix("p", (theta,)))
ok &= check(
    "u2 -> u3", [("u3", (pi / 2, 0.3, 1.1), (0,))], 1, gate_matrix("u2", (0.3, 1.1))
)

# swap -> 3 cx
ok &= check(
    "swap -> cx cx cx",
    [("cx", (), (0, 1)), ("cx", (), (1, 0)), ("cx", (), (0, 1))],
    2,
    gate_matrix("swap"),
)

# cz / cy
ok &= check(
    "cz -> h cx h",
    [("h", (), (1,)), ("cx", (), (0, 1)), ("h", (), (1,))],
    2,
    gate_matrix("cz"),
)
ok &= check(
    "cy -> sdg cx s",
    [("sdg", (), (1,)), ("cx", (), (0, 1)), ("s", (), (1,))],
    2,
    gate_matrix("cy"),
)

# ch (qelib1 form), control 0, target 1
ch_ops = [
    ("h", (), (1,)),
    ("sdg", (), (1,)),
    ("cx", (), (0, 1)),
    ("h", (), (1,)),
    ("t", (), (1,)),
    ("cx", (), (0, 1)),
    ("t", (), (1,)),
    ("h", (), (1,)),
    ("s", (), (1,)),
    ("x", (), (1,)),
    ("s", (), (0,)),
]
ok &= check("ch qelib1 form", ch_ops, 2, gate_matrix("ch"))

# cp ladder
lam = 1.234
cp_ops = [
    ("p", (lam / 2,), (0,)),
    ("cx", (), (0, 1)),
    ("p", (-lam / 2,), (1,)),
    ("cx", (), (0, 1)),
    ("p", (lam / 2,), (1,)),
]
ok &= check("cp ladder", cp_ops, 2, gate_matrix("cp", (lam,)))

# crz
crz_ops = [
    ("p", (lam / 2,), (1,)),
    ("cx", (), (0, 1)),
    ("p", (-lam / 2,), (1,)),
    ("cx", (), (0, 1)),
]
ok &= check("crz qelib1 form", crz_ops, 2, gate_matrix("crz", (lam,)))

# cry
cry_ops = [
    ("ry", (lam / 2,), (1,)),
    ("cx", (), (0, 1)),
    ("ry", (-lam / 2,), (1,)),
    ("cx", (), (0, 1)),
]
ok &= check("cry qelib1 form", cry_ops, 2, gate_matrix("cry", (lam,)))

# crx (qelib1 form)
crx_ops = [
    ("p", (pi / 2,), (1,)),
    ("cx", (), (0, 1)),
    ("u3", (-lam / 2, 0.0, 0.0), (1,)),
    ("cx", (), (0, 1)),
    ("u3", (lam / 2, -pi / 2, 0.0), (1,)),
]
ok &= check("crx qelib1 form", crx_ops, 2, gate_matrix("crx", (lam,)))

# cu (qiskit form)
th, ph, la, ga = 0.9, 0.4, 1.7, 0.6
cu_ops = [
    ("p", (ga,), (0,)),
    ("p", ((la + ph) / 2,), (0,)),
    ("p", ((la - ph) / 2,), (1,)),
    ("cx", (), (0, 1)),
    ("u3", (-th / 2, 0.0, -(ph + la) / 2), (1,)),
    ("cx", (), (0, 1)),
    ("u3", (th / 2, ph, 0.0), (1,)),
]
ok &= check("cu qiskit form", cu_ops, 2, gate_matrix("cu", (th, ph, la, ga)))

# rxx via H (x) H conjugated RZZ
rxx_ops = [
    ("h", (), (0,)),
    ("h", (), (1,)),
    ("cx", (), (0, 1)),
    ("rz", (theta,), (1,)),
    ("cx", (), (0, 1)),
    ("h", (), (0,)),
    ("h", (), (1,)),
]
ok &= check("rxx -> h,h,cx,rz,cx,h,h", rxx_ops, 2, gate_matrix("rxx", (theta,)))

# ccx standard 15-gate form (controls 0,1, target 2)
ccx_ops = [
    ("h", (), (2,)),
    ("cx", (), (1, 2)),
    ("tdg", (), (2,)),
    ("cx", (), (0, 2)),
    ("t", (), (2,)),
    ("cx", (), (1, 2)),
    ("tdg", (), (2,)),
    ("cx", (), (0, 2)),
    ("t", (), (1,)),
    ("t", (), (2,)),
    ("h", (), (2,)),
    ("cx", (), (0, 1)),
    ("t", (), (0,)),
    ("tdg", (), (1,)),
    ("cx", (), (0, 1)),
]
ok &= check("ccx 15-gate form", ccx_ops, 3, gate_matrix("ccx"))

# cswap via cx ccx cx (control 0, swaps 1,2)
cswap_ops = [("cx", (), (2, 1)), ("ccx", (), (0, 1, 2)), ("cx", (), (2, 1))]
ok &= check("cswap via ccx", cswap_ops, 3, gate_matrix("cswap"))


# multi-controlled phase recursion
def mcp(theta, controls, target):
    if len(controls) == 1:
        return [("cp", (theta,), (controls[0], target))]
    c_last = controls[-1]
    rest = controls[:-1]
    kind = {1: "cx", 2: "ccx", 3: "c3x"}[len(rest)]
    return (
        [("cp", (theta / 2,), (c_last, target))]
        + [(kind, (), tuple(rest) + (c_last,))]
        + [("cp", (-theta / 2,), (c_last, target))]
        + [(kind, (), tuple(rest) + (c_last,))]
        + mcp(theta / 2, rest, target)
    )


c3x_ops = [("h", (), (3,))] + mcp(pi, [0, 1, 2], 3) + [("h", (), (3,))]
ok &= check("c3x via mcp recursion", c3x_ops, 4, gate_matrix("c3x"))

c4x_ops = [("h", (), (4,))] + mcp(pi, [0, 1, 2, 3], 4) + [("h", (), (4,))]
ok &= check("c4x via mcp recursion", c4x_ops, 5, gate_matrix("c4x"))

# u3 -> rz sx rz sx rz (ZSXZSX)
th3, ph3, la3 = 1.234, 0.567, 2.345
zsx_ops = [
    ("rz", (la3,), (0,)),
    ("sx", (), (0,)),
    ("rz", (th3 + pi,), (0,)),
    ("sx", (), (0,)),
    ("rz", (ph3 + pi,), (0,)),
]
ok &= check("u3 -> zsx", zsx_ops, 1, u3_matrix(th3, ph3, la3))

# controlled() convention sanity: cx columns
cx = gate_matrix("cx")
exp = np.zeros((4, 4), dtype=complex)
exp[0, 0] = exp[2, 2] = 1  # control 0 -> untouched
exp[3, 1] = exp[1, 3] = 1  # control 1 -> target flips
print("cx convention:", "OK" if np.array_equal(cx, exp) else "FAIL")
ok &= np.array_equal(cx, exp)

print("\nALL OK" if ok else "\nSOME FAILED")
