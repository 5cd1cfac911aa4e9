"""Shared fixtures: the hand-written QASM corpus used across test modules."""

import pytest

# A four-control gate applied to four operands: arity-invalid under the
# builtin vocabulary, the archetypal cross-toolchain reject.
CORPUS_C4X_FOUR_OPERANDS = """OPENQASM 2.0;
include "qelib1.inc";
qreg q2[4];
c4x q2[0],q2[1],q2[2],q2[3];
"""

CORPUS_H_SWAP = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[2];
h q[0];
swap q[0],q[1];
"""

CORPUS_H_SWAP_REBASED = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[2];
u3(pi/2,0,pi) q[0];
cx q[0],q[1];
cx q[1],q[0];
cx q[0],q[1];
"""

# Custom gate definition (controlled-S built from p and cx) plus one use.
CORPUS_CS_WITH_DEF = """OPENQASM 2.0;
include "qelib1.inc";
gate cs q0,q1 {
p(pi/4) q0; cx q0,q1;
p(-pi/4) q1; cx q0,q1;
p(pi/4) q1; }
qreg q[5];
cs q[4],q[0];
"""

# The same program with its definition stripped: name resolution must fail.
CORPUS_CS_WITHOUT_DEF = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[5];
cs q[4], q[0];
"""
CORPUS_CS_ERROR = "'cs' is not defined in this scope"

CORPUS_RXX_DECIMAL_ANGLE = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[11];
rxx(1.1761910836010856*pi) q[3],q[5];
"""


@pytest.fixture
def h_swap_text():
    return CORPUS_H_SWAP


@pytest.fixture
def h_swap_rebased_text():
    return CORPUS_H_SWAP_REBASED
