"""Differential testing of OpenQASM toolchains via transform round-trips.

Random programs are pushed through chains of import/transform/export steps
across several adapters; the resulting variants form equivalence classes
that are checked pairwise for unitary equivalence (up to global phase) and
for crashes, then failures are reduced and clustered.
"""

__version__ = "0.1.0"

from .adapters import (
    Adapter,
    AdapterFailure,
    BrokenAdapter,
    BuiltinAdapter,
    build_adapter,
    build_adapter_or_broken,
)
from .ir import Circuit, GateApp, LoweringError, TooLargeError, lower, raise_program, unitary_of
from .qasm import ParamExpr, ParseError, QasmProgram, QasmStatement, parse, print_program, validate

__all__ = [
    "Adapter",
    "AdapterFailure",
    "BrokenAdapter",
    "BuiltinAdapter",
    "Circuit",
    "GateApp",
    "LoweringError",
    "ParamExpr",
    "ParseError",
    "QasmProgram",
    "QasmStatement",
    "TooLargeError",
    "__version__",
    "build_adapter",
    "build_adapter_or_broken",
    "lower",
    "parse",
    "print_program",
    "raise_program",
    "unitary_of",
    "validate",
]
