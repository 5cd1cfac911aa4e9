"""Random QASM program generation.

Two modes, chosen per program from a seeded stream:

* ``direct``   — statements are sampled straight into AST form and printed.
* ``via_repr`` — an in-memory circuit is sampled, handed to one of the
  campaign's adapters, and exported by it; the adapter's printer (and any
  defect it carries) shapes the text.

Every program is reproducible from (seed, stream_index) alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .adapters import Adapter, AdapterFailure
from .gates import BARRIER, GATE_SIGNATURES
from .ir import Circuit, GateApp
from .qasm import ParamExpr, ParseError, QasmProgram, QasmStatement, parse, print_program
from .seeding import derive_rng

DEFAULT_GATE_POOL: tuple[str, ...] = tuple(k for k in GATE_SIGNATURES if k != BARRIER)

MODE_DIRECT = "direct"
MODE_VIA_REPR = "via_repr"


@dataclass(frozen=True)
class GenConfig:
    """Knobs for the random program generator."""

    seed: int
    num_qubits: int = 11
    num_gates: int = 15
    gate_pool: tuple[str, ...] = DEFAULT_GATE_POOL
    mode_mix: float = 0.5  # fraction of programs emitted directly as text
    include_creg: bool = True

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be at least 1")
        if self.num_gates < 0:
            raise ValueError("num_gates must be non-negative")
        if not self.gate_pool:
            raise ValueError("gate_pool must not be empty")
        if not 0.0 <= self.mode_mix <= 1.0:
            raise ValueError("mode_mix must lie in [0, 1]")
        for kind in self.gate_pool:
            if kind == BARRIER:
                raise ValueError("barrier cannot be sampled as a gate")
            if kind not in GATE_SIGNATURES:
                raise ValueError(f"unknown gate '{kind}' in gate_pool")
            if GATE_SIGNATURES[kind][1] > self.num_qubits:
                raise ValueError(
                    f"gate '{kind}' needs {GATE_SIGNATURES[kind][1]} qubits "
                    f"but num_qubits is {self.num_qubits}"
                )


@dataclass(frozen=True)
class GeneratedProgram:
    """One generated program plus how it came to be.

    ``program`` is the parsed AST when the text is valid, else None (a
    defective exporter can hand back broken text).  ``crash`` records an
    adapter failure raised while exporting, in which case ``text`` is empty.
    """

    text: str
    program: QasmProgram | None
    stream_index: int
    mode: str
    adapter_used: str | None = None
    crash: AdapterFailure | None = field(default=None, compare=False)


def _sample_statements(config: GenConfig, rng) -> list[QasmStatement]:
    stmts = []
    for _ in range(config.num_gates):
        kind = rng.choice(config.gate_pool)
        n_params, n_qubits = GATE_SIGNATURES[kind]
        operands = tuple(("q", i) for i in rng.sample(range(config.num_qubits), n_qubits))
        params = tuple(
            ParamExpr.from_pi_multiple(rng.uniform(0.0, 2.0)) for _ in range(n_params)
        )
        stmts.append(QasmStatement(kind, params, operands))
    return stmts


def _sample_circuit(config: GenConfig, rng) -> Circuit:
    ops = []
    for _ in range(config.num_gates):
        kind = rng.choice(config.gate_pool)
        n_params, n_qubits = GATE_SIGNATURES[kind]
        qubits = tuple(rng.sample(range(config.num_qubits), n_qubits))
        params = tuple(rng.uniform(0.0, 2.0) * math.pi for _ in range(n_params))
        ops.append(GateApp(kind, params, qubits))
    return Circuit(config.num_qubits, tuple(ops), (("q", config.num_qubits),))


def generate_direct(config: GenConfig, stream_index: int) -> GeneratedProgram:
    rng = derive_rng(config.seed, "direct", stream_index)
    program = QasmProgram(
        version="2.0",
        includes=("qelib1.inc",),
        gate_defs=(),
        qregs=(("q", config.num_qubits),),
        cregs=(("c", config.num_qubits),) if config.include_creg else (),
        statements=tuple(_sample_statements(config, rng)),
    )
    return GeneratedProgram(
        text=print_program(program),
        program=program,
        stream_index=stream_index,
        mode=MODE_DIRECT,
    )


def generate_via_representation(
    config: GenConfig, stream_index: int, adapter: Adapter
) -> GeneratedProgram:
    rng = derive_rng(config.seed, "repr", stream_index)
    circuit = _sample_circuit(config, rng)
    try:
        handle = adapter.ingest(circuit)  # type: ignore[attr-defined]
        text = adapter.export_qasm(handle)
    except AdapterFailure as e:
        return GeneratedProgram(
            text="",
            program=None,
            stream_index=stream_index,
            mode=MODE_VIA_REPR,
            adapter_used=adapter.adapter_id,
            crash=e,
        )
    try:
        program = parse(text)
    except ParseError:
        program = None
    return GeneratedProgram(
        text=text,
        program=program,
        stream_index=stream_index,
        mode=MODE_VIA_REPR,
        adapter_used=adapter.adapter_id,
    )


def generate(
    config: GenConfig, stream_index: int, adapters: tuple[Adapter, ...] = ()
) -> GeneratedProgram:
    """Generate program ``stream_index`` of the campaign.

    Representation mode needs an adapter that can accept in-memory circuits
    (one with an ``ingest`` method); when none is available everything falls
    back to direct emission.
    """
    eligible = tuple(a for a in adapters if hasattr(a, "ingest"))
    mode_rng = derive_rng(config.seed, "mode", stream_index)
    direct = mode_rng.random() < config.mode_mix
    if direct or not eligible:
        return generate_direct(config, stream_index)
    adapter = eligible[mode_rng.randrange(len(eligible))]
    return generate_via_representation(config, stream_index, adapter)
