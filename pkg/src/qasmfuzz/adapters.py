"""Adapters: uniform import/transform/export façade over QASM toolchains.

Two reference adapters share the in-memory circuit representation but differ
in transform sets and export style, so round-trips through them exercise
genuinely different code paths.  Mutant adapters wrap a reference adapter
and inject one specific defect; they are the known-bug fixtures used to
check that the pipeline actually catches what it claims to catch.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .ir import Circuit, LoweringError, lower, raise_program
from .qasm import ParseError, parse, print_program, validate
from .transforms import TRANSFORMS, qubit_major_reorder

_STAGES = ("import", "transform", "export", "spawn", "protocol", "timeout")


class AdapterFailure(Exception):
    """A toolchain step failed.

    ``message`` is position-free and stable across statement reordering or
    deletion, so identical root causes compare equal during clustering and
    reduction replay.
    """

    def __init__(self, adapter_id: str, stage: str, message: str):
        super().__init__(message)
        if stage not in _STAGES:
            raise ValueError(f"unknown stage '{stage}'")
        self.adapter_id = adapter_id
        self.stage = stage
        self.message = message


class Adapter:
    """Interface every toolchain adapter implements.

    Handles are opaque tokens scoped to one adapter instance.  All failures
    surface as AdapterFailure; no other exception type escapes.
    """

    adapter_id: str

    def import_qasm(self, text: str) -> str:
        raise NotImplementedError

    def apply_transform(self, handle: str, transform_id: str) -> str:
        raise NotImplementedError

    def export_qasm(self, handle: str) -> str:
        raise NotImplementedError

    def list_transforms(self) -> list[str]:
        raise NotImplementedError

    def close(self) -> None:
        pass


class BuiltinAdapter(Adapter):
    """In-process adapter over the native circuit representation."""

    def __init__(
        self,
        adapter_id: str,
        transform_ids: tuple[str, ...],
        qubit_major_export: bool = False,
    ):
        for tid in transform_ids:
            if tid not in TRANSFORMS:
                raise ValueError(f"unknown transform '{tid}'")
        self.adapter_id = adapter_id
        self._transform_ids = transform_ids
        self._qubit_major_export = qubit_major_export
        self._circuits: dict[str, Circuit] = {}
        self._next = 0

    # -- handle table -------------------------------------------------

    def ingest(self, circuit: Circuit) -> str:
        """Register an in-memory circuit directly (no QASM text involved)."""
        handle = f"h{self._next}"
        self._next += 1
        self._circuits[handle] = circuit
        return handle

    def fetch(self, handle: str) -> Circuit:
        """Look up a handle's circuit (inverse of ingest)."""
        try:
            return self._circuits[handle]
        except KeyError:
            raise AdapterFailure(
                self.adapter_id, "transform", f"unknown handle '{handle}'"
            ) from None

    # -- Adapter interface ---------------------------------------------

    def import_qasm(self, text: str) -> str:
        try:
            program = parse(text)
        except ParseError as e:
            raise AdapterFailure(self.adapter_id, "import", e.message) from None
        violations = validate(program)
        if violations:
            raise AdapterFailure(self.adapter_id, "import", violations[0].detail)
        try:
            circuit = lower(program)
        except LoweringError as e:
            raise AdapterFailure(self.adapter_id, "import", str(e)) from None
        return self.ingest(circuit)

    def apply_transform(self, handle: str, transform_id: str) -> str:
        circuit = self.fetch(handle)
        if transform_id not in self._transform_ids:
            raise AdapterFailure(
                self.adapter_id, "transform", f"unknown transform '{transform_id}'"
            )
        return self.ingest(TRANSFORMS[transform_id](circuit))

    def export_qasm(self, handle: str) -> str:
        circuit = self.fetch(handle)
        if self._qubit_major_export:
            circuit = qubit_major_reorder(circuit)
        return print_program(raise_program(circuit))

    def list_transforms(self) -> list[str]:
        return list(self._transform_ids)


REF_A_TRANSFORMS = ("opt.remove_redundancies", "rebase.u3cx", "opt.level1")
REF_B_TRANSFORMS = ("opt.cancel_inverses", "opt.merge_rotations", "rebase.rzsxxcx")

FAULT_KINDS = (
    "none",
    "c4x_for_c3x_on_export",
    "drop_gatedef_on_export",
    "cu_wrong_unitary_in_transform",
)

_C3X_LINE = re.compile(r"(?m)^c3x ")
_CP_LINE = re.compile(r"(?m)^cp\([^)]*\) ")


class MutantAdapter(Adapter):
    """Wraps a BuiltinAdapter and injects one deliberate defect.

    c4x_for_c3x_on_export:
        exported text names c3x applications c4x while keeping their four
        operands, so any consumer rejects the program with an arity error.
    drop_gatedef_on_export:
        exported text calls cp applications cs, a gate no builtin vocabulary
        defines and whose definition is nowhere in the file, so consumers
        fail name resolution.
    cu_wrong_unitary_in_transform:
        every transform silently negates the global-phase parameter of each
        cu operation, a semantics change invisible to crash checks.
    """

    def __init__(self, adapter_id: str, base: BuiltinAdapter, fault: str):
        if fault not in FAULT_KINDS:
            raise ValueError(f"unknown fault kind '{fault}'")
        self.adapter_id = adapter_id
        self._base = base
        self._fault = fault
        base.adapter_id = adapter_id  # failures surface under the mutant's id

    def import_qasm(self, text: str) -> str:
        return self._base.import_qasm(text)

    def apply_transform(self, handle: str, transform_id: str) -> str:
        out = self._base.apply_transform(handle, transform_id)
        if self._fault == "cu_wrong_unitary_in_transform":
            circuit = self._base.fetch(out)
            ops = tuple(
                op if op.kind != "cu"
                else op.__class__(
                    "cu", op.params[:3] + (-op.params[3],), op.qubits
                )
                for op in circuit.ops
            )
            out = self._base.ingest(
                Circuit(circuit.num_qubits, ops, circuit.source_register_map)
            )
        return out

    def export_qasm(self, handle: str) -> str:
        text = self._base.export_qasm(handle)
        if self._fault == "c4x_for_c3x_on_export":
            text = _C3X_LINE.sub("c4x ", text)
        elif self._fault == "drop_gatedef_on_export":
            text = _CP_LINE.sub("cs ", text)
        return text

    def list_transforms(self) -> list[str]:
        return self._base.list_transforms()

    def ingest(self, circuit: Circuit) -> str:
        return self._base.ingest(circuit)

    def fetch(self, handle: str) -> Circuit:
        return self._base.fetch(handle)


class BrokenAdapter(Adapter):
    """Stand-in for an adapter whose process could not be started.

    Every operation re-raises the original failure, so a chain that picks
    this adapter records a crash step while the campaign keeps running.
    """

    def __init__(self, failure: AdapterFailure):
        self.adapter_id = failure.adapter_id
        self._failure = failure

    def _raise(self):
        raise AdapterFailure(
            self._failure.adapter_id, self._failure.stage, self._failure.message
        )

    def import_qasm(self, text: str) -> str:
        self._raise()

    def apply_transform(self, handle: str, transform_id: str) -> str:
        self._raise()

    def export_qasm(self, handle: str) -> str:
        self._raise()

    def list_transforms(self) -> list[str]:
        self._raise()


@dataclass(frozen=True)
class AdapterSpec:
    """Everything needed to construct one adapter instance.

    kind is "builtin" (reference behavior chosen by ``flavor``), "mutant"
    (reference behavior plus ``fault``), or "subprocess" (external process
    speaking the JSON-lines protocol, launched from ``command``).
    """

    adapter_id: str
    kind: str = "builtin"
    flavor: str = "ref_a"
    fault: str = "none"
    command: str | None = None
    timeout_secs: float = 30.0
    env: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("builtin", "mutant", "subprocess"):
            raise ValueError(f"unknown adapter kind '{self.kind}'")
        if self.flavor not in ("ref_a", "ref_b"):
            raise ValueError(f"unknown adapter flavor '{self.flavor}'")
        if self.fault not in FAULT_KINDS:
            raise ValueError(f"unknown fault '{self.fault}'")
        if self.kind == "subprocess" and not self.command:
            raise ValueError("subprocess adapter needs a command")
        if self.timeout_secs <= 0:
            raise ValueError("timeout_secs must be positive")


CANNED_ADAPTERS: dict[str, AdapterSpec] = {
    "ref_a": AdapterSpec("ref_a", kind="builtin", flavor="ref_a"),
    "ref_b": AdapterSpec("ref_b", kind="builtin", flavor="ref_b"),
    "mutant_c4x": AdapterSpec(
        "mutant_c4x", kind="mutant", flavor="ref_a", fault="c4x_for_c3x_on_export"
    ),
    "mutant_dropdef": AdapterSpec(
        "mutant_dropdef", kind="mutant", flavor="ref_a", fault="drop_gatedef_on_export"
    ),
    "mutant_cu": AdapterSpec(
        "mutant_cu", kind="mutant", flavor="ref_a", fault="cu_wrong_unitary_in_transform"
    ),
}


def _build_builtin(adapter_id: str, flavor: str) -> BuiltinAdapter:
    if flavor == "ref_a":
        return BuiltinAdapter(adapter_id, REF_A_TRANSFORMS)
    if flavor == "ref_b":
        return BuiltinAdapter(adapter_id, REF_B_TRANSFORMS, qubit_major_export=True)
    raise ValueError(f"unknown adapter flavor '{flavor}'")


def build_adapter(spec: AdapterSpec | str) -> Adapter:
    """Fresh adapter instance from a spec or a canned adapter id."""
    if isinstance(spec, str):
        try:
            spec = CANNED_ADAPTERS[spec]
        except KeyError:
            raise ValueError(f"unknown adapter id '{spec}'") from None
    if spec.kind == "builtin":
        return _build_builtin(spec.adapter_id, spec.flavor)
    if spec.kind == "mutant":
        base = _build_builtin(spec.adapter_id, spec.flavor)
        return MutantAdapter(spec.adapter_id, base, spec.fault)
    if spec.kind == "subprocess":
        if not spec.command:
            raise ValueError("subprocess adapter needs a command")
        from .subproc import SubprocessAdapter

        return SubprocessAdapter(
            spec.adapter_id, spec.command, timeout_secs=spec.timeout_secs, env=spec.env
        )
    raise ValueError(f"unknown adapter kind '{spec.kind}'")


def build_adapter_or_broken(spec: AdapterSpec | str) -> Adapter:
    """build_adapter, but a failed process launch yields a BrokenAdapter.

    Configuration mistakes (unknown kind, flavor, fault, missing command)
    still raise: they are bugs in the caller, not toolchain behavior worth
    recording.  Only launch failures are folded into the campaign so a
    misbehaving external toolchain can never take the whole run down.
    """
    try:
        return build_adapter(spec)
    except AdapterFailure as e:
        return BrokenAdapter(e)
