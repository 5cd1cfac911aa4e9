"""Post-detection processing: test-case reduction, warning clustering,
and program-diversity metrics.

Reduction is classic ddmin over whole statements: registers and gate
definitions survive, statements are deleted in ever-finer chunks until the
result is 1-minimal for the recorded failure signal.  Signals replay the
recorded pipeline position from scratch, so they are exactly as
deterministic as the engine is.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, replace

from .adapters import Adapter, AdapterFailure, build_adapter_or_broken
from .engine import OUTCOME_CRASH, CampaignConfig, EquivalenceClass, STAGE_GENERATE_EXPORT
from .ir import LoweringError
from .oracle import (
    KIND_CRASH,
    VERDICT_NOT_EQUIVALENT,
    Warning,
    check_equivalence,
)
from .qasm import (
    ParseError,
    QasmProgram,
    parse,
    print_program,
    print_statement,
)

FailureSignal = Callable[[QasmProgram], bool]


class SignalNotReproducible(Exception):
    """The recorded failure did not recur on the unreduced program."""


# ---------------------------------------------------------------------------
# ddmin
# ---------------------------------------------------------------------------


def _with_statements(program: QasmProgram, statements: tuple) -> QasmProgram:
    return replace(program, statements=statements)


def _prune_unused_gate_defs(program: QasmProgram) -> QasmProgram:
    used = {s.gate_name for s in program.statements}
    kept = tuple(d for d in program.gate_defs if d.name in used)
    if len(kept) == len(program.gate_defs):
        return program
    return replace(program, gate_defs=kept)


def ddmin(program: QasmProgram, signal: FailureSignal) -> QasmProgram:
    """Smallest statement subset (1-minimal) still raising the signal.

    Classic delta debugging: try chunks, then chunk complements, doubling
    granularity on failure; then a final single-deletion sweep guarantees
    that removing any one remaining statement breaks the signal.  Unused
    gate definitions are pruned afterward when the signal allows it.
    """
    if not signal(program):
        raise SignalNotReproducible("signal is false on the unreduced program")

    stmts = list(program.statements)
    current = list(range(len(stmts)))

    def holds(indices: list[int]) -> bool:
        return signal(
            _with_statements(program, tuple(stmts[i] for i in indices))
        )

    n = 2
    while len(current) >= 2 and n <= len(current):
        size = len(current) // n
        chunks = [
            current[k * size : (k + 1) * size if k < n - 1 else len(current)]
            for k in range(n)
        ]
        progressed = False
        for chunk in chunks:
            if chunk and len(chunk) < len(current) and holds(chunk):
                current = chunk
                n = 2
                progressed = True
                break
        if not progressed:
            for chunk in chunks:
                comp = [i for i in current if i not in set(chunk)]
                if chunk and comp and holds(comp):
                    current = comp
                    n = max(n - 1, 2)
                    progressed = True
                    break
        if not progressed:
            if n >= len(current):
                break
            n = min(2 * n, len(current))

    # Single-deletion polish: repeat until no lone statement can go.
    changed = True
    while changed and len(current) > 1:
        changed = False
        for pos in range(len(current)):
            cand = current[:pos] + current[pos + 1 :]
            if holds(cand):
                current = cand
                changed = True
                break

    reduced = _with_statements(program, tuple(stmts[i] for i in current))
    pruned = _prune_unused_gate_defs(reduced)
    if pruned is not reduced and signal(pruned):
        return pruned
    return reduced


def is_one_minimal(program: QasmProgram, signal: FailureSignal) -> bool:
    """True when the signal holds and every single-statement deletion
    breaks it (exhaustive check; test helper)."""
    if not signal(program):
        return False
    stmts = program.statements
    for i in range(len(stmts)):
        cand = _with_statements(program, stmts[:i] + stmts[i + 1 :])
        if signal(cand):
            return False
    return True


# ---------------------------------------------------------------------------
# Replay signals
# ---------------------------------------------------------------------------


def _spec_for(config: CampaignConfig, adapter_id: str):
    for spec in config.adapters:
        if spec.adapter_id == adapter_id:
            return spec
    raise ValueError(f"adapter '{adapter_id}' is not in the campaign config")


def _crash_recurs(
    adapter: Adapter, text: str, stage: str, transform_id: str | None, message: str
) -> bool:
    try:
        handle = adapter.import_qasm(text)
        if stage == "import":
            return False
        if transform_id is not None:
            handle = adapter.apply_transform(handle, transform_id)
        if stage == "transform":
            return False
        adapter.export_qasm(handle)
        return False
    except AdapterFailure as e:
        return e.stage == stage and e.message == message


def build_replay_signal(
    warning: Warning, cls: EquivalenceClass, config: CampaignConfig
) -> FailureSignal | None:
    """Predicate testing whether a candidate program still triggers the
    recorded warning at its recorded pipeline position.

    Returns None when the warning has no trigger program to reduce (a
    failure during generation itself).
    """
    if warning.kind == KIND_CRASH:
        if warning.stage == STAGE_GENERATE_EXPORT:
            return None
        spec = _spec_for(config, warning.adapter_id)
        stage = warning.stage or "import"
        transform_id = warning.transform_id
        message = warning.message

        def crash_signal(candidate: QasmProgram) -> bool:
            text = print_program(candidate)
            adapter = build_adapter_or_broken(spec)
            try:
                return _crash_recurs(adapter, text, stage, transform_id, message)
            finally:
                adapter.close()

        return crash_signal

    i, j = warning.pair
    replay_steps = cls.steps[i:j]  # steps i+1 .. j (0-based list holds step k at k-1)
    specs = [_spec_for(config, st.adapter_id) for st in replay_steps]

    def inequivalence_signal(candidate: QasmProgram) -> bool:
        text = print_program(candidate)
        for spec, st in zip(specs, replay_steps):
            adapter = build_adapter_or_broken(spec)
            try:
                handle = adapter.import_qasm(text)
                if st.transform_id is not None:
                    handle = adapter.apply_transform(handle, st.transform_id)
                text = adapter.export_qasm(handle)
            except AdapterFailure:
                return False
            finally:
                adapter.close()
        try:
            final = parse(text)
        except ParseError:
            return False
        try:
            verdict = check_equivalence(
                candidate, final, config.tolerance, config.max_oracle_qubits
            )
        except LoweringError:
            return False
        return verdict.verdict == VERDICT_NOT_EQUIVALENT

    return inequivalence_signal


def trigger_program(warning: Warning, cls: EquivalenceClass) -> QasmProgram | None:
    """The program a warning's signal reduces, parsed leniently.

    For a crash at step s the trigger is the step's input, member s-1; for
    the synthesized end-of-chain import failure it is the final member
    itself; for an inequivalence over (i, j) it is member i.
    """
    if warning.kind == KIND_CRASH:
        if warning.stage == STAGE_GENERATE_EXPORT:
            return None
        is_chain_crash = any(
            st.outcome == OUTCOME_CRASH and st.step == warning.step
            for st in cls.steps
        )
        index = warning.step - 1 if is_chain_crash else warning.step
    else:
        index = warning.pair[0]
    if index is None or not 0 <= index < len(cls.members):
        return None
    member = cls.members[index]
    if member.program is not None:
        return member.program
    try:
        return parse(member.text, strict=False)
    except ParseError:
        return None


def reduce_warning(
    warning: Warning, cls: EquivalenceClass, config: CampaignConfig
) -> QasmProgram | None:
    """ddmin the warning's trigger; None when there is nothing to reduce."""
    signal = build_replay_signal(warning, cls, config)
    if signal is None:
        return None
    program = trigger_program(warning, cls)
    if program is None:
        return None
    return ddmin(program, signal)


# ---------------------------------------------------------------------------
# Clustering
# ---------------------------------------------------------------------------

_FLOAT_RE = re.compile(r"[-+]?\d+\.\d+(?:[eE][-+]?\d+)?|[-+]?\d+[eE][-+]?\d+")
_INT_RE = re.compile(r"\d+")


def normalize_message(message: str) -> str:
    """Collapse numeric noise so identical root causes key identically."""
    out = _FLOAT_RE.sub("<N>", message)
    return _INT_RE.sub("<N>", out)


@dataclass(frozen=True)
class Cluster:
    key: str
    members: tuple[int, ...]  # warning numbers
    representative: int


def cluster_key(warning: Warning) -> str:
    if warning.kind == KIND_CRASH:
        return normalize_message(warning.message)
    return f"{warning.message}::{warning.transform_id or 'none'}"


def cluster_warnings(warnings: list[Warning]) -> list[Cluster]:
    """Partition warnings by normalized message (inequivalences sub-keyed
    by the blamed transform); representative = lowest warning number."""
    groups: dict[str, list[int]] = {}
    order: list[str] = []
    for w in sorted(warnings, key=lambda w: w.number):
        key = cluster_key(w)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(w.number)
    return [
        Cluster(key=key, members=tuple(groups[key]), representative=groups[key][0])
        for key in order
    ]


# ---------------------------------------------------------------------------
# Diversity metrics
# ---------------------------------------------------------------------------


def entropy_ngrams(program: QasmProgram, n: int) -> float:
    """Shannon entropy (bits) of n-grams of consecutive statement lines.

    Lines are the printed statements, in order, taken verbatim; a program
    with fewer than n statements has zero entropy by convention.
    """
    lines = [print_statement(s) for s in program.statements]
    if len(lines) < n:
        return 0.0
    grams = Counter(tuple(lines[i : i + n]) for i in range(len(lines) - n + 1))
    total = sum(grams.values())
    return -sum((c / total) * math.log2(c / total) for c in grams.values())


@dataclass(frozen=True)
class MetricsRow:
    class_id: str
    step: int
    total_gates: int
    unique_gates: int
    entropy2: float
    entropy3: float


def metrics_rows(classes: list[EquivalenceClass]) -> list[MetricsRow]:
    """One row per parseable member of every class."""
    from .qasm import gate_statement_count, unique_gate_names

    rows = []
    for cls in classes:
        for step, member in enumerate(cls.members):
            if member.program is None:
                continue
            rows.append(
                MetricsRow(
                    class_id=cls.class_id,
                    step=step,
                    total_gates=gate_statement_count(member.program),
                    unique_gates=len(unique_gate_names(member.program)),
                    entropy2=entropy_ngrams(member.program, 2),
                    entropy3=entropy_ngrams(member.program, 3),
                )
            )
    return rows
