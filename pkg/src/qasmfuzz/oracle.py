"""Bug detection over equivalence classes.

Two detectors: every adapter failure recorded by the engine becomes a crash
warning, and selected member pairs are compared for unitary equivalence up
to a global phase.  Pair selection keeps only the k pairs with the largest
gate-count difference — the cheap proxy for "most transformed against least
transformed" that prunes ~90% of comparisons at k=5, m=5.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import OUTCOME_CRASH, EquivalenceClass
from .ir import Circuit, LoweringError, TooLargeError, lower, unitary_of
from .qasm import ParseError, QasmProgram, gate_statement_count, parse

VERDICT_EQUIVALENT = "equivalent"
VERDICT_NOT_EQUIVALENT = "not_equivalent"
VERDICT_UNDECIDED = "undecided"

REASON_TOO_LARGE = "too_large"
REASON_TIMEOUT = "timeout"

KIND_CRASH = "crash"
KIND_INEQUIVALENCE = "inequivalence"

NOT_EQUIVALENT_MESSAGE = "not equivalent"

DEFAULT_K = 5
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ORACLE_QUBITS = 8


class TooFewMembers(Exception):
    pass


@dataclass(frozen=True)
class PairSelection:
    """The pairs of one class chosen for equivalence checking."""

    class_id: str
    pairs: tuple[tuple[int, int, int], ...]  # (member i, member j, |count_i - count_j|)


@dataclass(frozen=True)
class EquivVerdict:
    verdict: str
    reason: str | None = None
    phase: complex | None = None
    distance: float | None = None


@dataclass
class Warning:
    """One finding; numbered after collection so ids are deterministic."""

    kind: str  # crash | inequivalence
    message: str
    class_id: str
    step: int | None = None
    pair: tuple[int, int] | None = None
    adapter_id: str | None = None
    transform_id: str | None = None
    stage: str | None = None
    distance: float | None = None
    number: int | None = None
    reduced_path: str | None = None


@dataclass
class VetResult:
    warnings: list[Warning]
    checked_pairs: int = 0
    equivalent_pairs: int = 0
    undecided_pairs: int = 0


def select_pairs_from_counts(
    class_id: str, indexed_counts: list[tuple[int, int]], k: int
) -> PairSelection:
    """Top-k pairs by descending gate-count difference over (index, count)
    rows; ties break toward smaller indices."""
    if len(indexed_counts) < 2:
        raise TooFewMembers(f"class {class_id} has fewer than 2 comparable members")
    if k < 1:
        raise ValueError("k must be at least 1")
    all_pairs = []
    for a in range(len(indexed_counts)):
        i, ci = indexed_counts[a]
        for b in range(a + 1, len(indexed_counts)):
            j, cj = indexed_counts[b]
            all_pairs.append((abs(ci - cj), i, j))
    all_pairs.sort(key=lambda t: (-t[0], t[1], t[2]))
    chosen = all_pairs[: min(k, len(all_pairs))]
    return PairSelection(class_id, tuple((i, j, d) for d, i, j in chosen))


def select_pairs(cls: EquivalenceClass, k: int = DEFAULT_K) -> PairSelection:
    """Pair selection over a class's parseable members."""
    if len(cls.members) < 2:
        raise TooFewMembers(f"class {cls.class_id} has fewer than 2 members")
    counts = [
        (i, gate_statement_count(m.program))
        for i, m in enumerate(cls.members)
        if m.program is not None
    ]
    return select_pairs_from_counts(cls.class_id, counts, k)


def compare_unitaries(
    ua: np.ndarray, ub: np.ndarray, tolerance: float = DEFAULT_TOLERANCE
) -> EquivVerdict:
    """Equality up to a global phase in max-norm.

    The candidate phase is read off the largest-magnitude entry of
    ub^dagger @ ua: when ua == e^{i phi} ub that product is e^{i phi} I,
    so any entry on its diagonal carries the phase; taking the largest
    entry keeps the estimate stable when the pair is far from equivalent.
    """
    d = ub.conj().T @ ua
    flat = np.abs(d).argmax()
    entry = d.flat[flat]
    mag = abs(entry)
    phase = entry / mag if mag > 0 else complex(1.0)
    distance = float(np.abs(ua - phase * ub).max())
    if distance <= tolerance:
        return EquivVerdict(VERDICT_EQUIVALENT, phase=phase, distance=distance)
    return EquivVerdict(VERDICT_NOT_EQUIVALENT, phase=phase, distance=distance)


def _pad(circuit: Circuit, num_qubits: int) -> Circuit:
    if circuit.num_qubits == num_qubits:
        return circuit
    return Circuit(num_qubits, circuit.ops, circuit.source_register_map)


def check_equivalence(
    a: QasmProgram,
    b: QasmProgram,
    tolerance: float = DEFAULT_TOLERANCE,
    max_qubits: int = DEFAULT_MAX_ORACLE_QUBITS,
) -> EquivVerdict:
    """Unitary equivalence of two programs, up to global phase.

    The narrower program is padded with idle qubits so both lower to the
    same dimension.  Sizes beyond max_qubits return undecided(too_large) —
    never a silent pass.  LoweringError propagates: a member that cannot
    lower is the caller's crash finding.
    """
    ca = lower(a)
    cb = lower(b)
    n = max(ca.num_qubits, cb.num_qubits)
    if n > max_qubits:
        return EquivVerdict(VERDICT_UNDECIDED, reason=REASON_TOO_LARGE)
    ua = unitary_of(_pad(ca, n), max_qubits=max_qubits)
    ub = unitary_of(_pad(cb, n), max_qubits=max_qubits)
    return compare_unitaries(ua, ub, tolerance)


def _vet_one(
    cls: EquivalenceClass, k: int, tolerance: float, max_qubits: int
) -> VetResult:
    warnings: list[Warning] = []
    result = VetResult(warnings)

    def producer_of(member_index: int) -> tuple[str | None, str | None]:
        """(adapter, transform) of the step that emitted this member."""
        if member_index == 0:
            return (cls.adapter_used, None)
        step = cls.steps[member_index - 1]
        return (step.adapter_id, step.transform_id)

    has_crash_step = False
    for st in cls.steps:
        if st.outcome == OUTCOME_CRASH:
            has_crash_step = True
            warnings.append(
                Warning(
                    kind=KIND_CRASH,
                    message=st.message or "",
                    class_id=cls.class_id,
                    step=st.step,
                    adapter_id=st.adapter_id,
                    transform_id=st.transform_id,
                    stage=st.stage,
                )
            )

    # A chain that ran to completion can still end on unparseable text: no
    # later import witnessed it, so synthesize that import failure here.
    if cls.members and cls.members[-1].program is None and not has_crash_step:
        idx = len(cls.members) - 1
        try:
            parse(cls.members[idx].text)
            message = "export produced unparseable text"
        except ParseError as e:
            message = e.message
        adapter_id, transform_id = producer_of(idx)
        warnings.append(
            Warning(
                kind=KIND_CRASH,
                message=message,
                class_id=cls.class_id,
                step=idx,
                adapter_id=adapter_id,
                transform_id=transform_id,
                stage="import",
            )
        )

    # Lower each parseable member once; a member that will not lower is a
    # finding on its own and drops out of pairing.
    circuits: dict[int, Circuit] = {}
    for i, m in enumerate(cls.members):
        if m.program is None:
            continue
        try:
            circuits[i] = lower(m.program)
        except LoweringError as e:
            adapter_id, transform_id = producer_of(i)
            warnings.append(
                Warning(
                    kind=KIND_CRASH,
                    message=str(e),
                    class_id=cls.class_id,
                    step=i,
                    adapter_id=adapter_id,
                    transform_id=transform_id,
                    stage="import",
                )
            )

    indexed_counts = [
        (i, gate_statement_count(cls.members[i].program)) for i in sorted(circuits)
    ]
    if len(indexed_counts) < 2:
        return result

    selection = select_pairs_from_counts(cls.class_id, indexed_counts, k)
    unitaries: dict[int, np.ndarray | None] = {}
    width = max(circuits[i].num_qubits for i, _ in indexed_counts)

    def unitary_for(i: int) -> np.ndarray | None:
        if i not in unitaries:
            if width > max_qubits:
                unitaries[i] = None
            else:
                try:
                    unitaries[i] = unitary_of(_pad(circuits[i], width), max_qubits)
                except TooLargeError:
                    unitaries[i] = None
        return unitaries[i]

    for i, j, _diff in selection.pairs:
        result.checked_pairs += 1
        ua = unitary_for(i)
        ub = unitary_for(j)
        if ua is None or ub is None:
            result.undecided_pairs += 1
            continue
        verdict = compare_unitaries(ua, ub, tolerance)
        if verdict.verdict == VERDICT_EQUIVALENT:
            result.equivalent_pairs += 1
        else:
            blamed_adapter, blamed_transform = producer_of(max(i, j))
            warnings.append(
                Warning(
                    kind=KIND_INEQUIVALENCE,
                    message=NOT_EQUIVALENT_MESSAGE,
                    class_id=cls.class_id,
                    pair=(i, j),
                    adapter_id=blamed_adapter,
                    transform_id=blamed_transform,
                    distance=verdict.distance,
                )
            )
    return result


def _warning_sort_key(w: Warning):
    return (
        w.class_id,
        0 if w.kind == KIND_CRASH else 1,
        w.step if w.step is not None else -1,
        w.pair if w.pair is not None else (-1, -1),
    )


def vet_classes(
    classes: list[EquivalenceClass],
    k: int = DEFAULT_K,
    tolerance: float = DEFAULT_TOLERANCE,
    max_qubits: int = DEFAULT_MAX_ORACLE_QUBITS,
    workers: int = 1,
) -> VetResult:
    """All warnings over all classes, numbered deterministically.

    Classes with fewer than two comparable members are skipped for pairing
    (their crash records still count).  Warning numbers are assigned after
    collection, sorted by (class, kind, position), so they are stable under
    any worker count.
    """
    if workers > 1 and len(classes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(
                pool.map(lambda c: _vet_one(c, k, tolerance, max_qubits), classes)
            )
    else:
        partials = [_vet_one(c, k, tolerance, max_qubits) for c in classes]

    combined = VetResult([])
    for p in partials:
        combined.warnings.extend(p.warnings)
        combined.checked_pairs += p.checked_pairs
        combined.equivalent_pairs += p.equivalent_pairs
        combined.undecided_pairs += p.undecided_pairs
    combined.warnings.sort(key=_warning_sort_key)
    for n, w in enumerate(combined.warnings):
        w.number = n
    return combined
