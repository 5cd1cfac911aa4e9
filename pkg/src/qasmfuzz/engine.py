"""Chain runner: pushes each generated program through repeated
import -> transform -> export rounds across randomly sampled adapters,
accumulating an equivalence class per chain.

Determinism contract: all sampling derives from (seed, chain_index, step),
never from thread scheduling, so identical configs replay byte-identically
regardless of worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .adapters import (
    Adapter,
    AdapterFailure,
    AdapterSpec,
    CANNED_ADAPTERS,
    build_adapter_or_broken,
)
from .generator import DEFAULT_GATE_POOL, GenConfig, GeneratedProgram, generate
from .qasm import ParseError, QasmProgram, parse
from .seeding import derive_rng

OUTCOME_OK = "ok"
OUTCOME_CRASH = "crash"

STAGE_GENERATE_EXPORT = "generate-export"


@dataclass(frozen=True)
class CampaignConfig:
    """Everything a full campaign needs; every field has a default."""

    seed: int = 0
    programs: int = 10
    iterations: int = 5
    adapters: tuple[AdapterSpec, ...] = (
        CANNED_ADAPTERS["ref_a"],
        CANNED_ADAPTERS["ref_b"],
    )
    k: int = 5
    tolerance: float = 1e-9
    max_oracle_qubits: int = 8
    workers: int = 1
    reduce: bool = True
    max_classes: int | None = None
    # generator knobs
    num_qubits: int = 11
    num_gates: int = 15
    gate_pool: tuple[str, ...] = DEFAULT_GATE_POOL
    mode_mix: float = 0.5
    include_creg: bool = True

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.programs < 0:
            raise ValueError("programs must be non-negative")
        if not self.adapters:
            raise ValueError("at least one adapter is required")
        ids = [spec.adapter_id for spec in self.adapters]
        if len(set(ids)) != len(ids):
            raise ValueError("adapter ids must be unique")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    def gen_config(self) -> GenConfig:
        return GenConfig(
            seed=self.seed,
            num_qubits=self.num_qubits,
            num_gates=self.num_gates,
            gate_pool=self.gate_pool,
            mode_mix=self.mode_mix,
            include_creg=self.include_creg,
        )


@dataclass(frozen=True)
class IteStep:
    """One chain round (or the generation round, step 0)."""

    step: int
    adapter_id: str
    transform_id: str | None
    outcome: str = OUTCOME_OK
    stage: str | None = None
    message: str | None = None


@dataclass(frozen=True)
class Member:
    """One program text in a class; ``program`` is None if unparseable."""

    text: str
    program: QasmProgram | None = field(compare=False, default=None)


@dataclass(frozen=True)
class EquivalenceClass:
    """Ordered programs from one chain, equivalent by construction.

    members[i] for i >= 1 is the output of the step with index i; a crash at
    step i truncates the chain, so len(members) == i and the final step
    record carries the failure.
    """

    class_id: str
    members: tuple[Member, ...]
    steps: tuple[IteStep, ...]
    stream_index: int
    mode: str
    adapter_used: str | None = None


@dataclass
class CampaignResult:
    config: CampaignConfig
    classes: list[EquivalenceClass]
    timing: dict[str, float]


def class_id_for(index: int) -> str:
    return f"c{index:05d}"


def run_chain(
    initial: GeneratedProgram,
    config: CampaignConfig,
    adapters: dict[str, Adapter],
    chain_index: int,
    stage_seconds: dict[str, float] | None = None,
) -> EquivalenceClass:
    """Run one import/transform/export chain over the initial program."""

    def clocked(stage: str, fn, *args):
        t0 = time.perf_counter()
        try:
            return fn(*args)
        finally:
            if stage_seconds is not None:
                stage_seconds[stage] = stage_seconds.get(stage, 0.0) + (
                    time.perf_counter() - t0
                )

    adapter_ids = tuple(adapters)
    steps: list[IteStep] = []
    members: list[Member] = []

    if initial.crash is not None:
        steps.append(
            IteStep(
                step=0,
                adapter_id=initial.crash.adapter_id,
                transform_id=None,
                outcome=OUTCOME_CRASH,
                stage=STAGE_GENERATE_EXPORT,
                message=initial.crash.message,
            )
        )
    else:
        members.append(Member(initial.text, initial.program))
        current = initial.text
        for i in range(1, config.iterations + 1):
            rng = derive_rng(config.seed, "chain", chain_index, "step", i)
            adapter_id = adapter_ids[rng.randrange(len(adapter_ids))]
            adapter = adapters[adapter_id]
            transform_id: str | None = None
            try:
                transforms = adapter.list_transforms()
                if transforms:
                    transform_id = transforms[rng.randrange(len(transforms))]
                handle = clocked("import", adapter.import_qasm, current)
                if transform_id is not None:
                    handle = clocked(
                        "transform", adapter.apply_transform, handle, transform_id
                    )
                out = clocked("export", adapter.export_qasm, handle)
            except AdapterFailure as e:
                steps.append(
                    IteStep(i, adapter_id, transform_id, OUTCOME_CRASH, e.stage, e.message)
                )
                break
            steps.append(IteStep(i, adapter_id, transform_id))
            try:
                program = parse(out)
            except ParseError:
                program = None
            members.append(Member(out, program))
            current = out

    return EquivalenceClass(
        class_id=class_id_for(chain_index),
        members=tuple(members),
        steps=tuple(steps),
        stream_index=initial.stream_index,
        mode=initial.mode,
        adapter_used=initial.adapter_used,
    )


def run_campaign(config: CampaignConfig) -> CampaignResult:
    """Generate programs and run one chain per program.

    Each chain gets fresh adapter instances (handles are session-scoped),
    so chains parallelize without shared mutable state.
    """
    n = config.programs
    if config.max_classes is not None:
        n = min(n, config.max_classes)
    gen_config = config.gen_config()

    t0 = time.perf_counter()
    gen_adapters = tuple(build_adapter_or_broken(spec) for spec in config.adapters)
    try:
        initial = [generate(gen_config, i, gen_adapters) for i in range(n)]
    finally:
        for a in gen_adapters:
            a.close()
    gen_seconds = time.perf_counter() - t0

    stage_totals: dict[str, float] = {"import": 0.0, "transform": 0.0, "export": 0.0}

    def one(chain_index: int) -> tuple[EquivalenceClass, dict[str, float]]:
        adapters = {
            spec.adapter_id: build_adapter_or_broken(spec) for spec in config.adapters
        }
        stage_seconds: dict[str, float] = {}
        try:
            cls = run_chain(
                initial[chain_index], config, adapters, chain_index, stage_seconds
            )
        finally:
            for a in adapters.values():
                a.close()
        return cls, stage_seconds

    t1 = time.perf_counter()
    if config.workers > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(one, range(n)))
    else:
        outcomes = [one(i) for i in range(n)]
    ite_seconds = time.perf_counter() - t1

    classes = [cls for cls, _ in outcomes]
    for _, stage_seconds in outcomes:
        for stage, secs in stage_seconds.items():
            stage_totals[stage] = stage_totals.get(stage, 0.0) + secs

    timing = {
        "generate_seconds": gen_seconds,
        "ite_seconds": ite_seconds,
        "ite_import_seconds": stage_totals["import"],
        "ite_transform_seconds": stage_totals["transform"],
        "ite_export_seconds": stage_totals["export"],
    }
    return CampaignResult(config=config, classes=classes, timing=timing)


def timing_report(
    generate_seconds: float,
    ite_seconds: float,
    detection_seconds: float,
    stage_seconds: dict[str, float],
) -> dict:
    """Wall-time fractions per component and per chain stage.

    Each level of fractions sums to 1 (exactly 0 everywhere when that
    level saw no time at all).
    """
    total = generate_seconds + ite_seconds + detection_seconds
    if total > 0:
        components = {
            "generator": generate_seconds / total,
            "ite": ite_seconds / total,
            "detection": detection_seconds / total,
        }
    else:
        components = {"generator": 0.0, "ite": 0.0, "detection": 0.0}
    stage_total = sum(stage_seconds.get(s, 0.0) for s in ("import", "transform", "export"))
    if stage_total > 0:
        stages = {
            s: stage_seconds.get(s, 0.0) / stage_total
            for s in ("import", "transform", "export")
        }
    else:
        stages = {"import": 0.0, "transform": 0.0, "export": 0.0}
    return {
        "seconds": {
            "generator": generate_seconds,
            "ite": ite_seconds,
            "detection": detection_seconds,
        },
        "component_fractions": components,
        "ite_stage_fractions": stages,
    }


def rebuild_config(overrides: dict) -> CampaignConfig:
    """CampaignConfig from a plain dict (e.g. parsed JSON), defaults filled."""
    data = dict(overrides)
    if "adapters" in data:
        specs = []
        for item in data["adapters"]:
            if isinstance(item, str):
                if item not in CANNED_ADAPTERS:
                    raise ValueError(f"unknown adapter id '{item}'")
                specs.append(CANNED_ADAPTERS[item])
            else:
                fields = dict(item)
                if "env" in fields:
                    fields["env"] = dict(fields["env"])
                specs.append(AdapterSpec(**fields))
        data["adapters"] = tuple(specs)
    if "gate_pool" in data:
        data["gate_pool"] = tuple(data["gate_pool"])
    return CampaignConfig(**data)


def with_timeout(config: CampaignConfig, timeout_secs: float) -> CampaignConfig:
    """Apply one per-call timeout to every subprocess adapter spec."""
    specs = tuple(
        replace(s, timeout_secs=timeout_secs) if s.kind == "subprocess" else s
        for s in config.adapters
    )
    return replace(config, adapters=specs)
