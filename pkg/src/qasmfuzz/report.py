"""Campaign artifact layout: writing a full run to disk and reading it back.

Layout under the output directory:

    programs/<class_id>/0_seed.qasm      initial program per chain
    classes/<class_id>/step_<i>.qasm     every member, byte-exact
    classes/<class_id>/provenance.json   chain provenance
    warnings/crash_<n>.json              one file per warning,
    warnings/inequivalence_<n>.json        named by kind and number
    warnings/reduced_<n>.qasm            ddmin output for cluster reps
    clusters.json, metrics.csv, report.json

Artifacts are append-only: a fresh campaign requires an empty directory,
and nothing is ever overwritten.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .engine import (
    CampaignConfig,
    CampaignResult,
    EquivalenceClass,
    IteStep,
    Member,
    run_campaign,
    timing_report,
)
from .oracle import KIND_CRASH, VetResult, Warning, vet_classes
from .qasm import ParseError, parse, print_program
from .triage import Cluster, cluster_warnings, metrics_rows, reduce_warning


class ConfigError(Exception):
    """Bad configuration or an unusable campaign directory."""


class IoError(Exception):
    """Filesystem-level failure while persisting or loading artifacts."""


def warning_filename(w: Warning) -> str:
    return f"{w.kind}_{w.number}.json"


def _write_text(path: Path, text: str):
    if path.exists():
        raise IoError(f"refusing to overwrite existing artifact {path}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from None


def _write_json(path: Path, payload: object):
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def provenance_payload(cls: EquivalenceClass) -> dict:
    return {
        "class_id": cls.class_id,
        "stream_index": cls.stream_index,
        "mode": cls.mode,
        "adapter_used": cls.adapter_used,
        "members": len(cls.members),
        "steps": [
            {
                "step": st.step,
                "adapter": st.adapter_id,
                "transform": st.transform_id,
                "outcome": st.outcome,
                "stage": st.stage,
                "message": st.message,
            }
            for st in cls.steps
        ],
    }


def write_classes(out_dir: Path, classes: list[EquivalenceClass]):
    for cls in classes:
        class_dir = out_dir / "classes" / cls.class_id
        for i, member in enumerate(cls.members):
            _write_text(class_dir / f"step_{i}.qasm", member.text)
        _write_json(class_dir / "provenance.json", provenance_payload(cls))
        if cls.members:
            _write_text(
                out_dir / "programs" / cls.class_id / "0_seed.qasm",
                cls.members[0].text,
            )


def warning_payload(cls_dir: str, w: Warning) -> dict:
    return {
        "number": w.number,
        "kind": w.kind,
        "message": w.message,
        "class_id": w.class_id,
        "step": w.step,
        "pair": list(w.pair) if w.pair is not None else None,
        "adapter": w.adapter_id,
        "transform": w.transform_id,
        "stage": w.stage,
        "distance": w.distance,
        "provenance_path": f"{cls_dir}/{w.class_id}/provenance.json",
        **({"reduced_path": w.reduced_path} if w.reduced_path else {}),
    }


def write_warnings(out_dir: Path, warnings: list[Warning]):
    for w in warnings:
        _write_json(
            out_dir / "warnings" / warning_filename(w), warning_payload("classes", w)
        )


def write_clusters(out_dir: Path, clusters: list[Cluster]):
    payload = [
        {
            "key": c.key,
            "members": list(c.members),
            "representative": c.representative,
        }
        for c in clusters
    ]
    _write_json(out_dir / "clusters.json", payload)


def write_metrics(out_dir: Path, classes: list[EquivalenceClass]):
    path = out_dir / "metrics.csv"
    if path.exists():
        raise IoError(f"refusing to overwrite existing artifact {path}")
    rows = metrics_rows(classes)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["class_id", "step", "total_gates", "unique_gates", "entropy2", "entropy3"]
            )
            for r in rows:
                writer.writerow(
                    [r.class_id, r.step, r.total_gates, r.unique_gates,
                     f"{r.entropy2:.6f}", f"{r.entropy3:.6f}"]
                )
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from None


def reduce_representatives(
    out_dir: Path,
    config: CampaignConfig,
    classes: list[EquivalenceClass],
    warnings: list[Warning],
    clusters: list[Cluster],
):
    """ddmin the representative warning of each cluster and write the
    result next to the warnings; non-representative warnings keep their
    cluster's reduction via the representative."""
    by_number = {w.number: w for w in warnings}
    by_class = {c.class_id: c for c in classes}
    for cluster in clusters:
        w = by_number[cluster.representative]
        cls = by_class[w.class_id]
        reduced = reduce_warning(w, cls, config)
        if reduced is None:
            continue
        rel = f"warnings/reduced_{w.number}.qasm"
        _write_text(out_dir / rel, print_program(reduced))
        w.reduced_path = rel


def full_report_payload(
    config: CampaignConfig,
    classes: list[EquivalenceClass],
    vet: VetResult,
    clusters: list[Cluster],
    timing: dict,
) -> dict:
    crashes = sum(1 for w in vet.warnings if w.kind == KIND_CRASH)
    return {
        "version": __version__,
        "seed": config.seed,
        "counts": {
            "programs": len(classes),
            "classes": len(classes),
            "members": sum(len(c.members) for c in classes),
            "crashes": crashes,
            "inequivalences": len(vet.warnings) - crashes,
            "warnings": len(vet.warnings),
            "checked_pairs": vet.checked_pairs,
            "equivalent_pairs": vet.equivalent_pairs,
            "undecided": vet.undecided_pairs,
            "clusters": len(clusters),
        },
        "timing": timing,
        "config": asdict(config),
    }


def run_and_write(config: CampaignConfig, out_dir: Path) -> dict:
    """Full pipeline: campaign, detection, clustering, reduction, artifacts.

    Returns the report payload (also written to report.json).
    """
    out_dir = Path(out_dir)
    if out_dir.exists() and any(out_dir.iterdir()):
        raise IoError(f"output directory {out_dir} is not empty; use a fresh directory")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoError(f"cannot create {out_dir}: {e}") from None

    result: CampaignResult = run_campaign(config)

    t0 = time.perf_counter()
    vet = vet_classes(
        result.classes,
        k=config.k,
        tolerance=config.tolerance,
        max_qubits=config.max_oracle_qubits,
        workers=config.workers,
    )
    clusters = cluster_warnings(vet.warnings)
    if config.reduce:
        reduce_representatives(out_dir, config, result.classes, vet.warnings, clusters)
    detection_seconds = time.perf_counter() - t0

    write_classes(out_dir, result.classes)
    write_warnings(out_dir, vet.warnings)
    write_clusters(out_dir, clusters)
    write_metrics(out_dir, result.classes)

    timing = timing_report(
        result.timing["generate_seconds"],
        result.timing["ite_seconds"],
        detection_seconds,
        {
            "import": result.timing["ite_import_seconds"],
            "transform": result.timing["ite_transform_seconds"],
            "export": result.timing["ite_export_seconds"],
        },
    )
    payload = full_report_payload(config, result.classes, vet, clusters, timing)
    _write_json(out_dir / "report.json", payload)
    return payload


def load_classes(out_dir: Path) -> list[EquivalenceClass]:
    """Rebuild equivalence classes from a campaign directory."""
    classes_dir = Path(out_dir) / "classes"
    if not classes_dir.is_dir():
        raise ConfigError(f"{out_dir} does not contain a campaign (no classes/)")
    out = []
    for class_dir in sorted(classes_dir.iterdir()):
        prov_path = class_dir / "provenance.json"
        if not prov_path.is_file():
            raise ConfigError(f"{class_dir} lacks provenance.json")
        try:
            prov = json.loads(prov_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"unreadable provenance in {class_dir}: {e}") from None
        members = []
        for i in range(prov["members"]):
            text = (class_dir / f"step_{i}.qasm").read_text(encoding="utf-8")
            try:
                program = parse(text)
            except ParseError:
                program = None
            members.append(Member(text, program))
        steps = tuple(
            IteStep(
                step=s["step"],
                adapter_id=s["adapter"],
                transform_id=s["transform"],
                outcome=s["outcome"],
                stage=s["stage"],
                message=s["message"],
            )
            for s in prov["steps"]
        )
        out.append(
            EquivalenceClass(
                class_id=prov["class_id"],
                members=tuple(members),
                steps=steps,
                stream_index=prov["stream_index"],
                mode=prov["mode"],
                adapter_used=prov["adapter_used"],
            )
        )
    if not out:
        raise ConfigError(f"{out_dir} contains no classes")
    return out


def load_report(out_dir: Path) -> dict:
    path = Path(out_dir) / "report.json"
    if not path.is_file():
        raise ConfigError(f"{out_dir} has no report.json")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"unreadable report.json: {e}") from None
