"""Command-line interface.

Subcommands: generate (seed programs only), fuzz (full pipeline), check
(re-vet an existing campaign directory), reduce (ddmin one warning),
report (print a campaign's report.json).

Exit codes: 0 success; 1 fuzz found warnings; 2 configuration error;
3 filesystem error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .adapters import build_adapter_or_broken
from .engine import CampaignConfig, class_id_for, rebuild_config, with_timeout
from .generator import generate
from .oracle import KIND_CRASH, Warning, vet_classes
from .report import (
    ConfigError,
    IoError,
    _write_text,
    load_classes,
    load_report,
    run_and_write,
    warning_filename,
)
from .qasm import print_program
from .triage import reduce_warning

EXIT_OK = 0
EXIT_WARNINGS = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON config file; flags override it")
    p.add_argument("--seed", type=int, help="campaign seed")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--programs", type=int, help="number of initial programs")
    p.add_argument("--iterations", type=int, help="chain steps per program")
    p.add_argument("--adapters", type=str, help="comma-separated adapter ids")
    p.add_argument("--k", type=int, help="pairs checked per class")
    p.add_argument("--tolerance", type=float, help="equivalence tolerance (max-norm)")
    p.add_argument("--workers", type=int, help="parallel chain/vet workers")
    p.add_argument(
        "--timeout-secs", type=float, help="per-call timeout for subprocess adapters"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qasmfuzz",
        description="Differential testing of OpenQASM toolchains via transform round-trips.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("generate", "write seed programs only"),
        ("fuzz", "run the full campaign pipeline"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common_flags(p)
        if name == "fuzz":
            p.add_argument(
                "--no-reduce",
                action="store_true",
                help="skip ddmin reduction of cluster representatives",
            )

    p = sub.add_parser("check", help="re-run detection over an existing campaign")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("reduce", help="ddmin one warning of an existing campaign")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--warning", type=int, required=True, help="warning number")

    p = sub.add_parser("report", help="print an existing campaign's report")
    p.add_argument("--out", type=Path, required=True)

    return parser


def resolve_config(args: argparse.Namespace) -> CampaignConfig:
    data: dict = {}
    if getattr(args, "config", None) is not None:
        try:
            data.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
        except OSError as e:
            raise ConfigError(f"cannot read config file: {e}") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file is not valid JSON: {e}") from None
    for key in ("seed", "programs", "iterations", "k", "tolerance", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    if getattr(args, "adapters", None) is not None:
        data["adapters"] = [a.strip() for a in args.adapters.split(",") if a.strip()]
    if getattr(args, "no_reduce", False):
        data["reduce"] = False
    try:
        config = rebuild_config(data)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from None
    if getattr(args, "timeout_secs", None) is not None:
        config = with_timeout(config, args.timeout_secs)
    return config


def cmd_generate(args) -> int:
    config = resolve_config(args)
    out_dir = Path(args.out)
    if out_dir.exists() and any(out_dir.iterdir()):
        raise IoError(f"output directory {out_dir} is not empty; use a fresh directory")
    gen_config = config.gen_config()
    adapters = tuple(build_adapter_or_broken(spec) for spec in config.adapters)
    written = 0
    try:
        for i in range(config.programs):
            gp = generate(gen_config, i, adapters)
            if gp.crash is not None:
                print(
                    f"program {i}: generation crashed "
                    f"({gp.crash.adapter_id}: {gp.crash.message})"
                )
                continue
            _write_text(
                out_dir / "programs" / class_id_for(i) / "0_seed.qasm", gp.text
            )
            written += 1
    finally:
        for a in adapters:
            a.close()
    print(f"wrote {written} programs to {out_dir}")
    return EXIT_OK


def _print_warning_lines(warnings: list[Warning]):
    for w in warnings:
        where = f"step {w.step}" if w.pair is None else f"pair {w.pair}"
        print(
            f"warning {w.number}: {w.kind} [{w.class_id} {where}] "
            f"{w.adapter_id or '-'}/{w.transform_id or '-'}: {w.message}"
        )


def cmd_fuzz(args) -> int:
    config = resolve_config(args)
    payload = run_and_write(config, Path(args.out))
    counts = payload["counts"]
    print(
        f"programs={counts['programs']} classes={counts['classes']} "
        f"members={counts['members']} crashes={counts['crashes']} "
        f"inequivalences={counts['inequivalences']} "
        f"undecided={counts['undecided']} clusters={counts['clusters']}"
    )
    return EXIT_WARNINGS if counts["warnings"] > 0 else EXIT_OK


def cmd_check(args) -> int:
    out_dir = Path(args.out)
    classes = load_classes(out_dir)
    defaults: dict = {}
    try:
        defaults = load_report(out_dir).get("config", {})
    except ConfigError:
        pass
    k = args.k if args.k is not None else defaults.get("k", 5)
    tolerance = (
        args.tolerance if args.tolerance is not None else defaults.get("tolerance", 1e-9)
    )
    max_qubits = defaults.get("max_oracle_qubits", 8)
    workers = args.workers if args.workers is not None else 1
    vet = vet_classes(classes, k=k, tolerance=tolerance, max_qubits=max_qubits,
                      workers=workers)
    crashes = sum(1 for w in vet.warnings if w.kind == KIND_CRASH)
    print(
        f"classes={len(classes)} crashes={crashes} "
        f"inequivalences={len(vet.warnings) - crashes} "
        f"undecided={vet.undecided_pairs}"
    )
    _print_warning_lines(vet.warnings)
    return EXIT_OK


def _load_warning(out_dir: Path, number: int) -> Warning:
    matches = list((out_dir / "warnings").glob(f"*_{number}.json"))
    if len(matches) != 1:
        raise ConfigError(f"no unique warning numbered {number} under {out_dir}")
    data = json.loads(matches[0].read_text(encoding="utf-8"))
    return Warning(
        kind=data["kind"],
        message=data["message"],
        class_id=data["class_id"],
        step=data["step"],
        pair=tuple(data["pair"]) if data["pair"] is not None else None,
        adapter_id=data["adapter"],
        transform_id=data["transform"],
        stage=data["stage"],
        distance=data["distance"],
        number=data["number"],
    )


def cmd_reduce(args) -> int:
    out_dir = Path(args.out)
    report = load_report(out_dir)
    config = rebuild_config(report["config"])
    warning = _load_warning(out_dir, args.warning)
    classes = {c.class_id: c for c in load_classes(out_dir)}
    if warning.class_id not in classes:
        raise ConfigError(f"warning {args.warning} references missing class "
                          f"{warning.class_id}")
    reduced = reduce_warning(warning, classes[warning.class_id], config)
    if reduced is None:
        print(f"warning {args.warning} has no trigger program to reduce")
        return EXIT_OK
    rel = f"warnings/reduced_{warning.number}.qasm"
    _write_text(out_dir / rel, print_program(reduced))
    print(f"wrote {rel} ({len(reduced.statements)} statements)")
    return EXIT_OK


def cmd_report(args) -> int:
    payload = load_report(Path(args.out))
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "fuzz": cmd_fuzz,
    "check": cmd_check,
    "reduce": cmd_reduce,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except IoError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
