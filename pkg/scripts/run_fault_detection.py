"""Fault-injection sweep: can the pipeline catch each planted defect?

Runs one campaign per built-in faulty adapter (each alongside the two honest
references), vets the resulting classes, clusters the warnings, and for
crash clusters reduces the representative down to its minimal trigger.

Usage:
    python3 scripts/run_fault_detection.py [--seed N] [--programs N]
"""

import argparse
import time

from qasmfuzz.adapters import CANNED_ADAPTERS
from qasmfuzz.engine import CampaignConfig, run_campaign
from qasmfuzz.oracle import vet_classes
from qasmfuzz.qasm import print_statement
from qasmfuzz.triage import cluster_warnings, reduce_warning

MUTANTS = ("mutant_c4x", "mutant_dropdef", "mutant_cu")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=811)
    ap.add_argument("--programs", type=int, default=200)
    args = ap.parse_args()

    for mutant in MUTANTS:
        config = CampaignConfig(
            seed=args.seed,
            programs=args.programs,
            iterations=5,
            num_qubits=6,
            num_gates=15,
            adapters=(
                CANNED_ADAPTERS["ref_a"],
                CANNED_ADAPTERS["ref_b"],
                CANNED_ADAPTERS[mutant],
            ),
        )
        started = time.monotonic()
        result = run_campaign(config)
        vet = vet_classes(
            result.classes,
            k=config.k,
            tolerance=config.tolerance,
            max_qubits=config.max_oracle_qubits,
        )
        clusters = cluster_warnings(vet.warnings)
        elapsed = time.monotonic() - started

        crashes = sum(1 for w in vet.warnings if w.kind == "crash")
        ineq = sum(1 for w in vet.warnings if w.kind == "inequivalence")
        print(f"\n=== {mutant} ({elapsed:.1f}s) ===")
        print(f"crashes={crashes} inequivalences={ineq} clusters={len(clusters)}")
        for cluster in clusters:
            rep = next(w for w in vet.warnings if w.number == cluster.representative)
            print(f"  [{len(cluster.members)}x] {cluster.key}")
            if rep.kind == "crash":
                cls = next(c for c in result.classes if c.class_id == rep.class_id)
                reduced = reduce_warning(rep, cls, config)
                if reduced is not None:
                    trigger = " ".join(
                        print_statement(s) for s in reduced.statements
                    )
                    print(f"      minimal trigger: {trigger}")


if __name__ == "__main__":
    main()
