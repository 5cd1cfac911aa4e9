"""Cross-language integration: the Node shim driven over the wire protocol.

These tests exercise the package against the independently implemented
toolchain under shim-ts/.  They are skipped when node or the compiled shim
is unavailable (run ``npm install && npm run build`` in shim-ts/ first).
"""

import shutil
from pathlib import Path

import pytest

from qasmfuzz.adapters import CANNED_ADAPTERS, AdapterSpec
from qasmfuzz.engine import OUTCOME_CRASH, OUTCOME_OK, CampaignConfig, run_campaign
from qasmfuzz.oracle import check_equivalence, vet_classes
from qasmfuzz.qasm import parse
from qasmfuzz.subproc import SubprocessAdapter

from conftest import CORPUS_H_SWAP

SHIM_MAIN = Path(__file__).resolve().parent.parent / "shim-ts" / "dist" / "main.js"

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not SHIM_MAIN.exists(),
    reason="node shim not built (needs node and shim-ts/dist/main.js)",
)


def _shim_spec(adapter_id: str = "shim") -> AdapterSpec:
    return AdapterSpec(
        adapter_id=adapter_id, kind="subprocess", command=f"node {SHIM_MAIN}"
    )


class TestShimConversation:
    def test_full_round_trip_preserves_semantics(self):
        adapter = SubprocessAdapter("shim", f"node {SHIM_MAIN}")
        try:
            transforms = adapter.list_transforms()
            assert "noop.identity" in transforms
            assert "tidy.cancel_adjacent_inverses" in transforms

            handle = adapter.import_qasm(CORPUS_H_SWAP)
            for transform_id in transforms:
                handle = adapter.apply_transform(handle, transform_id)
            out = adapter.export_qasm(handle)
        finally:
            adapter.close()

        verdict = check_equivalence(parse(CORPUS_H_SWAP), parse(out))
        assert verdict.verdict == "equivalent"

    def test_toolchain_error_carries_shim_message(self):
        adapter = SubprocessAdapter("shim", f"node {SHIM_MAIN}")
        try:
            with pytest.raises(Exception) as excinfo:
                adapter.import_qasm("definitely not a program")
        finally:
            adapter.close()
        assert excinfo.value.stage == "import"
        assert "OPENQASM" in excinfo.value.message


class TestMixedCampaign:
    def test_fifty_programs_mixing_reference_and_shim(self):
        config = CampaignConfig(
            seed=424242,
            programs=50,
            iterations=4,
            adapters=(CANNED_ADAPTERS["ref_a"], _shim_spec()),
            num_qubits=5,
            num_gates=10,
            reduce=False,
            workers=4,
        )
        result = run_campaign(config)
        assert len(result.classes) == 50

        shim_steps = 0
        for cls in result.classes:
            assert all(step.outcome == OUTCOME_OK for step in cls.steps)
            assert len(cls.members) == config.iterations + 1
            shim_steps += sum(1 for s in cls.steps if s.adapter_id == "shim")
        assert shim_steps > 0, "the shim was never selected for any step"

        vet = vet_classes(result.classes, k=config.k, tolerance=config.tolerance)
        assert vet.warnings == []
        assert vet.checked_pairs > 0
        assert vet.equivalent_pairs == vet.checked_pairs

    def test_dying_toolchain_yields_warnings_not_termination(self):
        dead = AdapterSpec(
            adapter_id="dead",
            kind="subprocess",
            command='node -e "process.exit(3)"',
            timeout_secs=10.0,
        )
        config = CampaignConfig(
            seed=424243,
            programs=50,
            iterations=3,
            adapters=(CANNED_ADAPTERS["ref_a"], dead),
            num_qubits=5,
            num_gates=10,
            reduce=False,
            workers=4,
        )
        result = run_campaign(config)  # must not raise
        assert len(result.classes) == 50

        dead_steps = [
            s for cls in result.classes for s in cls.steps if s.adapter_id == "dead"
        ]
        assert dead_steps, "the dying adapter was never selected"
        assert all(s.outcome == OUTCOME_CRASH for s in dead_steps)

        vet = vet_classes(result.classes, k=config.k, tolerance=config.tolerance)
        crash_warnings = [w for w in vet.warnings if w.kind == "crash"]
        assert crash_warnings
        assert {w.adapter_id for w in crash_warnings} == {"dead"}
        # reference-only traffic stays clean: every failure is attributable
        assert all(w.kind == "crash" for w in vet.warnings)
