"""Adapter contract, canned configurations, and fault injection."""

import random

import pytest

from qasmfuzz.adapters import (
    CANNED_ADAPTERS,
    FAULT_KINDS,
    REF_A_TRANSFORMS,
    REF_B_TRANSFORMS,
    AdapterFailure,
    AdapterSpec,
    BrokenAdapter,
    BuiltinAdapter,
    MutantAdapter,
    build_adapter,
    build_adapter_or_broken,
)
from qasmfuzz.generator import GenConfig, generate_direct
from qasmfuzz.qasm import parse, validate

from conftest import (
    CORPUS_CS_ERROR,
    CORPUS_CS_WITHOUT_DEF,
    CORPUS_C4X_FOUR_OPERANDS,
)


def _ref_a():
    return build_adapter(CANNED_ADAPTERS["ref_a"])


def _ref_b():
    return build_adapter(CANNED_ADAPTERS["ref_b"])


class TestAdapterFailure:
    def test_str_is_the_message(self):
        e = AdapterFailure("x", "import", "boom")
        assert str(e) == "boom"
        assert e.adapter_id == "x"
        assert e.stage == "import"

    def test_rejects_unknown_stage(self):
        with pytest.raises(ValueError):
            AdapterFailure("x", "nonsense", "boom")


class TestBuiltinContract:
    def test_import_transform_export_round_trip(self, h_swap_text):
        adapter = _ref_a()
        try:
            handle = adapter.import_qasm(h_swap_text)
            out = adapter.export_qasm(handle)
            assert out == h_swap_text
        finally:
            adapter.close()

    def test_transform_returns_new_handle(self, h_swap_text):
        adapter = _ref_a()
        try:
            h1 = adapter.import_qasm(h_swap_text)
            h2 = adapter.apply_transform(h1, "rebase.u3cx")
            assert h1 != h2
            # original handle still exports the untouched program
            assert adapter.export_qasm(h1) == h_swap_text
        finally:
            adapter.close()

    def test_list_transforms_matches_flavor(self):
        a, b = _ref_a(), _ref_b()
        try:
            assert tuple(a.list_transforms()) == REF_A_TRANSFORMS
            assert tuple(b.list_transforms()) == REF_B_TRANSFORMS
        finally:
            a.close()
            b.close()

    def test_unknown_transform_fails_in_transform_stage(self, h_swap_text):
        adapter = _ref_a()
        try:
            handle = adapter.import_qasm(h_swap_text)
            with pytest.raises(AdapterFailure) as exc:
                adapter.apply_transform(handle, "opt.merge_rotations")
            assert exc.value.stage == "transform"
        finally:
            adapter.close()

    def test_unknown_handle_rejected(self):
        adapter = _ref_a()
        try:
            with pytest.raises(AdapterFailure):
                adapter.export_qasm("h999")
        finally:
            adapter.close()

    def test_parse_error_becomes_import_failure(self):
        adapter = _ref_a()
        try:
            with pytest.raises(AdapterFailure) as exc:
                adapter.import_qasm("OPENQASM 2.0;\nqreg q[1;\n")
            assert exc.value.stage == "import"
        finally:
            adapter.close()

    def test_validation_violation_becomes_import_failure(self):
        adapter = _ref_a()
        try:
            with pytest.raises(AdapterFailure) as exc:
                adapter.import_qasm(CORPUS_CS_WITHOUT_DEF)
            assert exc.value.stage == "import"
            assert exc.value.message == CORPUS_CS_ERROR
        finally:
            adapter.close()

    def test_arity_violation_message(self):
        adapter = _ref_a()
        try:
            with pytest.raises(AdapterFailure) as exc:
                adapter.import_qasm(CORPUS_C4X_FOUR_OPERANDS)
            assert "'c4x' takes 5 qubit arguments but 4 were given" in str(
                exc.value
            )
        finally:
            adapter.close()


class TestGoldenRebase:
    def test_h_swap_rebase_is_byte_exact(self, h_swap_text, h_swap_rebased_text):
        adapter = _ref_a()
        try:
            handle = adapter.import_qasm(h_swap_text)
            out = adapter.export_qasm(
                adapter.apply_transform(handle, "rebase.u3cx")
            )
            assert out == h_swap_rebased_text
        finally:
            adapter.close()


class TestQubitMajorExport:
    def test_ref_b_reorders_on_export(self):
        src = (
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[3];\n'
            "h q[2];\nh q[0];\ncx q[0],q[1];\n"
        )
        b = _ref_b()
        try:
            out = b.export_qasm(b.import_qasm(src))
            lines = [l for l in out.splitlines() if l and not l.startswith(("OPENQASM", "include", "qreg", "creg"))]
            assert lines == ["h q[0];", "h q[2];", "cx q[0],q[1];"]
        finally:
            b.close()

    def test_ref_a_preserves_statement_order(self):
        src = (
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[3];\n'
            "h q[2];\nh q[0];\ncx q[0],q[1];\n"
        )
        a = _ref_a()
        try:
            assert a.export_qasm(a.import_qasm(src)) == src
        finally:
            a.close()


class TestMutants:
    def _chain(self, adapter, text, transform_id=None):
        handle = adapter.import_qasm(text)
        if transform_id is not None:
            handle = adapter.apply_transform(handle, transform_id)
        return adapter.export_qasm(handle)

    def test_fault_kinds_are_registered(self):
        assert set(FAULT_KINDS) == {
            "none",
            "c4x_for_c3x_on_export",
            "drop_gatedef_on_export",
            "cu_wrong_unitary_in_transform",
        }
        for name in ("mutant_c4x", "mutant_dropdef", "mutant_cu"):
            assert name in CANNED_ADAPTERS

    def test_c4x_fault_rewrites_only_c3x_lines(self):
        src = (
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[5];\n'
            "h q[0];\nc3x q[0],q[1],q[2],q[3];\nc4x q[0],q[1],q[2],q[3],q[4];\n"
        )
        mutant = build_adapter(CANNED_ADAPTERS["mutant_c4x"])
        try:
            out = self._chain(mutant, src)
            assert "c4x q[0],q[1],q[2],q[3];" in out
            assert "h q[0];" in out
            assert "c4x q[0],q[1],q[2],q[3],q[4];" in out
        finally:
            mutant.close()

    def test_dropdef_fault_renames_cp_applications(self):
        src = (
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\n'
            "cp(pi/4) q[0],q[1];\n"
        )
        mutant = build_adapter(CANNED_ADAPTERS["mutant_dropdef"])
        try:
            out = self._chain(mutant, src)
            assert "cs q[0],q[1];" in out
            assert "cp" not in out
        finally:
            mutant.close()

    def test_cu_fault_corrupts_only_transformed_cu_gates(self):
        src = (
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\n'
            "cu(0.1,0.2,0.3,0.4) q[0],q[1];\n"
        )
        mutant = build_adapter(CANNED_ADAPTERS["mutant_cu"])
        base = _ref_a()
        try:
            # Export without a transform is untouched.
            assert self._chain(mutant, src) == self._chain(base, src)
            # A transform pass corrupts the phase parameter.
            m_out = self._chain(mutant, src, "opt.remove_redundancies")
            b_out = self._chain(base, src, "opt.remove_redundancies")
            assert m_out != b_out
        finally:
            mutant.close()
            base.close()

    def test_mutants_are_silent_without_their_trigger(self):
        # On a trigger-free workload every mutant must be byte-identical to
        # the clean reference: the planted faults are strictly local.
        pool = tuple(
            k
            for k in GenConfig(seed=0).gate_pool
            if k not in ("c3x", "cp", "cu")
        )
        cfg = GenConfig(seed=314, num_qubits=6, num_gates=10, gate_pool=pool)
        rng = random.Random(0)
        specs = [CANNED_ADAPTERS[n] for n in ("mutant_c4x", "mutant_dropdef", "mutant_cu")]
        for i in range(40):
            text = generate_direct(cfg, i).text
            tid = rng.choice(REF_A_TRANSFORMS)
            base = _ref_a()
            expected = self._chain(base, text, tid)
            base.close()
            for spec in specs:
                mutant = build_adapter(spec)
                try:
                    assert self._chain(mutant, text, tid) == expected, (
                        f"{spec.adapter_id} diverged on trigger-free program {i}"
                    )
                finally:
                    mutant.close()

    def test_mutant_output_still_parses(self):
        # The c4x fault produces a semantically broken but lexically valid
        # program: lenient parsing must succeed.
        src = (
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[4];\n'
            "c3x q[0],q[1],q[2],q[3];\n"
        )
        mutant = build_adapter(CANNED_ADAPTERS["mutant_c4x"])
        try:
            out = self._chain(mutant, src)
            program = parse(out, strict=False)
            assert validate(program)  # it does violate arity rules
        finally:
            mutant.close()


class TestSpecsAndFactory:
    def test_build_by_name(self):
        adapter = build_adapter("ref_a")
        try:
            assert adapter.adapter_id == "ref_a"
        finally:
            adapter.close()

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError, match="unknown adapter id"):
            build_adapter("nope")

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            AdapterSpec(adapter_id="x", kind="weird")
        with pytest.raises(ValueError):
            AdapterSpec(adapter_id="x", flavor="weird")
        with pytest.raises(ValueError):
            AdapterSpec(adapter_id="x", fault="weird")

    def test_subprocess_spec_requires_command(self):
        with pytest.raises(ValueError):
            AdapterSpec(adapter_id="x", kind="subprocess")

    def test_mutant_wraps_named_base(self):
        base = BuiltinAdapter("inner", REF_A_TRANSFORMS)
        mutant = MutantAdapter("outer", base, "c4x_for_c3x_on_export")
        try:
            assert mutant.adapter_id == "outer"
            assert tuple(mutant.list_transforms()) == REF_A_TRANSFORMS
        finally:
            mutant.close()

    def test_unlaunchable_command_becomes_broken_adapter(self):
        spec = AdapterSpec(
            adapter_id="ghost", kind="subprocess", command="/no/such/binary --flag"
        )
        adapter = build_adapter_or_broken(spec)
        assert isinstance(adapter, BrokenAdapter)
        assert adapter.adapter_id == "ghost"
        for call in (
            lambda: adapter.list_transforms(),
            lambda: adapter.import_qasm("OPENQASM 2.0;\n"),
            lambda: adapter.apply_transform("h0", "noop.identity"),
            lambda: adapter.export_qasm("h0"),
        ):
            with pytest.raises(AdapterFailure) as excinfo:
                call()
            assert excinfo.value.stage == "spawn"
        adapter.close()

    def test_config_mistakes_still_raise_from_tolerant_builder(self):
        with pytest.raises(ValueError, match="unknown adapter id"):
            build_adapter_or_broken("nope")
