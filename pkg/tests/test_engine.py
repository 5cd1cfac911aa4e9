"""Campaign engine: chain semantics, determinism, parallel safety."""

import dataclasses

import pytest

from qasmfuzz.adapters import (
    CANNED_ADAPTERS,
    AdapterFailure,
    AdapterSpec,
    BuiltinAdapter,
    REF_A_TRANSFORMS,
)
from qasmfuzz.engine import (
    OUTCOME_CRASH,
    OUTCOME_OK,
    STAGE_GENERATE_EXPORT,
    CampaignConfig,
    class_id_for,
    rebuild_config,
    run_campaign,
    run_chain,
    timing_report,
    with_timeout,
)
from qasmfuzz.generator import GenConfig, generate_direct


def _config(**kw):
    kw.setdefault("seed", 7)
    kw.setdefault("programs", 6)
    kw.setdefault("iterations", 4)
    kw.setdefault("num_qubits", 5)
    kw.setdefault("num_gates", 8)
    return CampaignConfig(**kw)


def _fingerprint(result):
    return [
        (
            cls.class_id,
            cls.stream_index,
            cls.mode,
            tuple(m.text for m in cls.members),
            tuple(
                (s.step, s.adapter_id, s.transform_id, s.outcome, s.stage, s.message)
                for s in cls.steps
            ),
        )
        for cls in result.classes
    ]


class TestConfig:
    def test_class_id_format(self):
        assert class_id_for(0) == "c00000"
        assert class_id_for(123) == "c00123"

    @pytest.mark.parametrize(
        "kw",
        [
            {"programs": -1},
            {"iterations": 0},
            {"k": 0},
            {"tolerance": 0.0},
            {"workers": 0},
            {"adapters": ()},
        ],
    )
    def test_rejects_bad_values(self, kw):
        with pytest.raises(ValueError):
            _config(**kw)

    def test_gen_config_mirrors_fields(self):
        cfg = _config(num_qubits=9, num_gates=13, mode_mix=0.25)
        gen = cfg.gen_config()
        assert isinstance(gen, GenConfig)
        assert gen.seed == cfg.seed
        assert gen.num_qubits == 9
        assert gen.num_gates == 13
        assert gen.mode_mix == 0.25

    def test_rebuild_from_plain_dict(self):
        cfg = rebuild_config(
            {
                "seed": 3,
                "programs": 2,
                "adapters": ["ref_a", {"adapter_id": "x", "kind": "mutant",
                                        "fault": "c4x_for_c3x_on_export"}],
            }
        )
        assert cfg.seed == 3
        assert cfg.adapters[0] == CANNED_ADAPTERS["ref_a"]
        assert cfg.adapters[1].fault == "c4x_for_c3x_on_export"

    def test_rebuild_rejects_unknown_adapter(self):
        with pytest.raises(ValueError):
            rebuild_config({"adapters": ["who"]})

    def test_with_timeout_touches_only_subprocess_specs(self):
        cfg = _config(
            adapters=(
                CANNED_ADAPTERS["ref_a"],
                AdapterSpec(adapter_id="e", kind="subprocess", command="x"),
            )
        )
        out = with_timeout(cfg, 3.5)
        assert out.adapters[0].timeout_secs == CANNED_ADAPTERS["ref_a"].timeout_secs
        assert out.adapters[1].timeout_secs == 3.5


class _FailingAdapter(BuiltinAdapter):
    """Reference behavior that starts refusing imports after a quota."""

    def __init__(self, fail_from: int):
        super().__init__("flaky", REF_A_TRANSFORMS)
        self._imports = 0
        self._fail_from = fail_from

    def import_qasm(self, text: str) -> str:
        self._imports += 1
        if self._imports > self._fail_from:
            raise AdapterFailure("flaky", "import", "quota exhausted")
        return super().import_qasm(text)


class TestRunChain:
    def _initial(self, config):
        return generate_direct(config.gen_config(), 0)

    def test_clean_chain_has_m_plus_one_members(self):
        cfg = _config(iterations=4)
        adapters = {"ref_a": BuiltinAdapter("ref_a", REF_A_TRANSFORMS)}
        cfg = dataclasses.replace(cfg, adapters=(CANNED_ADAPTERS["ref_a"],))
        cls = run_chain(self._initial(cfg), cfg, adapters, 0)
        assert len(cls.members) == 5
        assert len(cls.steps) == 4
        assert all(s.outcome == OUTCOME_OK for s in cls.steps)
        assert [s.step for s in cls.steps] == [1, 2, 3, 4]

    def test_crash_truncates_chain(self):
        cfg = _config(iterations=6, adapters=(CANNED_ADAPTERS["ref_a"],))
        flaky = _FailingAdapter(fail_from=2)
        cls = run_chain(self._initial(cfg), cfg, {"ref_a": flaky}, 0)
        # Two transformed members made it; the third import crashed.
        assert len(cls.members) == 3
        assert len(cls.steps) == 3
        assert cls.steps[-1].outcome == OUTCOME_CRASH
        assert cls.steps[-1].stage == "import"
        assert cls.steps[-1].message == "quota exhausted"
        assert all(s.outcome == OUTCOME_OK for s in cls.steps[:-1])

    def test_crash_on_first_step_leaves_seed_member_only(self):
        cfg = _config(iterations=3, adapters=(CANNED_ADAPTERS["ref_a"],))
        flaky = _FailingAdapter(fail_from=0)
        cls = run_chain(self._initial(cfg), cfg, {"ref_a": flaky}, 0)
        assert len(cls.members) == 1
        assert len(cls.steps) == 1
        assert cls.steps[0].outcome == OUTCOME_CRASH

    def test_generation_crash_yields_empty_class(self):
        cfg = _config(adapters=(CANNED_ADAPTERS["ref_a"],))
        initial = self._initial(cfg)
        broken = dataclasses.replace(
            initial,
            text="",
            program=None,
            crash=AdapterFailure("gen", "export", "no export"),
        )
        cls = run_chain(broken, cfg, {}, 0)
        assert cls.members == ()
        assert len(cls.steps) == 1
        assert cls.steps[0].step == 0
        assert cls.steps[0].outcome == OUTCOME_CRASH
        assert cls.steps[0].stage == STAGE_GENERATE_EXPORT


class TestRunCampaign:
    def test_shapes_and_ids(self):
        cfg = _config(programs=4, iterations=3)
        result = run_campaign(cfg)
        assert [c.class_id for c in result.classes] == [
            "c00000",
            "c00001",
            "c00002",
            "c00003",
        ]
        for cls in result.classes:
            assert len(cls.members) <= cfg.iterations + 1
            for step in cls.steps:
                assert step.adapter_id in ("ref_a", "ref_b")

    def test_two_runs_are_byte_identical(self):
        cfg = _config(seed=11)
        assert _fingerprint(run_campaign(cfg)) == _fingerprint(run_campaign(cfg))

    def test_worker_count_does_not_change_results(self):
        base = _config(seed=13, programs=8)
        parallel = dataclasses.replace(base, workers=4)
        assert _fingerprint(run_campaign(base)) == _fingerprint(
            run_campaign(parallel)
        )

    def test_honest_references_never_crash(self):
        cfg = _config(seed=17, programs=10, iterations=5)
        result = run_campaign(cfg)
        for cls in result.classes:
            assert all(s.outcome == OUTCOME_OK for s in cls.steps)
            assert len(cls.members) == 6

    def test_max_classes_caps_the_run(self):
        cfg = _config(programs=10, max_classes=3)
        assert len(run_campaign(cfg).classes) == 3

    def test_unlaunchable_adapter_crashes_steps_not_the_run(self):
        cfg = _config(
            seed=23,
            programs=6,
            iterations=4,
            adapters=(
                CANNED_ADAPTERS["ref_a"],
                AdapterSpec(
                    adapter_id="ghost", kind="subprocess", command="/no/such/binary"
                ),
            ),
        )
        result = run_campaign(cfg)
        assert len(result.classes) == 6
        ghost_steps = [
            s for cls in result.classes for s in cls.steps if s.adapter_id == "ghost"
        ]
        assert ghost_steps, "the broken adapter was never even selected"
        assert all(s.outcome == OUTCOME_CRASH for s in ghost_steps)
        assert all(s.stage == "spawn" for s in ghost_steps)
        for cls in result.classes:
            assert all(
                s.outcome == OUTCOME_OK for s in cls.steps if s.adapter_id == "ref_a"
            )

    def test_members_carry_parsed_programs(self):
        cfg = _config(programs=2)
        for cls in run_campaign(cfg).classes:
            for member in cls.members:
                assert member.program is not None

    def test_timing_totals_present(self):
        result = run_campaign(_config(programs=2))
        t = result.timing
        assert t["generate_seconds"] >= 0
        assert t["ite_seconds"] >= 0
        for stage in ("import", "transform", "export"):
            assert t[f"ite_{stage}_seconds"] >= 0


class TestTimingReport:
    def test_fractions_sum_to_one(self):
        report = timing_report(
            1.0, 3.0, 1.0, {"import": 1.0, "transform": 1.5, "export": 0.5}
        )
        comps = report["component_fractions"]
        assert sum(comps.values()) == pytest.approx(1.0, abs=1e-9)
        assert comps["ite"] == pytest.approx(0.6)
        stages = report["ite_stage_fractions"]
        assert sum(stages.values()) == pytest.approx(1.0, abs=1e-9)
        assert stages["transform"] == pytest.approx(0.5)

    def test_zero_time_degenerates_to_zeros(self):
        report = timing_report(0.0, 0.0, 0.0, {})
        assert all(v == 0.0 for v in report["component_fractions"].values())
        assert all(v == 0.0 for v in report["ite_stage_fractions"].values())
