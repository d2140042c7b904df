"""Differential testing: byte-exact traces, and sensitivity to seeded mutations."""

import dataclasses

import pytest

from conftest import CORPUS_DIR, load
from emuc import diffharness, interpreter
from emuc.codegen import generate_bundle
from emuc.diffharness import BuildError, difftest, gen_sequences
from emuc.model import trigger_set


@pytest.fixture(scope="module")
def built_minimed(minimed, tmp_path_factory):
    wd = tmp_path_factory.mktemp("minimed-build")
    bundle = generate_bundle(minimed)
    driver = diffharness.build(bundle, wd)
    return bundle, driver


class TestBuildAndRun:
    def test_build_produces_runnable_driver(self, minimed, built_minimed):
        _, driver = built_minimed
        lines, code = diffharness.run_driver(driver, ["click_on_off",
                                                      "click_UP"])
        assert code == 0
        assert lines == ["off;off;display=0.0",
                         "on;off;display=0.0",
                         "on;on;display=0.1"]

    def test_driver_rejects_unknown_trigger(self, built_minimed):
        _, driver = built_minimed
        lines, code = diffharness.run_driver(driver, ["nonsense"])
        assert code == 1
        assert lines == ["off;off;display=0.0"]

    def test_broken_code_raises_build_error(self, minimed, tmp_path):
        bundle = generate_bundle(minimed)
        broken = dataclasses.replace(
            bundle, impl=bundle.impl.replace("return *st;", "return st;", 1))
        with pytest.raises(BuildError) as exc:
            diffharness.build(broken, tmp_path)
        assert exc.value.log


class TestSequences:
    def test_gen_sequences_is_seeded(self, minimed):
        a = gen_sequences(minimed, 5, 20, 42)
        b = gen_sequences(minimed, 5, 20, 42)
        c = gen_sequences(minimed, 5, 20, 43)
        assert a == b and a != c
        assert len(a) == 5 and all(len(s) == 20 for s in a)
        valid = set(trigger_set(minimed))
        assert all(t in valid for s in a for t in s)


class TestEquivalence:
    def test_traces_byte_equal_on_minimed(self, minimed, built_minimed):
        bundle, driver = built_minimed
        seqs = gen_sequences(minimed, 30, 60, 1)
        report = difftest(minimed, bundle, seqs, driver=driver)
        assert report.equivalent
        assert report.sequences_run == 30
        assert set(report.case_counts) == {"not_permitted",
                                           "guard_unsatisfied", "fired"}

    def test_report_to_dict_shape(self, minimed, built_minimed):
        bundle, driver = built_minimed
        report = difftest(minimed, bundle, gen_sequences(minimed, 2, 10, 3),
                          driver=driver)
        d = report.to_dict()
        assert d["equivalent"] is True
        assert d["sequences_run"] == 2
        assert d["divergences"] == []


def _run_mutation(d, mutated_bundle, n=60, length=80, seed=4):
    seqs = gen_sequences(d, n, length, seed)
    return difftest(d, mutated_bundle, seqs)


class TestMutationSensitivity:
    """Each seeded defect in the generated code must produce a divergence."""

    def test_swapped_overlapping_arc_order_detected(self):
        d = load(CORPUS_DIR / "overlap.emuc")
        # reorder the two `step` if-blocks in the generated transition code
        mutated = dataclasses.replace(d, arcs=(d.arcs[1], d.arcs[0], d.arcs[2]))
        bundle = generate_bundle(mutated, None)
        report = _run_mutation(d, bundle)
        assert not report.equivalent
        # divergence appears only once x reaches the overlap region (x == 3+)
        first = report.divergences[0]
        assert first.interpreter_line != first.driver_line

    def test_dropped_leave_call_detected(self, minimed):
        bundle = generate_bundle(minimed)
        mutated = dataclasses.replace(
            bundle, impl=bundle.impl.replace("    leave(on, st);\n", "", 1))
        report = _run_mutation(minimed, mutated)
        assert not report.equivalent
        # prev_node goes stale, which the trace's second field exposes
        assert ";on;" in report.divergences[0].interpreter_line

    def test_off_by_one_guard_literal_detected(self):
        d = load(CORPUS_DIR / "counter_int.emuc")
        bundle = generate_bundle(d)
        assert "st->count < 5" in bundle.impl
        mutated = dataclasses.replace(
            bundle, impl=bundle.impl.replace("st->count < 5", "st->count < 4"))
        report = _run_mutation(d, mutated)
        assert not report.equivalent

    def test_unmutated_baselines_stay_equivalent(self, minimed):
        for d in (minimed, load(CORPUS_DIR / "overlap.emuc"),
                  load(CORPUS_DIR / "counter_int.emuc")):
            report = _run_mutation(d, generate_bundle(d), n=30, length=60)
            assert report.equivalent, d.name
