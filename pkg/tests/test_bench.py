import numpy as np
import pytest

from warpbench.bench import (
    BandPolicy,
    SuiteConfig,
    WeightPolicy,
    run_alignment_suite,
    run_classification_suite,
    run_windowing_suite,
)
from warpbench.dtw import BandConstraint, DtwVariant, WeightParams, align
from warpbench.errors import ParameterError
from warpbench.io import write_report
from warpbench.metrics import adm, adt
from warpbench.synthesis import GeneratorSpec, VariationClass, compose_variation, generate_signal
from dataclasses import replace


def tiny_config(**overrides):
    base = dict(
        pairs_per_variation=3,
        variations=(VariationClass.SCALED, VariationClass.RGP),
        variants=(DtwVariant.DTW, DtwVariant.WDTW),
        generator=GeneratorSpec(length=100, min_value=0, max_value=100, spacing_min=8, spacing_max=25),
        weight_policy=WeightPolicy.OPTIMIZED,
        seed=0,
    )
    base.update(overrides)
    if "weight_search" not in base:
        from warpbench.weightopt import WeightSearchConfig

        base["weight_search"] = WeightSearchConfig(samples=3)
    return SuiteConfig(**base)


class TestAlignmentSuite:
    def test_report_shape_and_reproducibility(self, tmp_path):
        cfg = tiny_config()
        a = run_alignment_suite(cfg)
        b = run_alignment_suite(cfg)
        assert a == b
        assert len(a.rows) == 3 * 2 * 2
        paths_a = write_report(a, tmp_path / "a")
        paths_b = write_report(b, tmp_path / "b")
        for key in paths_a:
            assert paths_a[key].read_bytes() == paths_b[key].read_bytes()

    def test_aggregates_recompute_from_rows(self):
        report = run_alignment_suite(tiny_config(seed=1))
        for agg in report.aggregates():
            rows = [
                r
                for r in report.rows
                if r.variation.value == agg["variation"] and r.variant.value == agg["variant"]
            ]
            assert agg["count"] == len(rows)
            assert agg["mean_adm"] == pytest.approx(np.mean([r.adm for r in rows]), rel=1e-12)
            assert agg["mean_adt"] == pytest.approx(np.mean([r.adt for r in rows]), rel=1e-12)

    def test_rows_regenerate_in_isolation(self):
        cfg = tiny_config(seed=2)
        report = run_alignment_suite(cfg)
        row = report.rows[-1]
        reference = generate_signal(replace(cfg.generator, seed=row.ref_seed))
        pair = compose_variation(reference, row.variation, cfg.variation_params, seed=row.plan_seed)
        weights = WeightParams(g=row.g) if row.g is not None else None
        constraint = BandConstraint(width=row.band) if row.band is not None else None
        alignment = align(pair.reference, pair.target, row.variant, weights=weights, constraint=constraint)
        assert adm(alignment, pair.reference, pair.target) == row.adm
        assert adt(alignment, pair.ground_truth) == row.adt

    def test_weight_policies(self):
        fixed = run_alignment_suite(tiny_config(weight_policy=WeightPolicy.FIXED, fixed_g=0.33))
        assert all(r.g == 0.33 for r in fixed.rows if r.variant.weighted)
        random_g = run_alignment_suite(tiny_config(weight_policy=WeightPolicy.RANDOM, seed=3))
        gs = {r.g for r in random_g.rows if r.variant.weighted}
        assert all(0.01 <= g <= 1.0 for g in gs)


class TestWindowingSuite:
    def test_banded_and_unbanded_rows(self):
        cfg = tiny_config(
            variations=(VariationClass.RGP,),
            variants=(DtwVariant.DTW,),
            band_policy=BandPolicy.ORACLE,
        )
        report = run_windowing_suite(cfg)
        banded = [r for r in report.rows if r.band is not None]
        unbanded = [r for r in report.rows if r.band is None]
        assert len(banded) == len(unbanded) == 3

    def test_band_policy_required(self):
        with pytest.raises(ParameterError):
            run_windowing_suite(tiny_config(band_policy=BandPolicy.NONE))

    def test_inactive_band_equals_unbanded_exactly(self):
        # band at least the alignment's own displacement cannot change the optimum
        cfg = tiny_config(variations=(VariationClass.RGP,), variants=(DtwVariant.DTW,), seed=4)
        batch_rows = run_windowing_suite(replace(cfg, band_policy=BandPolicy.ORACLE)).rows
        for unb in (r for r in batch_rows if r.band is None):
            reference = generate_signal(replace(cfg.generator, seed=unb.ref_seed))
            pair = compose_variation(reference, unb.variation, cfg.variation_params, seed=unb.plan_seed)
            free = align(pair.reference, pair.target, unb.variant)
            m, n = len(pair.reference), len(pair.target)
            slope = (m - 1) / (n - 1)
            disp = int(np.ceil(np.max(np.abs(free.path[:, 0] - free.path[:, 1] * slope))))
            banded = align(pair.reference, pair.target, unb.variant, constraint=BandConstraint(width=disp))
            assert banded.cost == free.cost


class TestClassificationSuite:
    def test_accuracies_and_determinism(self):
        cfg = tiny_config(
            variants=(DtwVariant.DTW, DtwVariant.DDTW),
            n_classes=2,
            per_class=4,
            generator=GeneratorSpec(length=60, min_value=0, max_value=100, spacing_min=6, spacing_max=20),
        )
        a = run_classification_suite(cfg)
        b = run_classification_suite(cfg)
        assert a.accuracies == b.accuracies
        for variant, result in a.results.items():
            correct = sum(p == t for p, t in zip(result.predicted, result.true_labels))
            assert a.accuracies[variant] == pytest.approx(correct / len(result.predicted))
