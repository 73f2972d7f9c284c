import json

import numpy as np
import pytest

from warpbench import io
from warpbench.dtw import Alignment, DtwVariant, align
from warpbench.errors import ParameterError
from warpbench.fitter import SAParams, fit
from warpbench.series import Series
from warpbench.synthesis import (
    GeneratorSpec,
    VariationClass,
    compose_variation,
    generate_signal,
)


def make_series(seed=0, length=50):
    spec = GeneratorSpec(length=length, min_value=0, max_value=10, spacing_min=5, spacing_max=15, seed=seed)
    return generate_signal(spec)


class TestDumps:
    def test_scalars(self):
        assert io.dumps({"a": 1, "b": None, "c": True, "d": "x"}) == '{"a": 1, "b": null, "c": true, "d": "x"}'

    def test_floats_have_seventeen_significant_digits(self):
        out = io.dumps({"v": 0.1})
        assert '"v": 0.10000000000000001' in out
        assert float(json.loads(out)["v"]) == 0.1

    def test_float_round_trip_is_exact(self):
        rng = np.random.default_rng(0)
        values = rng.uniform(-1e6, 1e6, 100).tolist()
        parsed = json.loads(io.dumps({"values": values}))
        assert parsed["values"] == values

    def test_scalar_lists_render_inline(self):
        out = io.dumps({"path": [[0, 1], [2, 3]]}, indent=2)
        assert "[0, 1]" in out and "[2, 3]" in out


class TestSeriesFiles:
    def test_json_round_trip(self, tmp_path):
        s = make_series(seed=1)
        path = tmp_path / "s.json"
        io.write_series(s, path)
        loaded = io.read_series(path)
        assert np.array_equal(loaded.values, s.values)
        assert loaded.name == s.name

    def test_csv_round_trip(self, tmp_path):
        s = make_series(seed=2)
        path = tmp_path / "s.csv"
        io.write_series(s, path, format="csv")
        loaded = io.read_series(path)
        assert np.array_equal(loaded.values, s.values)

    def test_bad_csv_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("time,val\n0,1\n")
        with pytest.raises(ParameterError):
            io.read_series(path)


class TestSignalPairFiles:
    def test_round_trip_preserves_everything(self, tmp_path):
        pair = compose_variation(make_series(seed=3, length=80), VariationClass.SCALED_MRGP, seed=4)
        path = tmp_path / "pair.json"
        io.write_signal_pair(pair, path)
        loaded = io.read_signal_pair(path)
        assert np.array_equal(loaded.reference.values, pair.reference.values)
        assert np.array_equal(loaded.target.values, pair.target.values)
        assert np.array_equal(loaded.ground_truth.src_pos, pair.ground_truth.src_pos)
        assert loaded.plan == pair.plan
        assert loaded.variation_class == pair.variation_class


class TestAlignmentFiles:
    def test_round_trip(self, tmp_path):
        x, y = make_series(seed=5), make_series(seed=6)
        a = align(x, y, DtwVariant.DTW)
        path = tmp_path / "a.json"
        io.write_alignment(a, path)
        loaded = io.read_alignment(path)
        assert loaded.cost == a.cost
        assert np.array_equal(loaded.path, a.path)
        assert loaded.variant == a.variant

    def test_schema_fields(self, tmp_path):
        from warpbench.dtw import BandConstraint, WeightParams

        x, y = make_series(seed=7), make_series(seed=8)
        a = align(x, y, DtwVariant.WDTW, weights=WeightParams(g=0.21), constraint=BandConstraint(width=5))
        path = tmp_path / "a.json"
        io.write_alignment(a, path)
        data = json.loads(path.read_text())
        assert data["variant"] == "wdtw"
        assert data["g"] == 0.21
        assert data["band"] == 5
        assert isinstance(data["path"][0], list) and len(data["path"][0]) == 2


class TestFitReportFiles:
    def test_round_trip(self, tmp_path):
        src = make_series(seed=9, length=60)
        pair = compose_variation(src, VariationClass.RGP, seed=10)
        report = fit(pair.reference, pair.target, x=1.0, sa=SAParams(seed=11))
        path = tmp_path / "fit.json"
        io.write_fit_report(report, path)
        loaded = io.read_fit_report(path)
        assert loaded.scaling == report.scaling
        assert loaded.peaks == report.peaks
        assert loaded.distance == report.distance
        assert loaded.threshold == report.threshold
        assert loaded.converged == report.converged

    def test_schema_keys(self, tmp_path):
        src = make_series(seed=12, length=60)
        report = fit(src, src, x=1.0, sa=SAParams(seed=13))
        path = tmp_path / "fit.json"
        io.write_fit_report(report, path)
        data = json.loads(path.read_text())
        assert set(data["scaling"]) == {"loc", "W", "s"}
        assert {"peaks", "distance", "T", "converged", "seed"} <= set(data)


class TestDatasetBundle:
    def test_round_trip(self, tmp_path):
        from warpbench.classify import make_dataset

        spec = GeneratorSpec(length=60, min_value=0, max_value=50, spacing_min=6, spacing_max=20)
        ds = make_dataset(2, 3, spec, seed=14)
        path = tmp_path / "ds.json"
        io.write_dataset(ds, path)
        loaded = io.read_dataset(path)
        assert loaded.n_classes == ds.n_classes
        assert loaded.train_idx == ds.train_idx and loaded.test_idx == ds.test_idx
        assert loaded.seed == ds.seed
        for a, b in zip(loaded.samples, ds.samples):
            assert np.array_equal(a.series.values, b.series.values)
            assert a.label == b.label and a.proportions == b.proportions
        for a, b in zip(loaded.parents, ds.parents):
            assert np.array_equal(a.values, b.values)


class TestPolylines:
    def test_csv_grouped_by_line_id(self, tmp_path):
        path = tmp_path / "lines.csv"
        rows = ["line_id,x,y,z"]
        for i in range(6):
            rows.append(f"a,{i},0,0")
        for i in range(5):
            rows.append(f"b,0,{i},1")
        path.write_text("\n".join(rows) + "\n")
        lines = io.read_polylines(path)
        assert len(lines) == 2
        assert lines[0].shape == (6, 3)
        assert lines[1].shape == (5, 3)

    def test_json_list_of_point_lists(self, tmp_path):
        path = tmp_path / "lines.json"
        path.write_text(json.dumps([[[0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0], [4, 0, 0]]]))
        lines = io.read_polylines(path)
        assert lines[0].shape == (5, 3)
