"""File formats: JSON and CSV serialization for every artifact type.

Floats are written with 17 significant digits so every value round-trips
exactly, and all writers are fully deterministic (no timestamps, stable key
order), so rerunning a seeded command reproduces files byte for byte.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bench import ClassificationReport, ExperimentReport
from .classify import ClassificationResult
from .dtw import Alignment, DtwVariant
from .errors import ParameterError
from .fitter import FitReport, PeakRecord, ScalingRecord
from .search import MatchResult
from .series import GroundTruthMapping, Series
from .synthesis import (
    DeformationPlan,
    PeakMode,
    PeakStep,
    ScaleStep,
    SignalPair,
    VariationClass,
)

__all__ = [
    "dumps",
    "fmt",
    "write_series",
    "read_series",
    "write_signal_pair",
    "read_signal_pair",
    "write_alignment",
    "read_alignment",
    "write_fit_report",
    "read_fit_report",
    "write_weight_report",
    "write_dataset",
    "read_dataset",
    "write_classification_csv",
    "write_matches_csv",
    "read_polylines",
    "write_report",
    "write_classification_report",
]


def fmt(value) -> str:
    """Render one scalar for CSV/JSON output."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _scalar(node) -> str | None:
    if node is None:
        return "null"
    if isinstance(node, (bool, np.bool_)):
        return "true" if node else "false"
    if isinstance(node, (int, np.integer)):
        return str(int(node))
    if isinstance(node, (float, np.floating)):
        return format(float(node), ".17g")
    if isinstance(node, str):
        return json.dumps(node)
    return None


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats.

    Containers holding only scalars render on one line even when indenting.
    """

    def render(node, depth):
        scalar = _scalar(node)
        if scalar is not None:
            return scalar
        inner = " " * (indent * (depth + 1))
        closing = " " * (indent * depth)
        nl = "\n" if indent else ""
        sep = "," + (nl if indent else " ")
        if isinstance(node, dict):
            items = (f"{inner}{json.dumps(str(k))}: {render(v, depth + 1)}" for k, v in node.items())
            return "{" + nl + sep.join(items) + nl + closing + "}"
        if isinstance(node, (list, tuple, np.ndarray)):
            parts = [_scalar(v) for v in node]
            if all(p is not None for p in parts):
                return "[" + ", ".join(parts) + "]"
            items = (f"{inner}{render(v, depth + 1)}" for v in node)
            return "[" + nl + sep.join(items) + nl + closing + "]"
        raise ParameterError(f"cannot serialize {type(node).__name__}")

    return render(obj, 0) + ("\n" if indent else "")


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _load_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


def write_series(series: Series, path, format: str = "json") -> None:
    """Write a series as JSON ``{"name", "values"}`` or CSV ``index,value``."""
    if format == "json":
        _write(path, dumps({"name": series.name, "values": series.values}, indent=2))
    elif format == "csv":
        lines = ["index,value"]
        lines += [f"{i},{fmt(v)}" for i, v in enumerate(series.values)]
        _write(path, "\n".join(lines) + "\n")
    else:
        raise ParameterError(f"unknown series format {format!r}")


def read_series(path) -> Series:
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        return Series(np.asarray(data["values"], dtype=np.float64), name=data.get("name"))
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip().lower() != "index,value":
        raise ParameterError(f"{path}: expected JSON or CSV with an index,value header")
    values = [float(ln.split(",")[1]) for ln in lines[1:]]
    return Series(np.asarray(values, dtype=np.float64))


# ---------------------------------------------------------------------------
# signal pairs and plans
# ---------------------------------------------------------------------------


def _step_to_dict(step):
    if isinstance(step, ScaleStep):
        return {
            "op": "scale",
            "w0": step.w0,
            "w1": step.w1,
            "s": step.s,
            "length_preserving": step.length_preserving,
        }
    if isinstance(step, PeakStep):
        return {
            "op": "peak",
            "center": step.center,
            "width": step.width,
            "height": step.height,
            "mode": step.mode.value,
        }
    raise ParameterError(f"unknown plan step {step!r}")


def _step_from_dict(data):
    if data["op"] == "scale":
        return ScaleStep(
            w0=int(data["w0"]),
            w1=int(data["w1"]),
            s=float(data["s"]),
            length_preserving=bool(data["length_preserving"]),
        )
    if data["op"] == "peak":
        return PeakStep(
            center=float(data["center"]),
            width=int(data["width"]),
            height=float(data["height"]),
            mode=PeakMode(data["mode"]),
        )
    raise ParameterError(f"unknown plan step op {data.get('op')!r}")


def write_signal_pair(pair: SignalPair, path) -> None:
    _write(
        path,
        dumps(
            {
                "reference": pair.reference.values,
                "target": pair.target.values,
                "ground_truth": pair.ground_truth.src_pos,
                "variation_class": pair.variation_class.value,
                "plan": [_step_to_dict(s) for s in pair.plan.steps],
                "seed": pair.plan.seed,
            },
            indent=2,
        ),
    )


def read_signal_pair(path) -> SignalPair:
    data = _load_json(path)
    reference = Series(np.asarray(data["reference"], dtype=np.float64))
    target = Series(np.asarray(data["target"], dtype=np.float64))
    mapping = GroundTruthMapping(
        src_pos=np.asarray(data["ground_truth"], dtype=np.float64),
        src_len=len(reference),
        tgt_len=len(target),
    )
    plan = DeformationPlan(steps=tuple(_step_from_dict(s) for s in data["plan"]), seed=data.get("seed"))
    return SignalPair(
        reference=reference,
        target=target,
        ground_truth=mapping,
        plan=plan,
        variation_class=VariationClass(data["variation_class"]),
    )


# ---------------------------------------------------------------------------
# alignments
# ---------------------------------------------------------------------------


def write_alignment(alignment: Alignment, path) -> None:
    data = {"variant": alignment.variant.value}
    if alignment.g is not None:
        data["g"] = alignment.g
    if alignment.band is not None:
        data["band"] = alignment.band
        data["band_widened"] = alignment.band_widened
    data["cost"] = alignment.cost
    data["path"] = [[int(i), int(j)] for i, j in alignment.path]
    _write(path, dumps(data, indent=2))


def read_alignment(path) -> Alignment:
    data = _load_json(path)
    return Alignment(
        path=np.asarray(data["path"], dtype=np.int64),
        cost=float(data["cost"]),
        variant=DtwVariant(data["variant"]),
        g=data.get("g"),
        band=data.get("band"),
        band_widened=bool(data.get("band_widened", False)),
    )


# ---------------------------------------------------------------------------
# fit reports
# ---------------------------------------------------------------------------


def write_fit_report(report: FitReport, path) -> None:
    _write(
        path,
        dumps(
            {
                "scaling": {
                    "loc": report.scaling.location,
                    "W": report.scaling.width,
                    "s": report.scaling.s,
                },
                "peaks": [
                    {"loc": p.location, "width": p.width, "mag": p.magnitude} for p in report.peaks
                ],
                "distance": report.distance,
                "T": report.threshold,
                "converged": report.converged,
                "seed": report.seed,
                "src_len": report.src_len,
                "tgt_len": report.tgt_len,
                "peak_mode": report.peak_mode.value,
            },
            indent=2,
        ),
    )


def read_fit_report(path) -> FitReport:
    data = _load_json(path)
    return FitReport(
        scaling=ScalingRecord(
            location=int(data["scaling"]["loc"]),
            width=int(data["scaling"]["W"]),
            s=float(data["scaling"]["s"]),
        ),
        peaks=tuple(
            PeakRecord(location=int(p["loc"]), width=int(p["width"]), magnitude=float(p["mag"]))
            for p in data["peaks"]
        ),
        distance=float(data["distance"]),
        threshold=float(data["T"]),
        converged=bool(data["converged"]),
        src_len=int(data["src_len"]),
        tgt_len=int(data["tgt_len"]),
        seed=int(data["seed"]),
        peak_mode=PeakMode(data.get("peak_mode", "normalized")),
    )


# ---------------------------------------------------------------------------
# weight optimization, classification, search
# ---------------------------------------------------------------------------


def write_weight_report(variant: DtwVariant, g: float, objective: str, value: float, samples: int, seed: int, path) -> None:
    _write(
        path,
        dumps(
            {
                "variant": DtwVariant(variant).value,
                "g": g,
                "objective": objective,
                "value": value,
                "K": samples,
                "seed": seed,
            },
            indent=2,
        ),
    )


def write_dataset(dataset, path) -> None:
    """Bundle a classification dataset: parents, samples with labels and
    proportions, the train/test split and the seed."""
    _write(
        path,
        dumps(
            {
                "n_classes": dataset.n_classes,
                "parents": [p.values for p in dataset.parents],
                "samples": [
                    {
                        "values": s.series.values,
                        "label": s.label,
                        "proportions": list(s.proportions),
                    }
                    for s in dataset.samples
                ],
                "train_idx": list(dataset.train_idx),
                "test_idx": list(dataset.test_idx),
                "seed": dataset.seed,
            },
            indent=2,
        ),
    )


def read_dataset(path):
    from .classify import Dataset, LabeledSample

    data = _load_json(path)
    return Dataset(
        n_classes=int(data["n_classes"]),
        parents=tuple(Series(np.asarray(v, dtype=np.float64)) for v in data["parents"]),
        samples=tuple(
            LabeledSample(
                series=Series(np.asarray(s["values"], dtype=np.float64)),
                label=int(s["label"]),
                proportions=tuple(float(p) for p in s["proportions"]),
            )
            for s in data["samples"]
        ),
        train_idx=tuple(int(i) for i in data["train_idx"]),
        test_idx=tuple(int(i) for i in data["test_idx"]),
        seed=int(data["seed"]),
    )


def write_classification_csv(result: ClassificationResult, sample_ids, path) -> None:
    lines = ["sample_id,true,predicted,neighbor_id,distance"]
    for sid, true, pred, nb, dist in zip(
        sample_ids, result.true_labels, result.predicted, result.neighbor_idx, result.distances
    ):
        lines.append(f"{sid},{true},{pred},{nb},{fmt(dist)}")
    _write(path, "\n".join(lines) + "\n")


def write_matches_csv(matches: list[MatchResult], path) -> None:
    lines = ["target,start,end,d_c,d_t,combined"]
    for m in matches:
        lines.append(f"{m.target},{m.start},{m.end},{fmt(m.d_c)},{fmt(m.d_t)},{fmt(m.combined)}")
    _write(path, "\n".join(lines) + "\n")


def read_polylines(path) -> list[np.ndarray]:
    """Read polylines from CSV ``line_id,x,y,z`` (grouped by id) or a JSON
    list of point lists."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("["):
        data = json.loads(text)
        return [np.asarray(line, dtype=np.float64) for line in data]
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip().lower() != "line_id,x,y,z":
        raise ParameterError(f"{path}: expected JSON or CSV with a line_id,x,y,z header")
    groups: dict[str, list] = {}
    order: list[str] = []
    for ln in lines[1:]:
        line_id, x, y, z = ln.split(",")
        if line_id not in groups:
            groups[line_id] = []
            order.append(line_id)
        groups[line_id].append([float(x), float(y), float(z)])
    return [np.asarray(groups[k], dtype=np.float64) for k in order]


# ---------------------------------------------------------------------------
# suite reports
# ---------------------------------------------------------------------------


def write_report(report: ExperimentReport, out_dir, basename: str | None = None) -> dict:
    """Write a suite report as raw-row CSV, aggregate JSON and a
    gnuplot-friendly column file.  Returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = basename or f"{report.suite}-seed{report.seed}"

    csv_path = out / f"{base}.csv"
    lines = ["pair_id,variation,variant,g,band,adm,adt,aadft,ref_seed,plan_seed"]
    for r in report.rows:
        lines.append(
            ",".join(
                [
                    r.pair_id,
                    r.variation.value,
                    r.variant.value,
                    fmt(r.g) if r.g is not None else "",
                    str(r.band) if r.band is not None else "",
                    fmt(r.adm),
                    fmt(r.adt),
                    fmt(r.aadft) if r.aadft is not None else "",
                    str(r.ref_seed),
                    str(r.plan_seed),
                ]
            )
        )
    _write(csv_path, "\n".join(lines) + "\n")

    json_path = out / f"{base}.json"
    _write(
        json_path,
        dumps({"suite": report.suite, "seed": report.seed, "aggregates": report.aggregates()}, indent=2),
    )

    dat_path = out / f"{base}.dat"
    dat_lines = ["# variation variant banded mean_adm mean_adt"]
    for agg in report.aggregates():
        dat_lines.append(
            f"{agg['variation']} {agg['variant']} {int(agg['banded'])} "
            f"{fmt(agg['mean_adm'])} {fmt(agg['mean_adt'])}"
        )
    _write(dat_path, "\n".join(dat_lines) + "\n")
    return {"csv": csv_path, "json": json_path, "dat": dat_path}


def write_classification_report(report: ClassificationReport, out_dir, basename: str | None = None) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = basename or f"classification-seed{report.seed}"

    json_path = out / f"{base}.json"
    _write(
        json_path,
        dumps(
            {
                "seed": report.seed,
                "n_classes": report.n_classes,
                "per_class": report.per_class,
                "accuracies": report.accuracies,
            },
            indent=2,
        ),
    )
    paths = {"json": json_path}
    for variant, result in report.results.items():
        csv_path = out / f"{base}-{variant}.csv"
        sample_ids = [f"test-{i:03d}" for i in range(len(result.predicted))]
        write_classification_csv(result, sample_ids, csv_path)
        paths[variant] = csv_path
    return paths
