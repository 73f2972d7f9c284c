import json
import math
import subprocess
import sys

import numpy as np
import pytest


def run_cli(args, cwd, env=None):
    import os

    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "warpbench", *args],
        cwd=cwd,
        env=full_env,
        capture_output=True,
        text=True,
    )


GEN = ["generate", "--length", "200", "--min", "0", "--max", "150", "--p1", "10", "--p2", "60"]


@pytest.fixture()
def ref_file(tmp_path):
    res = run_cli([*GEN, "--seed", "7", "-o", "ref.json"], tmp_path)
    assert res.returncode == 0, res.stderr
    return tmp_path / "ref.json"


def test_generate_writes_valid_series(ref_file):
    data = json.loads(ref_file.read_text())
    assert len(data["values"]) == 200


def test_generate_requires_seed(tmp_path):
    res = run_cli([*GEN, "-o", "x.json"], tmp_path, env={"WARPBENCH_SEED": ""})
    # empty env var is invalid -> parameter error
    assert res.returncode == 2
    assert "seed" in res.stderr.lower() or "WARPBENCH_SEED" in res.stderr


def test_seed_env_fallback(tmp_path):
    a = run_cli([*GEN, "--seed", "9", "-o", "a.json"], tmp_path)
    b = run_cli([*GEN, "-o", "b.json"], tmp_path, env={"WARPBENCH_SEED": "9"})
    assert a.returncode == b.returncode == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_deform_align_fit_pipeline(tmp_path, ref_file):
    res = run_cli(["deform", "ref.json", "--variation", "scaled_rgp", "--seed", "3", "-o", "pair.json"], tmp_path)
    assert res.returncode == 0, res.stderr
    pair = json.loads((tmp_path / "pair.json").read_text())
    assert pair["variation_class"] == "scaled_rgp"

    res = run_cli(["align", "--pair", "pair.json", "--variant", "wdtw", "--g", "0.21", "-o", "aln.json"], tmp_path)
    assert res.returncode == 0, res.stderr
    metrics_line = json.loads(res.stdout)
    assert {"variant", "cost", "adm", "adt"} <= set(metrics_line)
    aln = json.loads((tmp_path / "aln.json").read_text())
    assert aln["variant"] == "wdtw" and aln["g"] == 0.21

    res = run_cli(["fit", "ref.json", "ref.json", "--x", "1", "--seed", "5", "-o", "fit.json"], tmp_path)
    assert res.returncode == 0, res.stderr
    profile = json.loads(res.stdout)
    assert profile["converged"] is True
    report = json.loads((tmp_path / "fit.json").read_text())
    assert report["scaling"]["s"] == 1.0


def test_align_two_series_csv_format(tmp_path, ref_file):
    res = run_cli(["align", "ref.json", "ref.json", "--format", "csv"], tmp_path)
    assert res.returncode == 0
    header, row = res.stdout.strip().splitlines()
    assert header == "variant,cost,adm"
    assert row.startswith("dtw,0,0")


def test_optimize_weights(tmp_path, ref_file):
    for k in range(2):
        res = run_cli(
            ["deform", "ref.json", "--variation", "scaled", "--seed", str(20 + k), "-o", f"p{k}.json"],
            tmp_path,
        )
        assert res.returncode == 0
    res = run_cli(
        ["optimize-weights", "p0.json", "p1.json", "--variant", "wdtw", "-K", "4", "--seed", "2", "-o", "w.json"],
        tmp_path,
    )
    assert res.returncode == 0, res.stderr
    data = json.loads((tmp_path / "w.json").read_text())
    assert data["variant"] == "wdtw" and data["K"] == 4
    assert 0.01 <= data["g"] <= 1.0


def test_classify_subcommand(tmp_path):
    res = run_cli(
        [
            "classify", "--classes", "2", "--per-class", "4", "--length", "60",
            "--p1", "6", "--p2", "20", "--seed", "4", "-o", "cls.csv",
        ],
        tmp_path,
    )
    assert res.returncode == 0, res.stderr
    lines = (tmp_path / "cls.csv").read_text().strip().splitlines()
    assert lines[0] == "sample_id,true,predicted,neighbor_id,distance"
    assert len(lines) == 5  # 4 test samples


def test_search_subcommand(tmp_path):
    t = np.linspace(0, 4 * math.pi, 120)
    helix = np.stack([2 * np.cos(t), 2 * np.sin(t), 0.5 * t], axis=1)
    (tmp_path / "lines.json").write_text(json.dumps([helix.tolist()]))
    res = run_cli(
        [
            "search", "--reference", "lines.json", "--targets", "lines.json",
            "--threshold", "1e-6", "--stride", "30", "-o", "matches.csv",
        ],
        tmp_path,
    )
    assert res.returncode == 0, res.stderr
    lines = (tmp_path / "matches.csv").read_text().strip().splitlines()
    assert lines[0] == "target,start,end,d_c,d_t,combined"
    assert len(lines) >= 2  # the reference matches itself


def test_bench_subcommand(tmp_path):
    args = [
        "bench", "--suite", "alignment", "--pairs", "2",
        "--variations", "scaled", "--variants", "dtw",
        "--length", "80", "--seed", "1", "--out-dir", "out",
    ]
    res = run_cli(args, tmp_path)
    assert res.returncode == 0, res.stderr
    csv_path = tmp_path / "out" / "alignment-seed1.csv"
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0].startswith("pair_id,variation,variant,g,band,adm,adt,aadft")
    assert len(lines) == 3


def test_unknown_subcommand_exits_2(tmp_path):
    res = run_cli(["frobnicate"], tmp_path)
    assert res.returncode == 2
    assert "usage" in res.stderr.lower()


def test_parameter_error_exits_2(tmp_path, ref_file):
    res = run_cli(["align", "ref.json", "ref.json", "--variant", "wdtw"], tmp_path)  # missing --g
    assert res.returncode == 2
    assert "error" in res.stderr.lower()


def test_byte_identical_reruns(tmp_path, ref_file):
    for name in ("one", "two"):
        res = run_cli(
            ["deform", "ref.json", "--variation", "scaled_mrgp", "--seed", "77", "-o", f"{name}.json"],
            tmp_path,
        )
        assert res.returncode == 0
    assert (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()
