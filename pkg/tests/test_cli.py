import csv
import hashlib
import json
import os

import numpy as np
import pytest

from clusterbench.cli import main
from clusterbench.experiment import cell_seed, run_grid

CFGS = "C1-E0-B0-L010-M005,C0-E1-B1-L010-M010"


@pytest.fixture
def manifest(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"datasets": [
        {"name": "ruspini", "source": "builtin:ruspini", "preprocessing": {"pca_dim": 2, "normalize": True}},
        {"name": "blobs4", "source": "builtin:blobs4", "preprocessing": {"pca_dim": 2, "normalize": True}},
    ], "k_values": [2, 3]}))
    return path


def _tree(root):
    out = {}
    for dirpath, _, files in os.walk(root):
        for f in files:
            p = os.path.join(dirpath, f)
            out[os.path.relpath(p, root)] = hashlib.sha256(open(p, "rb").read()).hexdigest()
    return out


def test_suite_list_default(capsys):
    assert main(["suite-list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 41
    assert lines[0].split("\t") == ["problem_id", "dataset", "k", "m"]


def test_suite_list_empty_manifest(tmp_path, capsys):
    (tmp_path / "e.json").write_text("[]")
    assert main(["suite-list", "--manifest", str(tmp_path / "e.json")]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 1


def test_suite_list_bad_path(tmp_path, capsys):
    assert main(["suite-list", "--manifest", str(tmp_path / "none.json")]) == 2
    assert "not found" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["run", "--budget", "0"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1


def test_run_and_rerun(manifest, tmp_path, capsys):
    out = tmp_path / "out"
    args = ["run", "--manifest", str(manifest), "--out", str(out), "--budget", "200", "--reps", "2",
            "--configs", CFGS, "--problem", "F1_k2"]
    assert main(args) == 0
    files = sorted((out / "runs" / "F1_k2").iterdir())
    assert [f.name for f in files] == ["C0-E1-B1-L010-M010.csv", "C0-E1-B1-L010-M010.json",
                                       "C1-E0-B0-L010-M005.csv", "C1-E0-B0-L010-M005.json"]
    mtimes = {f: f.stat().st_mtime_ns for f in files}
    before = _tree(out)
    assert main(args) == 0
    assert "skipped 2" in capsys.readouterr().out
    assert {f: f.stat().st_mtime_ns for f in files} == mtimes
    assert _tree(out) == before


def test_resume_after_partial_write(manifest, tmp_path):
    out = tmp_path / "out"
    kw = dict(manifest=manifest, configs=CFGS, problems="F1_k2", budget=150, repetitions=2)
    run_grid(out, **kw)
    reference = _tree(out)
    victim = out / "runs" / "F1_k2" / "C1-E0-B0-L010-M005.csv"
    victim.write_text(victim.read_text()[:40])
    (out / "runs" / "F1_k2" / "junk.csv.tmp").write_text("x")
    res = run_grid(out, **kw)
    assert (res["written"], res["skipped"]) == (1, 1)
    assert _tree(out) == reference


def test_settings_mismatch_refused(manifest, tmp_path, capsys):
    out = tmp_path / "out"
    base = ["run", "--manifest", str(manifest), "--out", str(out), "--reps", "1",
            "--configs", CFGS, "--problem", "F1_k2"]
    assert main(base + ["--budget", "100"]) == 0
    assert main(base + ["--budget", "120"]) == 2
    assert "different settings" in capsys.readouterr().err


def test_budget_smaller_than_lambda(manifest, tmp_path):
    out = tmp_path / "out"
    code = main(["run", "--manifest", str(manifest), "--out", str(out), "--budget", "4", "--reps", "1",
                 "--configs", "C1-E0-B0-L005-M005,C1-E0-B0-L010-M005", "--problem", "F1_k2"])
    assert code == 3
    errors = json.loads((out / "errors.json").read_text())
    assert {e["config_id"] for e in errors} == {"C1-E0-B0-L005-M005", "C1-E0-B0-L010-M005"}
    assert "lambda" in errors[0]["error"]


def test_partial_failure_other_runs_proceed(manifest, tmp_path):
    out = tmp_path / "out"
    code = main(["run", "--manifest", str(manifest), "--out", str(out), "--budget", "7", "--reps", "1",
                 "--configs", "C1-E0-B0-L005-M005,C1-E0-B0-L010-M005", "--problem", "F1_k2"])
    assert code == 3
    assert (out / "runs" / "F1_k2" / "C1-E0-B0-L005-M005.json").exists()
    assert not (out / "runs" / "F1_k2" / "C1-E0-B0-L010-M005.csv").exists()


def test_unknown_config_is_data_error(manifest, tmp_path):
    assert main(["run", "--manifest", str(manifest), "--out", str(tmp_path), "--configs", "X"]) == 2


def test_seed_depends_on_lambda_and_rep_only(manifest, tmp_path):
    from clusterbench.optimizers import OptimizerConfig, run_es
    from clusterbench.problem import MeteredProblem
    from clusterbench.suite import build_suite

    problem = build_suite(manifest, with_baselines=False)["F1_k2"]
    seed = cell_seed(0, "F1_k2", 10, 0)
    assert seed == cell_seed(0, "F1_k2", 10, 0) != cell_seed(0, "F1_k2", 20, 0)
    seen = []

    class Spy(MeteredProblem):
        def evaluate_batch(self, ys):
            seen.append(np.array(ys))
            return super().evaluate_batch(ys)

    pair = ["C1-E0-B0-L010-M005", "C0-E1-B0-L010-M010"]
    for cid in pair:
        run_es(Spy(problem, 10), OptimizerConfig.from_id(cid), 10, seed=seed)
    assert np.array_equal(seen[0], seen[1])
    # The written logs agree on the first generation as well.
    out = tmp_path / "out"
    run_grid(out, manifest, ",".join(pair), "F1_k2", budget=10, repetitions=1)
    raws = []
    for cid in pair:
        with open(out / "runs" / "F1_k2" / f"{cid}.csv") as fh:
            raws.append([r["raw_y"] for r in csv.DictReader(fh)])
    assert raws[0] == raws[1]


def test_run_deterministic_across_jobs(manifest, tmp_path):
    common = dict(manifest=manifest, configs=CFGS, problems="F1_k2,F2_k3", budget=120, repetitions=2)
    run_grid(tmp_path / "a", jobs=1, **common)
    run_grid(tmp_path / "b", jobs=2, **common)
    assert _tree(tmp_path / "a") == _tree(tmp_path / "b")


def test_report_empty_dir(tmp_path, capsys):
    assert main(["report", "--runs", str(tmp_path), "--out", str(tmp_path / "o")]) == 2
    assert "nothing to analyze" in capsys.readouterr().err


def test_report_single_problem(manifest, tmp_path):
    out = tmp_path / "out"
    run_grid(out, manifest, CFGS, "F1_k2", budget=100, repetitions=2)
    base = tmp_path / "base"
    assert main(["baseline", "--manifest", str(manifest), "--out", str(base), "--reps", "3"]) == 0
    feats = tmp_path / "f.csv"
    feats.write_text("problem_id,a,b\nF1_k2,1,2\nF2_k2,2,1\n")
    assert main(["report", "--out", str(out), "--baselines", str(base / "baselines.csv"),
                 "--features", str(feats), "--standardize"]) == 0
    rep = out / "report"
    tau = list(csv.reader(open(rep / "tau_matrix.csv")))
    assert tau == [["problem_id", "F1_k2"], ["F1_k2", "1.0"]]
    assert (rep / "eaf_m4.csv").exists()
    assert sorted(p.name for p in rep.iterdir()) == sorted([
        "eaf_m4.csv", "spread.csv", "module_frequency.csv", "tau_matrix.csv", "cosine_matrix.csv",
        "baseline_gap.csv", "summary.json"])


def test_report_malformed_log_named(manifest, tmp_path, capsys):
    out = tmp_path / "out"
    run_grid(out, manifest, CFGS, "F1_k2", budget=100, repetitions=1)
    bad = out / "runs" / "F1_k2" / "C1-E0-B0-L010-M005.csv"
    bad.write_text("junk\n")
    assert main(["report", "--out", str(out)]) == 2
    assert "C1-E0-B0-L010-M005.csv" in capsys.readouterr().err


def test_baseline_command_deterministic(manifest, tmp_path):
    for name in ("a", "b"):
        assert main(["baseline", "--manifest", str(manifest), "--out", str(tmp_path / name), "--reps", "4"]) == 0
    a = (tmp_path / "a" / "baselines.csv").read_bytes()
    assert a == (tmp_path / "b" / "baselines.csv").read_bytes()
    assert len(a.decode().strip().splitlines()) == 5


def test_basin_command(manifest, tmp_path, capsys):
    args = ["basin", "--manifest", str(manifest), "--out", str(tmp_path), "--problem", "F1_k2",
            "--starts", "3", "--budget", "300"]
    assert main(args) == 0
    first = (tmp_path / "basin" / "F1_k2.json").read_bytes()
    summary = json.loads((tmp_path / "basin" / "F1_k2_summary.json").read_text())
    assert 0 <= summary["retention"] <= 1 and summary["distinct_solutions"] >= 1
    assert main(args) == 0
    assert (tmp_path / "basin" / "F1_k2.json").read_bytes() == first


def test_basin_k1_manifest(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"datasets": [{"name": "r", "source": "builtin:ruspini"}], "k_values": [1]}))
    assert main(["basin", "--manifest", str(path), "--out", str(tmp_path), "--problem", "F1_k1",
                 "--starts", "3", "--budget", "300", "--no-probe"]) == 0
    assert json.loads((tmp_path / "basin" / "F1_k1_summary.json").read_text())["distinct_solutions"] == 1


def test_transform_compare(manifest, tmp_path):
    assert main(["transform-compare", "--manifest", str(manifest), "--out", str(tmp_path),
                 "--problem", "F1_k2,F1_k3", "--budget", "100", "--reps", "2"]) == 0
    rows = list(csv.DictReader(open(tmp_path / "transform_compare.csv")))
    assert [r["problem_id"] for r in rows] == ["F1_k2", "F1_k3"]
    for r in rows:
        assert float(r["difference"]) == pytest.approx(float(r["mean_original"]) - float(r["mean_transformed"]))


def test_transform_compare_k1_zero_difference(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"datasets": [{"name": "r", "source": "builtin:ruspini",
                                              "preprocessing": {"pca_dim": 2, "normalize": True}}],
                                "k_values": [1]}))
    # Both views converge to the centroid value once the runs are long enough.
    assert main(["transform-compare", "--manifest", str(path), "--out", str(tmp_path),
                 "--budget", "1000", "--reps", "3"]) == 0
    row = next(csv.DictReader(open(tmp_path / "transform_compare.csv")))
    assert abs(float(row["difference"])) < 1e-12


def test_env_default_out(manifest, tmp_path, monkeypatch):
    monkeypatch.setenv("CLUSTERBENCH_OUT", str(tmp_path / "env"))
    assert main(["run", "--manifest", str(manifest), "--budget", "50", "--reps", "1",
                 "--configs", "C1-E0-B0-L010-M005", "--problem", "F1_k2"]) == 0
    assert (tmp_path / "env" / "runs" / "F1_k2" / "C1-E0-B0-L010-M005.csv").exists()
