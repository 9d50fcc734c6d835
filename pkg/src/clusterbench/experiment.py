"""Experiment orchestration behind the command-line tool.

Output layout under ``out``::

    runs/<problem_id>/<config_id>.csv   RunLog CSV (all repetitions)
    runs/<problem_id>/<config_id>.json  sidecar, written last
    errors.json                         failed cells, only if any failed
    baselines.csv
    basin/<problem_id>.json, basin/<problem_id>_summary.json, basin/heatmap.csv
    transform_compare.csv
    report/...

Every cell (problem, config, repetition) gets a seed derived from the master
seed, the problem id, lambda and the repetition only, so configs sharing a
population size start from the same samples, and results do not depend on
scheduling or on the number of workers.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import zlib
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis
from .landscape import basin_analysis
from .optimizers import DEFAULT_CONFIG, OptimizerConfig, enumerate_configs, run_es
from .problem import MeteredProblem
from .runlog import RunLog, RunLogError, is_complete, read_runlogs, sidecar_path, write_atomic, write_runlogs
from .suite import build_suite
from .transform import TransformedProblem

logger = logging.getLogger(__name__)


class ExperimentError(RuntimeError):
    pass


def cell_seed(master_seed: int, problem_id: str, lambda_: int, repetition: int) -> int:
    ss = np.random.SeedSequence([int(master_seed), zlib.crc32(problem_id.encode()), int(lambda_),
                                 int(repetition)])
    return int(ss.generate_state(1)[0])


def select_configs(selector: str | list | None, sigma0: float = 0.2) -> list[OptimizerConfig]:
    all_cfgs = enumerate_configs(sigma0)
    if selector in (None, "all"):
        return all_cfgs
    ids = selector.split(",") if isinstance(selector, str) else list(selector)
    by_id = {c.config_id: c for c in all_cfgs}
    out = []
    for cid in ids:
        cid = cid.strip()
        if cid not in by_id:
            raise ExperimentError(f"unknown config id {cid!r}")
        out.append(by_id[cid])
    return out


def select_problems(suite, selector: str | None):
    if selector in (None, "all"):
        return list(suite)
    try:
        return [suite[pid.strip()] for pid in selector.split(",")]
    except KeyError as exc:
        raise ExperimentError(str(exc.args[0])) from None


_WORKER_SUITE = {}


def _suite_for(manifest):
    key = json.dumps(manifest, sort_keys=True, default=str)
    if key not in _WORKER_SUITE:
        _WORKER_SUITE.clear()
        _WORKER_SUITE[key] = build_suite(manifest, with_baselines=False)
    return _WORKER_SUITE[key]


def _run_cell(args):
    manifest, problem_id, cfg_dict, budget, rep, seed, transformed = args
    problem = _suite_for(manifest)[problem_id]
    cfg = OptimizerConfig.from_dict(cfg_dict)
    target = TransformedProblem(problem) if transformed else problem
    try:
        log = run_es(MeteredProblem(target, budget), cfg, budget, seed=seed,
                     run_log=RunLog(problem_id, cfg.config_id, rep))
    except ValueError as exc:
        return None, str(exc)
    return log, None


def _map(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def _manifest_arg(manifest):
    return None if manifest is None else str(Path(manifest).resolve())


def run_grid(out, manifest=None, configs="all", problems=None, budget: int = 5000,
             repetitions: int = 25, seed: int = 0, jobs: int = 1, sigma0: float = 0.2) -> dict:
    """Run every (problem, config, repetition) cell and write RunLog files.

    Files already completed by an identical earlier call are skipped; stray
    temporary files and CSVs without a matching sidecar count as partial
    writes and are recomputed. Returns ``{"written", "skipped", "errors"}``.
    """
    if budget < 1 or repetitions < 1:
        raise ExperimentError("budget and repetitions must be >= 1")
    out = Path(out)
    suite = build_suite(manifest, with_baselines=False)
    cfgs = select_configs(configs, sigma0)
    probs = select_problems(suite, problems)
    manifest_key = _manifest_arg(manifest)

    pending, skipped = [], 0
    for p in probs:
        pdir = out / "runs" / p.problem_id
        pdir.mkdir(parents=True, exist_ok=True)
        for tmp in sorted(pdir.glob("*.tmp")):
            logger.warning("removing partial write %s", tmp)
            tmp.unlink()
        for cfg in cfgs:
            path = pdir / f"{cfg.config_id}.csv"
            if is_complete(path):
                meta = json.loads(sidecar_path(path).read_text(encoding="utf-8"))
                if (meta["budget"], meta["repetitions"], meta["master_seed"]) != (budget, repetitions, seed):
                    raise ExperimentError(
                        f"{path} was produced with different settings; use a fresh output directory")
                skipped += 1
                continue
            if path.exists() or sidecar_path(path).exists():
                logger.warning("partial write detected for %s; recomputing", path)
            pending.append((p, cfg, path))

    tasks = []
    for p, cfg, _ in pending:
        for rep in range(repetitions):
            tasks.append((manifest_key, p.problem_id, cfg.to_dict(), budget, rep,
                          cell_seed(seed, p.problem_id, cfg.lambda_, rep), False))
    results = _map(_run_cell, tasks, jobs)

    errors, written = [], 0
    it = iter(results)
    for p, cfg, path in pending:
        logs, failed = [], []
        for rep in range(repetitions):
            log, err = next(it)
            if err is None:
                logs.append(log)
            else:
                failed.append({"problem_id": p.problem_id, "config_id": cfg.config_id,
                               "repetition": rep, "error": err})
        if failed:
            errors.extend(failed)
            continue
        meta = {"problem_id": p.problem_id, "config_id": cfg.config_id, "config": cfg.to_dict(),
                "dimension": p.dimension, "budget": budget, "repetitions": repetitions,
                "master_seed": seed}
        write_runlogs(logs, path, meta)
        written += 1

    err_path = out / "errors.json"
    if errors:
        write_atomic(err_path, json.dumps(errors, indent=1, sort_keys=True) + "\n")
    elif err_path.exists():
        err_path.unlink()
    return {"written": written, "skipped": skipped, "errors": errors}


def read_run_dir(runs_dir):
    """Load every RunLog file below ``runs_dir``; returns ``(logs, dimensions)``.

    Raises :class:`ExperimentError` listing each malformed file.
    """
    runs_dir = Path(runs_dir)
    files = sorted(runs_dir.glob("*/*.csv")) if runs_dir.is_dir() else []
    if not files:
        raise ExperimentError(f"no run logs found under {runs_dir}; nothing to analyze")
    logs, dims, bad = [], {}, []
    for f in files:
        try:
            chunk = read_runlogs(f)
            meta = json.loads(sidecar_path(f).read_text(encoding="utf-8"))
        except (RunLogError, OSError, json.JSONDecodeError) as exc:
            bad.append(f"{f}: {exc}")
            continue
        dims[meta["problem_id"]] = int(meta.get("dimension", 0))
        logs.extend(chunk)
    if bad:
        raise ExperimentError("malformed run logs:\n  " + "\n  ".join(bad))
    return logs, dims


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def write_report(runs_dir, out_dir, baselines: dict, features: dict | None = None,
                 eaf_points: int = 50) -> dict:
    """Emit plot-ready CSVs and a JSON summary for a directory of run logs."""
    logs, dims = read_run_dir(runs_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = analysis.PerformanceTable.from_logs(logs)
    by_problem = defaultdict(list)
    for log in logs:
        by_problem[log.problem_id].append(log)
    missing = [p for p in by_problem if p not in baselines]
    if missing:
        raise ExperimentError(f"no baseline rows for: {', '.join(sorted(missing))}")
    summary = {"problems": table.problems, "configs": len(table.configs), "runs": len(logs)}

    # Attainment curves, one file per problem dimensionality.
    groups = defaultdict(list)
    for pid in sorted(by_problem):
        groups[dims[pid]].append(pid)
    eaf_files = []
    for m, pids in sorted(groups.items()):
        budget = max(log.budget or log.used for pid in pids for log in by_problem[pid])
        grid = analysis.log_budget_grid(budget, eaf_points)
        rows = []
        for cid in table.configs:
            curves = []
            for pid in pids:
                runs = [log for log in by_problem[pid] if log.config_id == cid]
                if not runs:
                    continue
                lower = float(baselines[pid]["best"])
                upper = max(max(log.raw) for log in by_problem[pid])
                if not lower < upper:
                    logger.warning("skipping %s in EAF: baseline %g >= worst %g", pid, lower, upper)
                    continue
                curves.append(analysis.eaf_curve(runs, lower, upper, grid))
            if curves:
                mean_curve = np.mean(curves, axis=0)
                rows.extend((cid, int(b), float(v)) for b, v in zip(grid, mean_curve))
        name = f"eaf_m{m}.csv"
        (out_dir / name).write_text(_csv_text(("config_id", "budget", "eaf"), rows), encoding="utf-8")
        eaf_files.append(name)
    summary["eaf_files"] = eaf_files

    if len(table.configs) >= 2:
        spreads = {pid: analysis.best_worst_spread(table, pid) for pid in table.problems}
        (out_dir / "spread.csv").write_text(_csv_text(
            ("problem_id", "m", "spread"),
            [(pid, dims[pid], float(v)) for pid, v in spreads.items()]), encoding="utf-8")
        summary["spread"] = spreads

    k_top = min(8, len(table.configs))
    freq = analysis.top_k_module_frequency(table, k_top)
    rows = [(pid, axis, str(value), count)
            for pid, axes in freq.items() for axis, vals in axes.items()
            for value, count in vals.items()]
    (out_dir / "module_frequency.csv").write_text(
        _csv_text(("problem_id", "axis", "value", "count"), rows), encoding="utf-8")
    summary["module_frequency_top_k"] = k_top

    pids, tau = analysis.tau_matrix(table)
    (out_dir / "tau_matrix.csv").write_text(
        _csv_text(["problem_id"] + pids, [[p] + [float(v) for v in r] for p, r in zip(pids, tau)]),
        encoding="utf-8")

    if features:
        fkeys = sorted(features)
        cos = analysis.similarity_matrix(
            fkeys, lambda a, b: analysis.cosine_similarity(features[a], features[b]))
        (out_dir / "cosine_matrix.csv").write_text(
            _csv_text(["problem_id"] + fkeys, [[p] + [float(v) for v in r] for p, r in zip(fkeys, cos)]),
            encoding="utf-8")

    gap = analysis.baseline_gap(table, baselines)
    (out_dir / "baseline_gap.csv").write_text(_csv_text(
        ("problem_id", "lambda", "gap"),
        [(pid, lam, float(g)) for pid, row in gap.items() for lam, g in row.items()]), encoding="utf-8")

    write_atomic(out_dir / "summary.json", json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return summary


def transform_compare(out, manifest=None, problems=None, budget: int = 5000, repetitions: int = 25,
                      seed: int = 0, jobs: int = 1, config: OptimizerConfig = DEFAULT_CONFIG) -> list:
    """Run one config on original and stick-breaking views with paired seeds.

    ``difference = mean_original - mean_transformed``: negative where the
    original representation did better.
    """
    suite = build_suite(manifest, with_baselines=False)
    probs = select_problems(suite, problems)
    manifest_key = _manifest_arg(manifest)
    tasks = [(manifest_key, p.problem_id, config.to_dict(), budget, rep,
              cell_seed(seed, p.problem_id, config.lambda_, rep), transformed)
             for p in probs for transformed in (False, True) for rep in range(repetitions)]
    results = _map(_run_cell, tasks, jobs)
    it = iter(results)
    rows = []
    for p in probs:
        means = []
        for _ in (False, True):
            vals = []
            for _ in range(repetitions):
                log, err = next(it)
                if err is not None:
                    raise ExperimentError(f"{p.problem_id}: {err}")
                vals.append(log.final_value)
            means.append(float(np.mean(vals)))
        orig, trans = means
        diff = orig - trans
        scale = max(orig, trans)
        rows.append((p.problem_id, p.dimension, orig, trans, diff, diff / scale if scale > 0 else 0.0))
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    write_atomic(out / "transform_compare.csv", _csv_text(
        ("problem_id", "m", "mean_original", "mean_transformed", "difference", "relative_difference"),
        rows))
    return rows


def basin_batch(out, manifest=None, problems=None, starts: int = 50, seed: int = 0,
                budget: int = 5000, probe: bool = True) -> list[dict]:
    """Run the basin pipeline per problem; writes graph JSON, summary JSON and a heatmap CSV."""
    suite = build_suite(manifest, with_baselines=False)
    probs = select_problems(suite, problems)
    bdir = Path(out) / "basin"
    bdir.mkdir(parents=True, exist_ok=True)
    summaries = []
    for p in probs:
        report = basin_analysis(p, starts=starts, seed=seed, budget=budget, probe=probe)
        write_atomic(bdir / f"{p.problem_id}.json",
                     json.dumps(report.graph.to_dict(), sort_keys=True) + "\n")
        summary = report.summary()
        write_atomic(bdir / f"{p.problem_id}_summary.json",
                     json.dumps(summary, indent=1, sort_keys=True) + "\n")
        summaries.append(summary)
    write_atomic(bdir / "heatmap.csv", _csv_text(
        ("problem_id", "distinct_solutions"), [(s["problem_id"], s["distinct_solutions"]) for s in summaries]))
    return summaries
