"""Best-so-far trajectories and their on-disk format.

One CSV per (problem, config) with columns ``run_id, evaluations, raw_y,
best_so_far``, plus a JSON sidecar holding the config, per-run seeds, budget,
final best vectors, and a SHA-256 of the CSV. The sidecar is written last and
acts as the completion marker.
"""
from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CSV_COLUMNS = ("run_id", "evaluations", "raw_y", "best_so_far")


class RunLogError(ValueError):
    pass


@dataclass
class RunLog:
    problem_id: str = ""
    config_id: str = ""
    repetition: int = 0
    evaluations: list[int] = field(default_factory=list)
    raw: list[float] = field(default_factory=list)
    best: list[float] = field(default_factory=list)
    final_best: np.ndarray | None = None
    seed: int | None = None
    budget: int | None = None

    @property
    def used(self) -> int:
        return self.evaluations[-1] if self.evaluations else 0

    @property
    def final_value(self) -> float:
        return self.best[-1]

    def best_at(self, budget) -> float:
        """Best-so-far after ``budget`` evaluations (step interpolation); inf before the first."""
        i = np.searchsorted(self.evaluations, budget, side="right")
        return float(self.best[i - 1]) if i > 0 else float("inf")

    def best_at_many(self, budgets) -> np.ndarray:
        idx = np.searchsorted(self.evaluations, np.asarray(budgets), side="right")
        best = np.concatenate([[np.inf], np.asarray(self.best, dtype=float)])
        return best[idx]


class Recorder:
    """Build a :class:`RunLog` from evaluations made through a metered handle.

    Logs every strict improvement, and whatever evaluation closes a
    generation when :meth:`boundary` is called.
    """

    def __init__(self, handle, log: RunLog):
        self.handle = handle
        self.log = log
        self.best_f = float("inf")
        self.best_x = None
        self._last_logged = 0
        self._pending = (0, None)

    def _append(self, evals, f):
        self.log.evaluations.append(int(evals))
        self.log.raw.append(float(f))
        self.log.best.append(self.best_f)
        self._last_logged = evals

    def batch(self, xs, fs):
        start = self.handle.evaluations - len(fs)
        for i, (x, f) in enumerate(zip(xs, fs)):
            if f < self.best_f:
                self.best_f = float(f)
                self.best_x = np.array(x, dtype=float)
                self._append(start + i + 1, f)
        if len(fs):
            self._pending = (start + len(fs), float(fs[-1]))

    def one(self, x, f):
        self.batch([x], [f])

    def boundary(self):
        evals, f = self._pending
        if evals and evals != self._last_logged:
            self._append(evals, f)

    def finish(self) -> RunLog:
        self.boundary()
        self.log.final_best = self.best_x
        return self.log


def _fmt(v: float) -> str:
    return repr(float(v))


def write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def runlogs_to_csv(logs) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for log in logs:
        for e, r, b in zip(log.evaluations, log.raw, log.best):
            lines.append(f"{log.repetition},{e},{_fmt(r)},{_fmt(b)}")
    return "\n".join(lines) + "\n"


def write_runlogs(logs, csv_path, meta: dict) -> None:
    """Write the CSV and then its ``.json`` sidecar next to it, both atomically."""
    csv_path = Path(csv_path)
    text = runlogs_to_csv(logs)
    write_atomic(csv_path, text)
    sidecar = dict(meta)
    sidecar["runs"] = [
        {"run_id": log.repetition, "seed": log.seed, "evaluations_used": log.used,
         "final_best_value": log.final_value,
         "final_best": None if log.final_best is None else [float(v) for v in log.final_best]}
        for log in logs
    ]
    sidecar["csv_sha256"] = hashlib.sha256(text.encode("utf-8")).hexdigest()
    write_atomic(sidecar_path(csv_path), json.dumps(sidecar, indent=1, sort_keys=True) + "\n")


def sidecar_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + ".json")


def is_complete(csv_path) -> bool:
    """True when both files exist and the sidecar hash matches the CSV bytes."""
    csv_path = Path(csv_path)
    side = sidecar_path(csv_path)
    if not csv_path.is_file() or not side.is_file():
        return False
    try:
        meta = json.loads(side.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        return False
    return meta.get("csv_sha256") == hashlib.sha256(csv_path.read_bytes()).hexdigest()


def read_runlogs(csv_path) -> list[RunLog]:
    """Parse a RunLog CSV and its sidecar; raises :class:`RunLogError` naming the file."""
    csv_path = Path(csv_path)
    side = sidecar_path(csv_path)
    try:
        meta = json.loads(side.read_text(encoding="utf-8"))
        runs: dict[int, RunLog] = {}
        with csv_path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise RunLogError(f"{csv_path}: unexpected header {reader.fieldnames}")
            for row in reader:
                rid = int(row["run_id"])
                log = runs.setdefault(rid, RunLog(meta["problem_id"], meta["config_id"], rid,
                                                  budget=meta.get("budget")))
                log.evaluations.append(int(row["evaluations"]))
                log.raw.append(float(row["raw_y"]))
                log.best.append(float(row["best_so_far"]))
    except RunLogError:
        raise
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise RunLogError(f"{csv_path}: {exc}") from None
    for run in meta.get("runs", []):
        log = runs.get(run["run_id"])
        if log is not None:
            log.seed = run.get("seed")
            if run.get("final_best") is not None:
                log.final_best = np.array(run["final_best"])
    for log in runs.values():
        if not log.evaluations or any(np.diff(log.evaluations) <= 0) or any(np.diff(log.best) > 0):
            raise RunLogError(f"{csv_path}: run {log.repetition} violates log monotonicity")
    return [runs[r] for r in sorted(runs)]
