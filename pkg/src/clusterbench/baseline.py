"""K-Means++ seeded Lloyd iterations used as reference values for each problem."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .problem import ClusteringProblem

BASELINE_COLUMNS = ("problem_id", "repetitions", "best", "mean", "std", "seed")


@dataclass
class BaselineResult:
    problem_id: str
    values: list[float]
    best_vector: np.ndarray
    seed: int
    best: float = field(init=False)

    def __post_init__(self):
        self.best = min(self.values)

    @property
    def repetitions(self) -> int:
        return len(self.values)

    def row(self) -> dict:
        vals = np.asarray(self.values)
        return {
            "problem_id": self.problem_id,
            "repetitions": self.repetitions,
            "best": self.best,
            "mean": float(vals.mean()),
            "std": float(vals.std()),
            "seed": self.seed,
        }


def kmeans_pp_init(problem: ClusteringProblem, seed) -> np.ndarray:
    """Pick ``k`` data points: the first uniformly, later ones with D^2 weighting.

    When every remaining point already coincides with a chosen center (k > n
    distinct points) the next pick falls back to uniform, so duplicates occur.
    """
    x = problem.data.points
    n = x.shape[0]
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    idx = [int(rng.integers(n))]
    nearest = ((x - x[idx[0]]) ** 2).sum(axis=1)
    for _ in range(1, problem.k):
        total = nearest.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=nearest / total))
        else:
            nxt = int(rng.integers(n))
        idx.append(nxt)
        nearest = np.minimum(nearest, ((x - x[nxt]) ** 2).sum(axis=1))
    return x[idx].reshape(-1).copy()


def lloyd_iterations(problem: ClusteringProblem, init, max_iter: int = 300, tol: float = 1e-12):
    """Yield ``(centers, objective)`` after the initial point and after every update.

    An empty cluster is re-seeded at the data point farthest from its nearest
    center before the centroid step.
    """
    x = problem.data.points
    centers = problem.centers(init).copy()
    y = centers.reshape(-1)
    value = problem.evaluate(y)
    yield y.copy(), value
    for _ in range(max_iter):
        labels = problem.labels(centers.reshape(-1))
        counts = np.bincount(labels, minlength=problem.k)
        for j in np.flatnonzero(counts == 0):
            sq = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            far = int(np.argmax(sq.min(axis=1)))
            centers[j] = x[far]
            labels = problem.labels(centers.reshape(-1))
            counts = np.bincount(labels, minlength=problem.k)
        new = centers.copy()
        for j in range(problem.k):
            if counts[j]:
                new[j] = x[labels == j].mean(axis=0)
        new_value = problem.evaluate(new.reshape(-1))
        improvement = value - new_value
        if new_value <= value:
            centers, value = new, new_value
            yield centers.reshape(-1).copy(), value
        if improvement < tol:
            break


def lloyd(problem: ClusteringProblem, init, max_iter: int = 300, tol: float = 1e-12):
    """Run Lloyd's algorithm from ``init``; returns ``(centers, objective)``."""
    for y, value in lloyd_iterations(problem, init, max_iter, tol):
        pass
    return y, value


def run_baseline(problem: ClusteringProblem, repetitions: int = 100, seed: int = 0,
                 max_iter: int = 300, tol: float = 1e-12) -> BaselineResult:
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    values, best_vec = [], None
    for rep in range(repetitions):
        rng = np.random.default_rng([seed, rep])
        y, value = lloyd(problem, kmeans_pp_init(problem, rng), max_iter, tol)
        if best_vec is None or value < min(values):
            best_vec = y
        values.append(value)
    return BaselineResult(problem.problem_id, values, best_vec, seed)


def collect_baselines(suite, repetitions: int = 100, seed: int = 0) -> list[BaselineResult]:
    return [run_baseline(p, repetitions, seed) for p in suite]


def write_baseline_csv(results, path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=BASELINE_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for res in results:
            row = res.row()
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
