"""Centroid-clustering objective on flattened center vectors.

A problem with ``k`` centers over ``d``-dimensional data is a black-box
function of ``m = k * d`` variables. Center ``j`` (0-based) occupies entries
``[j * d, (j + 1) * d)`` of the decision vector.

Distances are accumulated dimension by dimension and per-point errors are
summed left to right, so a single vector, a batch row, and a naive scalar loop
all produce bit-identical values, independent of the order of the centers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset

ASSIGNMENT_METRICS = ("sqeuclidean", "euclidean", "manhattan")
ERROR_METRICS = ("mean", "sum", "max")


class BudgetExhausted(RuntimeError):
    """Raised by a metered handle once its evaluation budget is spent."""


@dataclass(frozen=True, eq=False)
class ClusteringProblem:
    """Minimize the clustering error of ``k`` centers over ``data``.

    Parameters
    ----------
    data : Dataset
        The points to cluster, normally min-max normalized.
    k : int
        Number of centers.
    assignment_metric : str
        Distance used to pick each point's nearest center: ``"sqeuclidean"``
        (default), ``"euclidean"`` or ``"manhattan"``.
    error_metric : str
        How the squared Euclidean point-to-assigned-center errors are
        aggregated: ``"mean"`` (default, the MSE), ``"sum"``, or ``"max"``
        (largest error within each cluster, then the largest over clusters).
    problem_id : str
        Label used in logs and tables.
    """

    data: Dataset
    k: int
    assignment_metric: str = "sqeuclidean"
    error_metric: str = "mean"
    problem_id: str = ""

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.assignment_metric not in ASSIGNMENT_METRICS:
            raise ValueError(f"unknown assignment metric {self.assignment_metric!r}")
        if self.error_metric not in ERROR_METRICS:
            raise ValueError(f"unknown error metric {self.error_metric!r}")

    @property
    def d(self) -> int:
        return self.data.d

    @property
    def dimension(self) -> int:
        return self.k * self.data.d

    def centers(self, y) -> np.ndarray:
        """Reshape a flat vector (or batch of vectors) into ``(..., k, d)`` centers."""
        y = np.asarray(y, dtype=float)
        if y.shape[-1] != self.dimension:
            raise ValueError(f"expected vectors of length {self.dimension}, got shape {y.shape}")
        if not np.all(np.isfinite(y)):
            raise ValueError("center vector has non-finite entries")
        return y.reshape(y.shape[:-1] + (self.k, self.d))

    def _distances(self, centers: np.ndarray, metric: str) -> np.ndarray:
        # centers: (B, k, d) -> (B, n, k)
        x = self.data.points
        out = np.zeros((centers.shape[0], x.shape[0], self.k))
        for t in range(self.d):
            diff = x[None, :, None, t] - centers[:, None, :, t]
            out += np.abs(diff) if metric == "manhattan" else diff * diff
        if metric == "euclidean":
            np.sqrt(out, out=out)
        return out

    def _labels_and_errors(self, centers: np.ndarray):
        sq = self._distances(centers, "sqeuclidean")
        if self.assignment_metric == "sqeuclidean":
            labels = np.argmin(sq, axis=2)
        else:
            labels = np.argmin(self._distances(centers, self.assignment_metric), axis=2)
        errors = np.take_along_axis(sq, labels[..., None], axis=2)[..., 0]
        return labels, errors

    def evaluate_batch(self, ys) -> np.ndarray:
        """Objective values for a ``(B, m)`` array of center vectors."""
        ys = np.asarray(ys, dtype=float)
        if ys.ndim != 2:
            raise ValueError("evaluate_batch expects a 2-D array")
        labels, errors = self._labels_and_errors(self.centers(ys))
        if self.error_metric == "max":
            # max within each cluster, then over clusters: the overall max.
            return errors.max(axis=1)
        total = np.cumsum(errors, axis=1)[:, -1]
        if self.error_metric == "mean":
            return total / self.data.n
        return total

    def evaluate(self, y) -> float:
        """Objective value of one flat center vector."""
        y = np.asarray(y, dtype=float)
        if y.ndim != 1:
            raise ValueError("evaluate expects a 1-D vector")
        return float(self.evaluate_batch(y[None, :])[0])

    __call__ = evaluate

    def labels(self, y) -> np.ndarray:
        """Index of the assigned center for every data point (ties go to the lowest index)."""
        labels, _ = self._labels_and_errors(self.centers(np.asarray(y, dtype=float)[None, :]))
        return labels[0]

    def assign(self, y) -> np.ndarray:
        """The ``n x k`` 0/1 assignment matrix with exactly one 1 per row."""
        lab = self.labels(y)
        b = np.zeros((self.data.n, self.k), dtype=np.int8)
        b[np.arange(self.data.n), lab] = 1
        return b

    def active_centers(self, y) -> set[int]:
        """0-based indices of centers that are nearest to at least one point."""
        return {int(j) for j in np.unique(self.labels(y))}

    def canonicalize(self, y):
        """Stable-sort center blocks by their first coordinate.

        Returns the reordered vector and the permutation ``perm`` such that
        block ``i`` of the result is block ``perm[i]`` of the input.
        """
        c = self.centers(y)
        perm = np.argsort(c[:, 0], kind="stable")
        return c[perm].reshape(-1).copy(), tuple(int(p) for p in perm)

    def region_id(self, y) -> tuple[int, ...]:
        """Permutation identifying the symmetry region of ``y``; identity means sorted."""
        return self.canonicalize(y)[1]

    def permute(self, y, perm) -> np.ndarray:
        """Reorder center blocks: block ``i`` of the result is block ``perm[i]`` of ``y``."""
        return self.centers(y)[list(perm)].reshape(-1).copy()


def assign(problem: ClusteringProblem, centers) -> np.ndarray:
    return problem.assign(centers)


def evaluate(problem: ClusteringProblem, centers) -> float:
    return problem.evaluate(centers)


def active_centers(problem: ClusteringProblem, centers) -> set[int]:
    return problem.active_centers(centers)


def canonicalize(problem: ClusteringProblem, centers):
    return problem.canonicalize(centers)


def region_id(problem: ClusteringProblem, centers) -> tuple[int, ...]:
    return problem.region_id(centers)


class MeteredProblem:
    """Single-owner evaluation handle that counts calls against a budget.

    Wraps anything exposing ``dimension`` and ``evaluate_batch`` (a
    ``ClusteringProblem`` or a transformed view of one).
    """

    def __init__(self, problem, budget: int):
        if budget < 1:
            raise ValueError("budget must be >= 1")
        self.problem = problem
        self.budget = int(budget)
        self.evaluations = 0

    @property
    def dimension(self) -> int:
        return self.problem.dimension

    @property
    def problem_id(self) -> str:
        return getattr(self.problem, "problem_id", "")

    @property
    def remaining(self) -> int:
        return self.budget - self.evaluations

    def evaluate_batch(self, ys) -> np.ndarray:
        ys = np.asarray(ys, dtype=float)
        if ys.shape[0] > self.remaining:
            raise BudgetExhausted(
                f"requested {ys.shape[0]} evaluations with {self.remaining} remaining"
            )
        values = self.problem.evaluate_batch(ys)
        self.evaluations += ys.shape[0]
        return values

    def evaluate(self, y) -> float:
        return float(self.evaluate_batch(np.asarray(y, dtype=float)[None, :])[0])

    __call__ = evaluate
