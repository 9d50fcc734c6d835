"""Symmetry-breaking reparameterization via ordered stick breaking.

The map sends the unit cube onto the set of non-decreasing vectors in
[0, 1]^k. Step ``i`` (1-based) takes a ``Beta(1, k - i + 1)`` quantile of the
remaining stick, which is the law of successive uniform order statistics, so
the shape parameter is 1 (uniform) at the last step.
"""
from __future__ import annotations

import numpy as np

_TOL = 1e-12


def beta1_ppf(u, b):
    """Inverse CDF of ``Beta(1, b)``: ``1 - (1 - u) ** (1 / b)``.

    Written with ``log1p``/``expm1``; numpy's ``power`` rounds differently on
    scalars and arrays, which would make batch and single evaluation disagree.
    """
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        return -np.expm1(np.log1p(-u) / b)


def stick_breaking_transform(x) -> np.ndarray:
    """Map ``x`` in [0, 1]^k (last axis) to a sorted vector in [0, 1]^k."""
    x = np.asarray(x, dtype=float)
    if np.any(x < -_TOL) or np.any(x > 1 + _TOL) or not np.all(np.isfinite(x)):
        raise ValueError("stick_breaking_transform expects inputs in [0, 1]")
    x = np.clip(x, 0.0, 1.0)
    k = x.shape[-1]
    t = np.empty_like(x)
    prev = np.zeros(x.shape[:-1])
    for i in range(k):
        frac = beta1_ppf(x[..., i], k - i)
        prev = prev + (1.0 - prev) * frac
        t[..., i] = prev
    return t


class TransformedProblem:
    """View of a clustering problem searched in stick-breaking coordinates.

    The first coordinate of every center is gathered, pushed through
    :func:`stick_breaking_transform`, and written back; other coordinates are
    passed through. First coordinates are saturated to [0, 1] beforehand,
    because the transform is only defined there while samplers may step
    outside the box.
    """

    def __init__(self, base):
        self.base = base
        self.k = base.k
        self.d = base.d
        self.problem_id = getattr(base, "problem_id", "")

    @property
    def dimension(self) -> int:
        return self.base.dimension

    def to_base(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        c = xs.reshape(xs.shape[:-1] + (self.k, self.d)).copy()
        c[..., 0] = stick_breaking_transform(np.clip(c[..., 0], 0.0, 1.0))
        return c.reshape(xs.shape)

    def evaluate_batch(self, xs) -> np.ndarray:
        return self.base.evaluate_batch(self.to_base(xs))

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(self.evaluate_batch(x[None, :])[0])

    __call__ = evaluate


def transformed_problem(problem) -> TransformedProblem:
    return TransformedProblem(problem)
