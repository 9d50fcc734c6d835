"""Aggregate views over run logs: attainment curves, spreads, rankings, gaps."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .optimizers import BOUNDARY_RULES, LAMBDAS, MUS, OptimizerConfig

AXES = ("covariance_adaptation", "elitism", "boundary_correction", "lambda_", "mu")
AXIS_VALUES = {
    "covariance_adaptation": (False, True),
    "elitism": (False, True),
    "boundary_correction": BOUNDARY_RULES,
    "lambda_": LAMBDAS,
    "mu": MUS,
}


@dataclass
class PerformanceTable:
    """Mean final best-so-far value per (problem id, config id)."""

    means: dict[tuple[str, str], float] = field(default_factory=dict)
    repetitions: dict[tuple[str, str], int] = field(default_factory=dict)
    budget: int | None = None

    @classmethod
    def from_logs(cls, logs, budget: int | None = None) -> "PerformanceTable":
        groups = defaultdict(list)
        for log in logs:
            value = log.final_value if budget is None else log.best_at(budget)
            groups[(log.problem_id, log.config_id)].append(value)
        return cls({k: float(np.mean(v)) for k, v in groups.items()},
                   {k: len(v) for k, v in groups.items()}, budget)

    @property
    def problems(self) -> list[str]:
        return sorted({p for p, _ in self.means})

    @property
    def configs(self) -> list[str]:
        return sorted({c for _, c in self.means})

    def row(self, problem_id: str) -> dict[str, float]:
        return {c: v for (p, c), v in self.means.items() if p == problem_id}

    def vector(self, problem_id: str, configs) -> np.ndarray:
        row = self.row(problem_id)
        return np.array([row[c] for c in configs])


def eaf_scores(best_values, lower: float, upper: float) -> np.ndarray:
    """Log-scaled attainment of best-so-far values between ``lower`` and ``upper``."""
    if not (lower > 0 and upper > 0):
        raise ValueError("EAF bounds must be positive")
    if lower >= upper:
        raise ValueError(f"need lower < upper, got {lower} >= {upper}")
    v = np.maximum(np.asarray(best_values, dtype=float), lower)
    with np.errstate(invalid="ignore"):
        score = (np.log(upper) - np.log(v)) / (np.log(upper) - np.log(lower))
    return np.clip(np.nan_to_num(score, nan=0.0, neginf=0.0), 0.0, 1.0)


def eaf_curve(logs, lower: float, upper: float, budgets) -> np.ndarray:
    """Mean attainment over runs at each budget.

    This is the empirical cumulative distribution over infinitely many
    log-uniformly spaced targets between the bounds.
    """
    logs = list(logs)
    if not logs:
        raise ValueError("eaf_curve needs at least one run")
    budgets = np.asarray(budgets)
    scores = np.vstack([eaf_scores(log.best_at_many(budgets), lower, upper) for log in logs])
    return scores.mean(axis=0)


def log_budget_grid(budget: int, points: int = 50) -> np.ndarray:
    return np.unique(np.round(np.logspace(0, np.log10(budget), points)).astype(int))


def best_worst_spread(table: PerformanceTable, problem_id: str) -> float:
    """(worst mean - best mean) / worst mean over configs; 0 when both are 0."""
    row = table.row(problem_id)
    if len(row) < 2:
        raise ValueError("need at least two configs")
    best, worst = min(row.values()), max(row.values())
    if worst == 0:
        return 0.0
    return (worst - best) / worst


def ranked_configs(table: PerformanceTable, problem_id: str) -> list[str]:
    row = table.row(problem_id)
    return sorted(row, key=lambda c: (row[c], c))


def top_k_module_frequency(table: PerformanceTable, k_top: int = 8) -> dict[str, dict[str, dict]]:
    """Per problem, how often each module setting appears among the ``k_top`` best configs."""
    out = {}
    for pid in table.problems:
        ranked = ranked_configs(table, pid)
        if k_top > len(ranked):
            raise ValueError(f"k_top={k_top} exceeds {len(ranked)} configs on {pid}")
        counts = {axis: {v: 0 for v in AXIS_VALUES[axis]} for axis in AXES}
        for cid in ranked[:k_top]:
            cfg = OptimizerConfig.from_id(cid)
            for axis in AXES:
                counts[axis][getattr(cfg, axis)] += 1
        out[pid] = counts
    return out


def kendall_tau(a, b) -> float:
    """Kendall's tau-b between two equal-length value lists."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("kendall_tau needs two 1-D sequences of equal length")
    if a.size < 2:
        raise ValueError("kendall_tau needs at least two values")
    i, j = np.triu_indices(a.size, k=1)
    da = np.sign(a[i] - a[j])
    db = np.sign(b[i] - b[j])
    n0 = da.size
    ties_a = np.count_nonzero(da == 0)
    ties_b = np.count_nonzero(db == 0)
    if ties_a == n0 or ties_b == n0:
        raise ValueError("kendall_tau is undefined for a constant input")
    s = float(np.sum(da * db))
    return s / np.sqrt(float(n0 - ties_a) * float(n0 - ties_b))


def cosine_similarity(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError("vectors must have equal length")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.clip(u @ v / (nu * nv), -1.0, 1.0))


def standardize_features(features: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Z-score every feature column across problems; constant columns become 0."""
    keys = list(features)
    mat = np.vstack([features[k] for k in keys]).astype(float)
    sd = mat.std(axis=0)
    z = (mat - mat.mean(axis=0)) / np.where(sd == 0, 1.0, sd)
    z[:, sd == 0] = 0.0
    return dict(zip(keys, z))


def similarity_matrix(keys, fn) -> np.ndarray:
    n = len(keys)
    out = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = fn(keys[i], keys[j])
    return out


def tau_matrix(table: PerformanceTable, problems=None) -> tuple[list[str], np.ndarray]:
    """Pairwise tau-b between problems over their common configs (NaN where undefined)."""
    problems = list(problems or table.problems)
    configs = sorted(set.intersection(*(set(table.row(p)) for p in problems))) if problems else []

    def tau(p, q):
        try:
            return kendall_tau(table.vector(p, configs), table.vector(q, configs))
        except ValueError:
            return float("nan")

    return problems, similarity_matrix(problems, tau)


def baseline_gap(table: PerformanceTable, baselines: dict[str, dict]) -> dict[str, dict[int, float]]:
    """Best mean final value among configs with each lambda, minus the baseline best."""
    out = {}
    for pid in table.problems:
        if pid not in baselines:
            raise KeyError(f"no baseline for problem {pid!r}")
        base = float(baselines[pid]["best"])
        per_lambda = defaultdict(list)
        for cid, v in table.row(pid).items():
            per_lambda[OptimizerConfig.from_id(cid).lambda_].append(v)
        out[pid] = {lam: min(vs) - base for lam, vs in sorted(per_lambda.items())}
    return out
