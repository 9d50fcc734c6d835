"""Basin analysis: region-constrained restarts, hill-valley graphs, cliques.

Functions accept either a problem exposing ``evaluate``/``evaluate_batch`` or
a plain callable on 1-D arrays, so they can be checked on closed-form
surrogates as well as on clustering problems.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np


def _batch(problem):
    if hasattr(problem, "evaluate_batch"):
        return problem.evaluate_batch
    return lambda ys: np.array([float(problem(y)) for y in ys])


def _single(problem):
    if hasattr(problem, "evaluate"):
        return problem.evaluate
    return lambda y: float(problem(y))


def region_constrained_starts(problem, count: int, seed) -> list[np.ndarray]:
    """``count`` distinct uniform points of [0, 1]^m, each moved into the identity region."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    out, seen = [], set()
    while len(out) < count:
        y, _ = problem.canonicalize(rng.uniform(0.0, 1.0, problem.dimension))
        key = y.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(y)
    return out


def region_retention(problem, pairs) -> float:
    """Fraction of ``(start, final)`` pairs whose final point kept the start's region."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("region_retention needs at least one (start, final) pair")
    same = sum(problem.region_id(s) == problem.region_id(f) for s, f in pairs)
    return same / len(pairs)


def _ordered(a, b):
    # Fixed endpoint order keeps the interpolated points bit-identical for (a, b) and (b, a).
    return (a, b) if tuple(a) <= tuple(b) else (b, a)


def hill_valley_points(a, b, intermediates: int = 4) -> np.ndarray:
    a, b = _ordered(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    t = np.arange(1, intermediates + 1) / (intermediates + 1)
    return a[None, :] + t[:, None] * (b - a)[None, :]


def hill_valley_same_basin(problem, a, b, intermediates: int = 4, tolerance: float = 1e-9,
                           fa: float | None = None, fb: float | None = None) -> bool:
    """True when no interior point of segment ``a``-``b`` rises above the worse endpoint.

    ``intermediates`` equally spaced points are tested; a point counts as a
    barrier only if it exceeds ``max(f(a), f(b)) + tolerance``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("hill-valley endpoints must be finite")
    if intermediates < 1:
        raise ValueError("intermediates must be >= 1")
    single = _single(problem)
    fa = single(a) if fa is None else fa
    fb = single(b) if fb is None else fb
    values = _batch(problem)(hill_valley_points(a, b, intermediates))
    return bool(np.all(values <= max(fa, fb) + tolerance))


@dataclass
class SolutionGraph:
    vectors: list[np.ndarray]
    values: list[float]
    algorithms: list[str]
    edges: list[tuple[int, int]] = field(default_factory=list)
    cliques: list[tuple[int, ...]] = field(default_factory=list)
    representatives: list[int] = field(default_factory=list)
    membership: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "nodes": [{"vector": [float(v) for v in vec], "value": float(val), "algorithm": alg}
                      for vec, val, alg in zip(self.vectors, self.values, self.algorithms)],
            "edges": [list(e) for e in self.edges],
            "cliques": [list(c) for c in self.cliques],
            "representatives": list(self.representatives),
        }


def maximal_cliques(n_nodes: int, edges) -> list[tuple[int, ...]]:
    """All maximal cliques (Bron-Kerbosch with pivoting), sorted, isolated nodes included."""
    g = nx.Graph()
    g.add_nodes_from(range(n_nodes))
    g.add_edges_from(edges)
    return sorted(tuple(sorted(c)) for c in nx.find_cliques(g))


def build_solution_graph(problem, solutions, values=None, algorithms=None, intermediates: int = 4,
                         tolerance: float = 1e-9) -> SolutionGraph:
    """Link solutions that pass the hill-valley test and group them by clique.

    Every node joins the maximal clique with the lowest best value among
    those containing it (ties: lexicographically smallest clique); the cliques
    that receive at least one node are kept, and each is represented by its
    lowest-valued member.
    """
    vectors = [np.asarray(s, dtype=float) for s in solutions]
    if not vectors:
        raise ValueError("need at least one solution")
    if values is None:
        values = [float(v) for v in _batch(problem)(np.vstack(vectors))]
    values = [float(v) for v in values]
    algorithms = list(algorithms) if algorithms is not None else ["unknown"] * len(vectors)
    n = len(vectors)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if hill_valley_same_basin(problem, vectors[i], vectors[j], intermediates, tolerance,
                                      values[i], values[j]):
                edges.append((i, j))
    all_cliques = maximal_cliques(n, edges)

    def clique_key(c):
        return (min(values[i] for i in c), c)

    membership_clique = []
    for node in range(n):
        membership_clique.append(min((c for c in all_cliques if node in c), key=clique_key))
    used = sorted(set(membership_clique), key=clique_key)
    index = {c: i for i, c in enumerate(used)}
    reps = [min(c, key=lambda i: (values[i], i)) for c in used]
    return SolutionGraph(vectors, values, algorithms, edges, used, reps,
                         [index[c] for c in membership_clique])


def count_distinct_solutions(graph: SolutionGraph, merge_eps: float = 1e-3) -> int:
    """Representatives left after merging those closer than ``merge_eps`` (single linkage)."""
    reps = graph.representatives
    g = nx.Graph()
    g.add_nodes_from(range(len(reps)))
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if np.linalg.norm(graph.vectors[reps[i]] - graph.vectors[reps[j]]) < merge_eps:
                g.add_edge(i, j)
    return nx.number_connected_components(g)


def basin_connectivity_probe(problem, worse, better, perturb_scale: float = 0.01,
                             closeness_eps: float = 0.05, stagnation_limit: int = 1000,
                             seed=0, max_proposals: int = 1_000_000) -> str:
    """Hill-climb from ``worse`` and report whether it reaches ``better``.

    Isotropic Gaussian perturbations of scale ``perturb_scale`` are accepted
    only on strict improvement. Returns ``"connected"`` once the walk is within
    ``closeness_eps`` of ``better``, ``"disconnected"`` after
    ``stagnation_limit`` consecutive rejections (or ``max_proposals`` total).
    """
    f = _single(problem)
    x = np.asarray(worse, dtype=float).copy()
    target = np.asarray(better, dtype=float)
    fx, ft = f(x), f(target)
    if fx < ft:
        raise ValueError("precondition violated: f(worse) < f(better)")
    rng = np.random.default_rng(seed)
    fails = 0
    for _ in range(max_proposals):
        if np.linalg.norm(x - target) < closeness_eps:
            return "connected"
        cand = x + perturb_scale * rng.standard_normal(x.shape)
        fc = f(cand)
        if fc < fx:
            x, fx, fails = cand, fc, 0
        else:
            fails += 1
            if fails >= stagnation_limit:
                break
    return "connected" if np.linalg.norm(x - target) < closeness_eps else "disconnected"


def connectivity_matrix(problem, graph: SolutionGraph, seed: int = 0, **probe_kwargs) -> list[list[str]]:
    """Probe every pair of representatives, starting from the worse one of each pair."""
    reps = graph.representatives
    out = [["self" if i == j else "" for j in range(len(reps))] for i in range(len(reps))]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            a, b = reps[i], reps[j]
            worse, better = (a, b) if graph.values[a] >= graph.values[b] else (b, a)
            verdict = basin_connectivity_probe(problem, graph.vectors[worse], graph.vectors[better],
                                               seed=[seed, i, j],
                                               **probe_kwargs)
            out[i][j] = out[j][i] = verdict
    return out



@dataclass
class BasinReport:
    problem_id: str
    retention: float
    retention_by_algorithm: dict[str, float]
    graph: SolutionGraph
    distinct: int
    connectivity: list[list[str]]

    def summary(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "solutions": len(self.graph.vectors),
            "retention": self.retention,
            "retention_by_algorithm": self.retention_by_algorithm,
            "cliques": len(self.graph.cliques),
            "representatives": len(self.graph.representatives),
            "distinct_solutions": self.distinct,
            "representative_values": [self.graph.values[r] for r in self.graph.representatives],
            "connectivity": self.connectivity,
        }


def local_search_finals(problem, starts, budget: int = 5000, seed: int = 0, sigma0: float = 0.1):
    """Run the simplex search and the (1+1)-ES from every start.

    Returns ``(pairs, algorithms)`` with one ``(start, final)`` pair per run.
    """
    from .optimizers import run_one_plus_one, run_simplex_local
    from .problem import MeteredProblem

    pairs, algorithms = [], []
    for i, start in enumerate(starts):
        log = run_simplex_local(MeteredProblem(problem, budget), start, budget, seed=[seed, i, 0])
        pairs.append((start, log.final_best))
        algorithms.append("simplex")
        log = run_one_plus_one(MeteredProblem(problem, budget), start, sigma0, budget,
                               seed=[seed, i, 1])
        pairs.append((start, log.final_best))
        algorithms.append("one_plus_one")
    return pairs, algorithms


def basin_analysis(problem, starts: int = 50, seed: int = 0, budget: int = 5000,
                   intermediates: int = 4, tolerance: float = 1e-9, merge_eps: float = 1e-3,
                   probe: bool = True, **probe_kwargs) -> BasinReport:
    """Full pipeline: restarts in one region, local search, graph, representatives, probes.

    Final solutions are canonicalized before the graph is built, so copies of
    one clustering that differ only in center order count once.
    """
    start_points = region_constrained_starts(problem, starts, seed)
    pairs, algorithms = local_search_finals(problem, start_points, budget, seed)
    retention = region_retention(problem, pairs)
    by_alg = {
        alg: region_retention(problem, [p for p, a in zip(pairs, algorithms) if a == alg])
        for alg in sorted(set(algorithms))
    }
    finals = [problem.canonicalize(f)[0] for _, f in pairs]
    graph = build_solution_graph(problem, finals, algorithms=algorithms,
                                 intermediates=intermediates, tolerance=tolerance)
    distinct = count_distinct_solutions(graph, merge_eps)
    conn = connectivity_matrix(problem, graph, seed, **probe_kwargs) if probe else []
    return BasinReport(problem.problem_id, retention, by_alg, graph, distinct, conn)
