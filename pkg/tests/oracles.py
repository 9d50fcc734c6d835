"""Independent reference implementations used only by the tests."""
import itertools
import math


def naive_objective(points, k, y):
    """Mean over points of the squared distance to the nearest center, plain loops."""
    d = len(points[0])
    centers = [y[j * d:(j + 1) * d] for j in range(k)]
    total = 0.0
    for x in points:
        best = math.inf
        for c in centers:
            s = 0.0
            for xt, ct in zip(x, c):
                diff = xt - ct
                s += diff * diff
            if s < best:
                best = s
        total += best
    return total / len(points)


def brute_force_maximal_cliques(n, edges):
    """Every maximal clique by enumerating all vertex subsets."""
    adj = {(min(e), max(e)) for e in edges}

    def is_clique(c):
        return all((a, b) in adj for a, b in itertools.combinations(c, 2))

    cliques = [c for r in range(1, n + 1) for c in itertools.combinations(range(n), r) if is_clique(c)]
    sets = [set(c) for c in cliques]
    return sorted(c for c, s in zip(cliques, sets) if not any(s < o for o in sets))


def kendall_tau_b_counts(a, b):
    """Tau-b from explicit concordant/discordant/tie counts."""
    conc = disc = ta = tb = 0
    n0 = 0
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            n0 += 1
            da, db = a[i] - a[j], b[i] - b[j]
            if da == 0:
                ta += 1
            if db == 0:
                tb += 1
            if da * db > 0:
                conc += 1
            elif da * db < 0:
                disc += 1
    return (conc - disc) / math.sqrt((n0 - ta) * (n0 - tb))


try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

if numba is not None:
    @numba.njit(cache=False)
    def _naive_batch(points, k, ys, out):
        n, d = points.shape
        for b in range(ys.shape[0]):
            total = 0.0
            for i in range(n):
                best = math.inf
                for j in range(k):
                    s = 0.0
                    for t in range(d):
                        diff = points[i, t] - ys[b, j * d + t]
                        s += diff * diff
                    if s < best:
                        best = s
                total += best
            out[b] = total / n


def naive_objective_batch(points, k, ys):
    """Same loops as :func:`naive_objective`, compiled with numba when available."""
    import numpy as np

    points = np.ascontiguousarray(points, dtype=float)
    ys = np.ascontiguousarray(ys, dtype=float)
    out = np.empty(ys.shape[0])
    if numba is not None:
        _naive_batch(points, k, ys, out)
    else:
        pts = points.tolist()
        out[:] = [naive_objective(pts, k, y) for y in ys.tolist()]
    return out
