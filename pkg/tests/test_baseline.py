import numpy as np
import pytest

from clusterbench.baseline import (collect_baselines, kmeans_pp_init, lloyd, lloyd_iterations,
                                   run_baseline, write_baseline_csv)
from clusterbench.data import Dataset
from clusterbench.problem import ClusteringProblem
from clusterbench.suite import build_suite, load_baseline_table

from .conftest import centroid_problem


def test_kmeanspp_k1_picks_a_data_point():
    p = centroid_problem()
    for seed in range(10):
        y = kmeans_pp_init(p, seed)
        assert any(np.array_equal(y, row) for row in p.data.points)


def test_kmeanspp_second_pick_is_other_point(line_problem):
    for seed in range(50):
        assert sorted(kmeans_pp_init(line_problem, seed).tolist()) == [0.0, 1.0]


def test_kmeanspp_deterministic(blob_problem):
    assert np.array_equal(kmeans_pp_init(blob_problem, 5), kmeans_pp_init(blob_problem, 5))


def test_kmeanspp_more_centers_than_points():
    p = ClusteringProblem(Dataset([[0.0], [1.0]]), 3)
    assert kmeans_pp_init(p, 0).shape == (3,)


def test_lloyd_fixed_point_at_centroid():
    p = centroid_problem()
    c = p.data.points.mean(axis=0)
    steps = list(lloyd_iterations(p, c))
    assert len(steps) <= 2
    y, value = lloyd(p, c)
    assert value == pytest.approx(((p.data.points - c) ** 2).sum(axis=1).mean(), rel=1e-14)


def test_lloyd_hand_example():
    p = ClusteringProblem(Dataset([[0.0], [0.1], [0.9], [1.0]]), 2)
    y, value = lloyd(p, [0.2, 0.8])
    np.testing.assert_allclose(y, [0.05, 0.95], atol=1e-15)
    assert value == pytest.approx(0.0025, abs=1e-15)


def test_lloyd_monotone(blob_problem):
    rng = np.random.default_rng(0)
    for _ in range(20):
        values = [v for _, v in lloyd_iterations(blob_problem, rng.uniform(size=blob_problem.dimension))]
        assert all(b <= a for a, b in zip(values, values[1:]))


def test_lloyd_reseeds_empty_cluster():
    p = ClusteringProblem(Dataset([[0.0], [0.1], [0.9], [1.0]]), 2)
    # The second center attracts nothing and must be moved onto the data.
    y, value = lloyd(p, [0.5, 20.0])
    assert value < 0.01


def test_one_rep_best_equals_mean(blob_problem):
    row = run_baseline(blob_problem, 1, seed=3).row()
    assert row["best"] == row["mean"]


def test_deterministic_tables(tmp_path):
    suite = build_suite(with_baselines=False)
    small = [suite["F8_k2"], suite["F1_k3"]]
    a, b = collect_baselines(small, 3, 11), collect_baselines(small, 3, 11)
    write_baseline_csv(a, tmp_path / "a.csv")
    write_baseline_csv(b, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    table = load_baseline_table(tmp_path / "a.csv")
    assert table["F8_k2"]["best"] == a[0].best


def test_separated_blobs_found(blob_problem):
    res = run_baseline(blob_problem, 5)
    centers = np.sort(blob_problem.centers(res.best_vector)[:, 0])
    np.testing.assert_allclose(centers, [0.2, 0.8], atol=0.03)


def test_repetitions_validated(blob_problem):
    with pytest.raises(ValueError):
        run_baseline(blob_problem, 0)
