import numpy as np
import pytest

from clusterbench.data import Dataset
from clusterbench.problem import ClusteringProblem
from clusterbench.suite import build_suite


@pytest.fixture(scope="session")
def suite():
    return build_suite()


@pytest.fixture
def line_problem():
    """1-D data {0, 1} with two centers."""
    return ClusteringProblem(Dataset([[0.0], [1.0]], name="two"), 2)


@pytest.fixture
def blob_problem():
    rng = np.random.default_rng(3)
    pts = np.vstack([rng.normal((0.2, 0.2), 0.05, (30, 2)), rng.normal((0.8, 0.7), 0.05, (30, 2))])
    return ClusteringProblem(Dataset(pts, name="blobs"), 2, problem_id="blobs_k2")


def centroid_problem(n=10, d=2, seed=0):
    pts = np.random.default_rng(seed).uniform(size=(n, d))
    return ClusteringProblem(Dataset(pts, name="k1"), 1, problem_id="k1")
