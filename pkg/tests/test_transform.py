import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from clusterbench.data import Dataset
from clusterbench.problem import ClusteringProblem
from clusterbench.transform import beta1_ppf, stick_breaking_transform, transformed_problem


def test_two_step_example():
    np.testing.assert_allclose(stick_breaking_transform([0.75, 0.5]), [0.5, 0.75], atol=1e-15)


def test_zeros_and_ones():
    np.testing.assert_array_equal(stick_breaking_transform(np.zeros(5)), np.zeros(5))
    np.testing.assert_array_equal(stick_breaking_transform([1.0, 0.2, 0.7]), [1.0, 1.0, 1.0])


def test_out_of_box_rejected():
    with pytest.raises(ValueError):
        stick_breaking_transform([1.5, 0.2])
    with pytest.raises(ValueError):
        stick_breaking_transform([-0.1, 0.2])


def test_beta_ppf_is_inverse_cdf():
    u = np.linspace(0, 1, 11)
    for b in (1, 2, 5):
        x = beta1_ppf(u, b)
        np.testing.assert_allclose(1 - (1 - x) ** b, u, atol=1e-12)


def test_uniform_input_gives_order_statistics():
    # Uniform inputs should give the law of sorted uniforms, whose means are i/(k+1).
    x = np.random.default_rng(0).uniform(size=(200_000, 3))
    means = stick_breaking_transform(x).mean(axis=0)
    np.testing.assert_allclose(means, [0.25, 0.5, 0.75], atol=3e-3)


@settings(max_examples=200)
@given(arrays(np.float64, st.integers(1, 10), elements=st.floats(0, 1)))
def test_output_sorted_in_box(x):
    t = stick_breaking_transform(x)
    assert np.all(np.diff(t) >= 0)
    assert t.min() >= 0 and t.max() <= 1


@settings(max_examples=200)
@given(arrays(np.float64, 4, elements=st.floats(0, 1)), st.integers(0, 3), st.floats(0, 1))
def test_coordinatewise_monotone(x, i, v):
    lo, hi = x.copy(), x.copy()
    lo[i], hi[i] = min(x[i], v), max(x[i], v)
    assert np.all(stick_breaking_transform(lo) <= stick_breaking_transform(hi) + 1e-15)


def test_transformed_view_lands_in_identity_region():
    rng = np.random.default_rng(4)
    base = ClusteringProblem(Dataset(rng.uniform(size=(20, 2))), 3)
    view = transformed_problem(base)
    for x in rng.uniform(size=(200, view.dimension)):
        assert base.region_id(view.to_base(x)) == (0, 1, 2)
        assert view.evaluate(x) == base.evaluate(view.to_base(x))


def test_k1_transform_is_identity():
    base = ClusteringProblem(Dataset([[0.1, 0.2], [0.4, 0.9]]), 1)
    x = np.array([0.3, 0.6])
    assert transformed_problem(base).evaluate(x) == base.evaluate(x)


def test_grid_minimum_matches_original():
    base = ClusteringProblem(Dataset([[0.2], [0.7]]), 2)
    g = np.linspace(0, 1, 200)
    grid = np.stack(np.meshgrid(g, g, indexing="ij"), -1).reshape(-1, 2)
    orig = base.evaluate_batch(grid).min()
    trans = transformed_problem(base).evaluate_batch(grid).min()
    assert abs(orig - trans) < 1e-6
