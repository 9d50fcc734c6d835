"""Bundled datasets for the default 10-dataset suite.

Slot 8 holds the Ruspini data (75 points, from the R ``cluster`` package). The
other nine are seeded synthetic mixtures of varying density, dimensionality
and outlier content; their CSVs are shipped in ``clusterbench/datasets`` and
can be regenerated bit-for-bit with :func:`regenerate`.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .data import Component, Dataset, MixtureSpec, generate_synthetic, load_dataset, save_dataset


def _g(center, scale, weight):
    return Component("gaussian", tuple(center), scale, weight)


def _u(center, scale, weight):
    return Component("uniform", tuple(center), scale, weight)


RECIPES: dict[str, tuple[MixtureSpec, int]] = {
    "blobs4": (MixtureSpec(120, (
        _g((0, 0), 0.6, 0.25), _g((5, 0), 0.6, 0.25), _g((0, 5), 0.6, 0.25), _g((5, 5), 0.6, 0.25),
    ), "blobs4"), 101),
    "unbalanced3": (MixtureSpec(150, (
        _g((0, 0), 1.0, 0.7), _g((6, 1), 0.5, 0.2), _g((2, 7), 0.3, 0.1),
    ), "unbalanced3").with_outliers(0.04, 6.0), 102),
    "aniso5d": (MixtureSpec(200, (
        _g((0, 0, 0, 0, 0), (2.0, 0.5, 0.5, 0.3, 0.3), 0.4),
        _g((4, 3, 1, 0, 0), (0.5, 1.5, 0.4, 0.3, 0.3), 0.35),
        _g((-3, 4, -1, 1, 0), (0.7, 0.7, 0.7, 0.3, 0.3), 0.25),
    ), "aniso5d"), 103),
    "uniform_box": (MixtureSpec(100, (_u((0, 0), 1.0, 1.0),), "uniform_box"), 104),
    "dense_sparse": (MixtureSpec(180, (
        _g((0, 0), 0.2, 0.6), _g((3, 3), 1.2, 0.3), _u((6, -2), 1.5, 0.1),
    ), "dense_sparse"), 105),
    "ten_blobs4d": (MixtureSpec(250, tuple(
        _g((3 * (i % 5), 3 * (i // 5), (i * 7) % 4, (i * 3) % 5), 0.5, 0.1) for i in range(10)
    ), "ten_blobs4d"), 106),
    "outlier_pair": (MixtureSpec(90, (
        _g((0, 0), 0.5, 0.5), _g((2, 0), 0.5, 0.5),
    ), "outlier_pair").with_outliers(0.08, 5.0), 107),
    "elongated": (MixtureSpec(160, (
        _g((0, 0, 0), (4.0, 0.4, 0.2), 0.5), _g((0, 3, 1), (4.0, 0.4, 0.2), 0.5),
    ), "elongated"), 109),
    "mixed8d": (MixtureSpec(220, tuple(
        _g(tuple(float((i * (j + 2)) % 5) for j in range(8)), 0.6, w)
        for i, w in enumerate((0.3, 0.25, 0.2, 0.15, 0.1))
    ), "mixed8d").with_outliers(0.03, 4.0), 110),
}

# Default suite order; position i (1-based) gives problem ids F{i}_k{k}.
DEFAULT_ORDER = (
    "blobs4", "unbalanced3", "aniso5d", "uniform_box", "dense_sparse",
    "ten_blobs4d", "outlier_pair", "ruspini", "elongated", "mixed8d",
)


def builtin_path(name: str) -> Path:
    if name not in DEFAULT_ORDER:
        raise KeyError(f"unknown builtin dataset {name!r}")
    return Path(str(resources.files("clusterbench") / "datasets" / f"{name}.csv"))


def load_builtin(name: str) -> Dataset:
    return load_dataset(builtin_path(name), name=name)


def regenerate(name: str) -> Dataset:
    spec, seed = RECIPES[name]
    return generate_synthetic(spec, seed)


def write_builtins(directory) -> None:
    """Rewrite the synthetic CSVs from their recipes."""
    directory = Path(directory)
    for name in RECIPES:
        data = regenerate(name)
        save_dataset(data, directory / f"{name}.csv", header=[f"x{i}" for i in range(data.d)])
