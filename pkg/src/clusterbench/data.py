"""Point datasets: CSV ingestion, synthetic mixtures, PCA and min-max scaling."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


class DatasetError(ValueError):
    """Raised for unreadable or malformed datasets."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ``n x d`` point cloud.

    Parameters
    ----------
    points : array_like
        Coordinates, one point per row. Stored as a read-only float64 copy.
    name : str
        Identifier used in problem tables and logs.
    normalized : bool
        True once the points have been min-max scaled to the unit box.
    """

    points: np.ndarray
    name: str = "dataset"
    normalized: bool = False

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DatasetError(f"points must be a non-empty 2-D array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DatasetError("points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __repr__(self):
        return f"Dataset(name={self.name!r}, n={self.n}, d={self.d}, normalized={self.normalized})"


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_dataset(path, name: str | None = None) -> Dataset:
    """Read a comma-separated file with one point per row.

    A first row whose fields are all non-numeric is taken as a header.
    Errors name the 1-based line number of the offending row.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"dataset file not found: {path}")
    rows = []
    width = None
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            fields = [f.strip() for f in row]
            if not fields or all(f == "" for f in fields):
                continue
            if lineno == 1 and not any(_is_number(f) for f in fields):
                continue
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise DatasetError(
                    f"{path}: row {lineno} has {len(fields)} fields, expected {width}"
                )
            try:
                rows.append([float(f) for f in fields])
            except ValueError:
                bad = next(f for f in fields if not _is_number(f))
                raise DatasetError(f"{path}: row {lineno} has non-numeric field {bad!r}") from None
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    return Dataset(np.array(rows), name=name or path.stem, normalized=False)


def save_dataset(data: Dataset, path, header: Sequence[str] | None = None) -> None:
    """Write points using shortest round-trip float formatting."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header is not None:
            writer.writerow(header)
        for row in data.points:
            writer.writerow([repr(float(v)) for v in row])


# Eigenvalues below this fraction of the largest are treated as exactly zero.
_RANK_RTOL = 1e-12


def pca_reduce(data: Dataset, target_dim: int) -> Dataset:
    """Project mean-centered points onto the leading principal components.

    Components come from an eigendecomposition of the sample covariance
    (divisor ``n - 1``), ordered by decreasing variance. Each component's
    entry of largest magnitude is made positive. Components whose variance is
    numerically zero project to exactly 0, so a later min-max step maps them
    to the constant 0.5.
    """
    if target_dim < 1 or target_dim > data.d:
        raise DatasetError(f"target_dim must be in [1, {data.d}], got {target_dim}")
    if data.n < 2:
        raise DatasetError("PCA needs at least two points")
    centered = data.points - data.points.mean(axis=0)
    if not np.any(centered):
        raise DatasetError("all points are identical; no principal direction exists")
    cov = centered.T @ centered / (data.n - 1)
    eigval, eigvec = np.linalg.eigh(cov)
    order = np.argsort(-eigval, kind="stable")
    eigval, eigvec = eigval[order], eigvec[:, order]
    for j in range(eigvec.shape[1]):
        pivot = np.argmax(np.abs(eigvec[:, j]))
        if eigvec[pivot, j] < 0:
            eigvec[:, j] = -eigvec[:, j]
    projected = centered @ eigvec[:, :target_dim]
    degenerate = eigval[:target_dim] <= _RANK_RTOL * eigval[0]
    projected[:, degenerate] = 0.0
    return Dataset(projected, name=data.name, normalized=False)


def min_max_normalize(data: Dataset) -> Dataset:
    """Affinely map each dimension onto [0, 1]; constant dimensions go to 0.5."""
    lo = data.points.min(axis=0)
    hi = data.points.max(axis=0)
    span = hi - lo
    constant = span == 0
    scaled = (data.points - lo) / np.where(constant, 1.0, span)
    scaled[:, constant] = 0.5
    return Dataset(scaled, name=data.name, normalized=True)


@dataclass(frozen=True)
class Component:
    """One mixture component.

    ``kind`` is ``"gaussian"`` (``center`` plus isotropic or per-axis
    ``scale`` as standard deviation) or ``"uniform"`` (box from ``center -
    scale`` to ``center + scale``).
    """

    kind: str
    center: tuple
    scale: float | tuple
    weight: float


@dataclass(frozen=True)
class MixtureSpec:
    n_points: int
    components: tuple = field(default_factory=tuple)
    name: str = "synthetic"

    def with_outliers(self, weight: float, scale: float, center=None) -> "MixtureSpec":
        """Add a wide low-weight Gaussian, rescaling the other weights to keep a total of 1."""
        if not 0 < weight < 1:
            raise DatasetError("outlier weight must be in (0, 1)")
        dim = len(self.components[0].center)
        center = tuple(center) if center is not None else tuple(
            np.mean([c.center for c in self.components], axis=0).tolist()
        )
        rescaled = tuple(
            Component(c.kind, c.center, c.scale, c.weight * (1 - weight)) for c in self.components
        )
        assert len(center) == dim
        return MixtureSpec(
            self.n_points, rescaled + (Component("gaussian", center, scale, weight),), self.name
        )


def generate_synthetic(spec: MixtureSpec, seed: int, return_labels: bool = False):
    """Draw ``spec.n_points`` points from a Gaussian/uniform mixture.

    Each point independently picks a component according to the weights.
    Output is fully determined by ``seed``.
    """
    if spec.n_points < 1:
        raise DatasetError("n_points must be >= 1")
    if not spec.components:
        raise DatasetError("mixture needs at least one component")
    weights = np.array([c.weight for c in spec.components], dtype=float)
    if np.any(weights < 0) or not np.isclose(weights.sum(), 1.0, rtol=0, atol=1e-9):
        raise DatasetError(f"component weights must be non-negative and sum to 1, got {weights.tolist()}")
    dims = {len(c.center) for c in spec.components}
    if len(dims) != 1:
        raise DatasetError("all components must share one dimensionality")
    dim = dims.pop()
    rng = np.random.default_rng(seed)
    labels = rng.choice(len(weights), size=spec.n_points, p=weights / weights.sum())
    points = np.empty((spec.n_points, dim))
    for j, comp in enumerate(spec.components):
        scale = np.broadcast_to(np.asarray(comp.scale, dtype=float), (dim,))
        if np.any(scale <= 0):
            raise DatasetError(f"component {j} has non-positive scale")
        mask = labels == j
        count = int(mask.sum())
        center = np.asarray(comp.center, dtype=float)
        if comp.kind == "gaussian":
            points[mask] = center + scale * rng.standard_normal((count, dim))
        elif comp.kind == "uniform":
            points[mask] = rng.uniform(center - scale, center + scale, size=(count, dim))
        else:
            raise DatasetError(f"unknown component kind {comp.kind!r}")
    data = Dataset(points, name=spec.name)
    if return_labels:
        return data, labels
    return data
