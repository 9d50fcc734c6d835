"""Suite manifests and problem suites.

A manifest is JSON, either a list of dataset entries or an object
``{"datasets": [...], "k_values": [...]}``. Each entry has::

    {"name": "ruspini",
     "source": "builtin:ruspini" | "relative/or/absolute/path.csv",
     "preprocessing": {"pca_dim": 2, "normalize": true}}

Relative paths resolve against the manifest's directory.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import builtin
from .data import Dataset, DatasetError, load_dataset, min_max_normalize, pca_reduce
from .problem import ClusteringProblem

DEFAULT_K_VALUES = (2, 3, 5, 10)


class ManifestError(ValueError):
    pass


@dataclass
class ProblemSuite:
    """Ordered problems plus an optional baseline table keyed by problem id."""

    problems: list[ClusteringProblem]
    datasets: list[str] = field(default_factory=list)
    baselines: dict[str, dict] = field(default_factory=dict)

    def __len__(self):
        return len(self.problems)

    def __iter__(self):
        return iter(self.problems)

    def __getitem__(self, problem_id: str) -> ClusteringProblem:
        for p in self.problems:
            if p.problem_id == problem_id:
                return p
        raise KeyError(f"no problem {problem_id!r} in suite")

    @property
    def ids(self) -> list[str]:
        return [p.problem_id for p in self.problems]


def default_manifest() -> dict:
    return {
        "datasets": [
            {"name": name, "source": f"builtin:{name}",
             "preprocessing": {"pca_dim": 2, "normalize": True}}
            for name in builtin.DEFAULT_ORDER
        ],
        "k_values": list(DEFAULT_K_VALUES),
    }


def read_manifest(path) -> dict:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ManifestError(f"manifest not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from None
    if isinstance(raw, list):
        raw = {"datasets": raw}
    if not isinstance(raw, dict) or not isinstance(raw.get("datasets", []), list):
        raise ManifestError(f"manifest {path} must be a list or an object with a 'datasets' list")
    raw.setdefault("datasets", [])
    raw["base_dir"] = str(path.parent)
    return raw


def prepare_dataset(entry: dict, base_dir=".") -> Dataset:
    """Load one manifest entry and apply its preprocessing."""
    name = entry.get("name")
    source = entry.get("source")
    if not name or not source:
        raise ManifestError(f"manifest entry needs 'name' and 'source': {entry}")
    try:
        if source.startswith("builtin:"):
            data = builtin.load_builtin(source.split(":", 1)[1])
        else:
            path = Path(source)
            if not path.is_absolute():
                path = Path(base_dir) / path
            data = load_dataset(path, name=name)
    except (KeyError, DatasetError) as exc:
        raise ManifestError(f"dataset {name!r}: {exc}") from None
    data = Dataset(data.points, name=name)
    prep = entry.get("preprocessing", {})
    if prep.get("pca_dim"):
        data = pca_reduce(data, int(prep["pca_dim"]))
    if prep.get("normalize"):
        data = min_max_normalize(data)
    return data


def build_suite(manifest: dict | str | Path | None = None, with_baselines: bool = True) -> ProblemSuite:
    """Instantiate problem ``F{i}_k{k}`` for every dataset ``i`` (1-based) and every k."""
    if manifest is None:
        manifest = default_manifest()
        is_default = True
    else:
        if not isinstance(manifest, dict):
            manifest = read_manifest(manifest)
        is_default = False
    k_values = [int(k) for k in manifest.get("k_values", DEFAULT_K_VALUES)]
    base_dir = manifest.get("base_dir", ".")
    problems, names = [], []
    for i, entry in enumerate(manifest["datasets"], start=1):
        data = prepare_dataset(entry, base_dir)
        names.append(data.name)
        for k in k_values:
            problems.append(ClusteringProblem(data, k, problem_id=f"F{i}_k{k}"))
    suite = ProblemSuite(problems, names)
    if is_default and with_baselines:
        suite.baselines = load_baseline_table(default_baseline_path())
    return suite


def default_baseline_path() -> Path:
    return Path(str(resources.files("clusterbench") / "datasets" / "baselines.csv"))


def load_baseline_table(path) -> dict[str, dict]:
    """Read a baseline CSV (problem_id, repetitions, best, mean, std, seed)."""
    path = Path(path)
    if not path.is_file():
        return {}
    table = {}
    with path.open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            table[row["problem_id"]] = {
                "problem_id": row["problem_id"],
                "repetitions": int(row["repetitions"]),
                "best": float(row["best"]),
                "mean": float(row["mean"]),
                "std": float(row["std"]),
                "seed": int(row["seed"]),
            }
    return table
