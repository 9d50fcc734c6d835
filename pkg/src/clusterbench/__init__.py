"""Clustering problems as continuous black-box optimization benchmarks.

Decision vectors concatenate ``k`` center coordinates in ``d`` dimensions;
the default objective is the mean squared distance from each point to its
nearest center.
"""
from .data import Dataset, load_dataset, min_max_normalize, pca_reduce, generate_synthetic
from .problem import BudgetExhausted, ClusteringProblem, MeteredProblem
from .transform import TransformedProblem, stick_breaking_transform, transformed_problem
from .suite import ProblemSuite, build_suite
from .baseline import kmeans_pp_init, lloyd, run_baseline, collect_baselines
from .optimizers import OptimizerConfig, enumerate_configs, run_es, run_one_plus_one, run_simplex_local
from .runlog import RunLog

__version__ = "0.1.0"

__all__ = [
    "Dataset", "load_dataset", "min_max_normalize", "pca_reduce", "generate_synthetic",
    "BudgetExhausted", "ClusteringProblem", "MeteredProblem",
    "TransformedProblem", "stick_breaking_transform", "transformed_problem",
    "ProblemSuite", "build_suite",
    "kmeans_pp_init", "lloyd", "run_baseline", "collect_baselines",
    "OptimizerConfig", "enumerate_configs", "run_es", "run_one_plus_one", "run_simplex_local",
    "RunLog",
]
