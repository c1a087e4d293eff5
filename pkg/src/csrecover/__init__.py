"""Sparse recovery of multitone signals from random time samples.

Greedy pursuits (OMP, OLS, gradient pursuit), the adaptive gradient
missing-sample method, basis pursuit via an interior-point LP, and
iterative hard thresholding, plus a seeded benchmark over partial-DFT
sensing.
"""
from .benchmark import (
    BenchmarkRecord,
    ExperimentConfig,
    emit_csv,
    emit_plot_script,
    mse,
    read_csv,
    run_sweep,
    support_match,
)
from .convex import GradientParams, adaptive_gradient, basis_pursuit_eq, concentration_measure
from .greedy import RecoveryResult, StoppingRule, gradient_pursuit, ols, omp, select_atom
from .linalg import least_squares_solve, spectral_norm_sq_estimate
from .lp import LpSolution, LpSolverParams, lp_primal_dual_solve
from .sensing import (
    Dictionary,
    Measurements,
    SampleMask,
    build_dictionary,
    draw_mask,
    mutual_coherence,
    sample,
)
from .signals import BENCHMARK_SIGNAL, MultitoneSpec, dft, generate_multitone, idft, support_of
from .thresholding import IhtParams, LambdaThreshold, TopK, hard_threshold, iht, top_k_threshold

__version__ = "0.1.0"

__all__ = [
    "BenchmarkRecord", "ExperimentConfig", "emit_csv", "emit_plot_script", "mse", "read_csv",
    "run_sweep", "support_match",
    "GradientParams", "adaptive_gradient", "basis_pursuit_eq", "concentration_measure",
    "RecoveryResult", "StoppingRule", "gradient_pursuit", "ols", "omp", "select_atom",
    "least_squares_solve", "spectral_norm_sq_estimate",
    "LpSolution", "LpSolverParams", "lp_primal_dual_solve",
    "Dictionary", "Measurements", "SampleMask", "build_dictionary", "draw_mask", "mutual_coherence", "sample",
    "BENCHMARK_SIGNAL", "MultitoneSpec", "dft", "generate_multitone", "idft", "support_of",
    "IhtParams", "LambdaThreshold", "TopK", "hard_threshold", "iht", "top_k_threshold",
]
