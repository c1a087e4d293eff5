"""Iterative hard thresholding, in the lambda-threshold and keep-top-K forms."""
import time
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyMeasurements, KOutOfRange
from .greedy import RecoveryResult
from .linalg import spectral_norm_sq_estimate


def hard_threshold(v, lam):
    """Zero every entry with |v_i| <= sqrt(lam); keep the rest unchanged."""
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    v = np.asarray(v)
    out = v.copy()
    out[np.abs(v) <= np.sqrt(lam)] = 0
    return out


def top_k_threshold(v, k):
    """Keep the ``k`` largest-magnitude entries; ties keep the lower index."""
    v = np.asarray(v)
    if not 1 <= k <= v.shape[0]:
        raise KOutOfRange(f"k={k} for a vector of length {v.shape[0]}")
    # stable sort on -|v| puts equal magnitudes in index order
    keep = np.argsort(-np.abs(v), kind="stable")[:k]
    out = np.zeros_like(v)
    out[keep] = v[keep]
    return out


@dataclass(frozen=True)
class LambdaThreshold:
    lam: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")


@dataclass(frozen=True)
class TopK:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise KOutOfRange("k must be >= 1")


@dataclass(frozen=True)
class IhtParams:
    """``step=None`` selects 0.99 / sigma_max(A)^2."""

    variant: object
    step: float = None
    max_iterations: int = 500
    convergence_tol: float = 1e-6

    def __post_init__(self):
        if not isinstance(self.variant, (LambdaThreshold, TopK)):
            raise TypeError("variant must be LambdaThreshold or TopK")
        if self.step is not None and self.step <= 0:
            raise ValueError("step must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


def auto_step(A):
    return 0.99 / spectral_norm_sq_estimate(A, iterations=100, seed=0)


def iht_objective(A, y, l, lam):
    """||y - A l||^2 + lam * ||l||_0."""
    r = y - A @ l
    return float(np.vdot(r, r).real) + lam * np.count_nonzero(l)


def iht(d, y, params, trace=None):
    """l <- T(l + step * A^H (y - A l)) starting from l = 0.

    With the lambda variant the threshold applied is sqrt(lam * step), so
    each iteration is a majorize-minimize step on ||y - A l||^2 + lam ||l||_0
    whenever step < 1 / sigma_max(A)^2 (with step = 1 this is exactly
    H_sqrt(lam)). Stops when ||l_new - l|| <= tol (1 + ||l||).

    ``trace``, if a list, receives the iterate after every step.
    """
    t0 = time.perf_counter()
    vals = y.values if hasattr(y, "values") else np.asarray(y, dtype=complex)
    if vals.size == 0:
        raise EmptyMeasurements("no measurements")
    A = d.matrix
    if A.shape[0] != vals.shape[0]:
        raise DimensionMismatch(f"dictionary has {A.shape[0]} rows, {vals.shape[0]} measurements")
    step = params.step if params.step is not None else auto_step(A)
    variant = params.variant
    if isinstance(variant, TopK):
        k = min(variant.k, A.shape[1])
        threshold = lambda v: top_k_threshold(v, k)
    else:
        threshold = lambda v: hard_threshold(v, variant.lam * step)
    AH = A.conj().T
    l = np.zeros(A.shape[1], dtype=complex)
    n = 0
    for n in range(1, params.max_iterations + 1):
        l_new = threshold(l + step * (AH @ (vals - A @ l)))
        moved = np.linalg.norm(l_new - l)
        lnorm = np.linalg.norm(l)
        l = l_new
        if trace is not None:
            trace.append(l.copy())
        if moved <= params.convergence_tol * (1.0 + lnorm):
            break
    r = vals - A @ l
    return RecoveryResult(
        coeffs=d.to_unitary(l),
        support=tuple(int(i) for i in np.flatnonzero(l)),
        residual_norm=float(np.linalg.norm(r)),
        iterations=n,
        elapsed=time.perf_counter() - t0,
        info={"step": step},
    )
