"""Greedy pursuits: OMP, OLS and gradient pursuit.

All three work on a (normally column-normalized) :class:`Dictionary` and
report coefficients on the unitary-DFT scale.
"""
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import AllForbidden, DimensionMismatch, EmptyMeasurements, RankDeficient
from .linalg import HouseholderQR, least_squares_solve

# refinement stops after this many steps without a new best residual
STALL_STEPS = 3


@dataclass(frozen=True)
class StoppingRule:
    """When a pursuit stops adding atoms.

    ``max_atoms`` caps the support size, ``residual_tol`` is an absolute
    bound on ||r||_2. At least one of the two must be set.
    """

    max_atoms: int = None
    residual_tol: float = None
    max_iterations: int = 1000

    def __post_init__(self):
        if self.max_atoms is None and self.residual_tol is None:
            raise ValueError("set max_atoms, residual_tol, or both")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.max_atoms is not None and self.max_atoms < 0:
            raise ValueError("max_atoms must be >= 0")

    @classmethod
    def for_sparsity(cls, k, y, rel_tol=1e-6, max_iterations=1000):
        """Benchmark default: stop at ``k`` atoms or once ||r|| <= rel_tol ||y||."""
        return cls(k, rel_tol * float(np.linalg.norm(_values(y))), max_iterations)


@dataclass
class RecoveryResult:
    coeffs: np.ndarray = field(repr=False)
    support: tuple
    residual_norm: float
    iterations: int
    elapsed: float = 0.0
    status: str = "ok"
    path: tuple = ()  # atoms in the order they were selected
    info: dict = field(default_factory=dict, repr=False)


def _values(y):
    return y.values if hasattr(y, "values") else np.asarray(y, dtype=complex)


def _check(d, y):
    y = _values(y)
    if y.size == 0:
        raise EmptyMeasurements("no measurements")
    if d.matrix.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"dictionary has {d.matrix.shape[0]} rows, {y.shape[0]} measurements")
    return y


def _finish(d, support, coeffs_on_support, residual, iterations, t0, status="ok", path=()):
    w = np.zeros(d.matrix.shape[1], dtype=complex)
    idx = list(support)
    w[idx] = coeffs_on_support
    u = d.to_unitary(w)
    return RecoveryResult(
        coeffs=u,
        support=tuple(sorted(int(i) for i in idx)),
        residual_norm=float(np.linalg.norm(residual)),
        iterations=iterations,
        elapsed=time.perf_counter() - t0,
        status=status,
        path=tuple(int(i) for i in path),
    )


def select_atom(g, forbidden=()):
    """Index of the largest |g_i| outside ``forbidden``; ties go to the lowest index."""
    mag = np.abs(np.asarray(g))
    allowed = np.ones(mag.shape[0], dtype=bool)
    allowed[list(forbidden)] = False
    if not allowed.any():
        raise AllForbidden("every index is excluded")
    mag = np.where(allowed, mag, -np.inf)
    return int(np.argmax(mag))  # argmax returns the first maximum


def _keep_going(stop, n_atoms, r, iteration):
    if stop.residual_tol is not None and np.linalg.norm(r) <= stop.residual_tol:
        return False
    if stop.max_atoms is not None and n_atoms >= stop.max_atoms:
        return False
    return iteration < stop.max_iterations


def omp(d, y, stop):
    """Orthogonal matching pursuit.

    Each iteration correlates the residual with every atom, adds the best
    one, and refits all coefficients on the support by least squares.
    """
    t0 = time.perf_counter()
    y = _check(d, y)
    A = d.matrix
    r = y.copy()
    support = []
    coef = np.zeros(0, dtype=complex)
    n = 0
    while np.any(r) and n < A.shape[1] and _keep_going(stop, len(support), r, n):
        g = A.conj().T @ r
        support.append(select_atom(g, support))
        coef = least_squares_solve(A[:, support], y)
        r = y - A[:, support] @ coef
        n += 1
    return _finish(d, support, coef, r, n, t0, path=support)


def ols(d, y, stop):
    """Orthogonal least squares.

    Picks the atom whose inclusion gives the smallest least-squares residual.
    For a candidate a_i the new residual energy is
    ||r||^2 - |a_i^H r|^2 / ||P a_i||^2, where P projects onto the
    complement of the current span; ||P a_i||^2 is downdated once per
    iteration from the newest orthonormal basis vector, and the QR factor is
    extended by one column instead of being rebuilt.
    """
    t0 = time.perf_counter()
    y = _check(d, y)
    A = d.matrix
    M, N = A.shape
    r = y.copy()
    support = []
    coef = np.zeros(0, dtype=complex)
    proj_sq = np.sum(np.abs(A) ** 2, axis=0)
    fro = float(np.linalg.norm(A))
    qr = HouseholderQR(M, scale=fro)
    n = 0
    while np.any(r) and n < min(M, N) and _keep_going(stop, len(support), r, n):
        i = _ols_pick(A, r, proj_sq, support, fro)
        qr.append(A[:, i])
        support.append(i)
        q = qr.q_column(len(support) - 1)
        proj_sq = np.maximum(proj_sq - np.abs(q.conj() @ A) ** 2, 0.0)
        coef = qr.solve(y)
        r = y - A[:, support] @ coef
        n += 1
    return _finish(d, support, coef, r, n, t0, path=support)


def _ols_pick(A, r, proj_sq, support, fro):
    """Candidate minimizing the post-refit residual norm (ties -> lowest index)."""
    corr = np.abs(A.conj().T @ r) ** 2
    # atoms already (numerically) in the span cannot reduce the residual
    usable = proj_sq > (1e-12 * fro) ** 2
    usable[support] = False
    if not usable.any():
        raise RankDeficient("no candidate atom outside the current span")
    gain = np.where(usable, corr / np.where(usable, proj_sq, 1.0), -np.inf)
    rr = float(np.vdot(r, r).real)
    resid_sq = np.where(usable, rr - gain, np.inf)
    return int(np.argmin(resid_sq))


def gradient_pursuit(d, y, stop, forced_path=None):
    """Gradient pursuit: OMP selection, but a single exact line search along
    the support-restricted gradient instead of a full least-squares refit.

    Support growth ends when ``stop.max_atoms`` is reached or the residual
    drops to ``stop.residual_tol``. Any iterations left in
    ``stop.max_iterations`` are spent on further gradient steps over the
    fixed support until the gradient vanishes to working precision.

    ``forced_path`` overrides selection with a given atom sequence (used to
    compare against OMP along an identical support path).
    """
    t0 = time.perf_counter()
    y = _check(d, y)
    A = d.matrix
    N = A.shape[1]
    r = y.copy()
    support = []
    coef = np.zeros(0, dtype=complex)
    status = "ok"
    n = 0
    growing = True
    best = None  # (||r||, coef, r) over the refinement phase
    stale = 0
    while np.any(r) and n < stop.max_iterations:
        if growing:
            growing = _keep_going(stop, len(support), r, n) and len(support) < N
            if forced_path is not None:
                growing = growing and len(support) < len(forced_path)
        if growing:
            g = A.conj().T @ r
            i = forced_path[len(support)] if forced_path is not None else select_atom(g, support)
            support.append(i)
            coef = np.append(coef, 0.0)
        elif not support:
            break
        As = A[:, support]
        if not growing:
            # recursive residual updates drift; refine against the true residual
            r = y - As @ coef
            rn = float(np.linalg.norm(r))
            if best is None or rn < best[0]:
                best, stale = (rn, coef, r), 0
            else:
                stale += 1
                if stale >= STALL_STEPS:
                    break
        direction = As.conj().T @ r
        c = As @ direction
        cc = float(np.vdot(c, c).real)
        if cc == 0.0:
            if not growing:
                break
            status = "ZeroDirection"
            break
        step = np.vdot(c, r) / cc
        coef = coef + step * direction
        r = r - step * c
        n += 1
    if best is not None:
        r_final = y - A[:, support] @ coef
        if np.linalg.norm(r_final) > best[0]:
            coef, r_final = best[1], best[2]
        r = r_final
    return _finish(d, support, coef, r, n, t0, status=status, path=support)
