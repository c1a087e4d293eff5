"""Convex-family recovery: the adaptive gradient missing-sample method and
equality-constrained l1 minimization (basis pursuit) as a linear program."""
import time
from dataclasses import dataclass

import numba
import numpy as np

from .errors import DimensionMismatch, EmptyMeasurements, NonFinite
from .greedy import RecoveryResult
from .lp import MAX_ITERATIONS, LpSolverParams, lp_primal_dual_solve
from .signals import dft


def concentration_measure(u):
    """Sparsity measure sum_k |u_k| (the l1 norm of the spectrum)."""
    return float(np.sum(np.abs(np.asarray(u))))


@dataclass(frozen=True)
class GradientParams:
    """Settings for :func:`adaptive_gradient`.

    ``delta_init=None`` means max|y|; ``delta_min=None`` means
    ``delta_init * 1e-5``. The step applied to a missing sample is
    ``step * (eta(+delta) - eta(-delta)) / sqrt(N)``, which is at most
    ``2 * step * delta`` in magnitude, so the correction shrinks with delta.
    Delta is divided by ``shrink_factor`` once the corrections of
    ``oscillation_window`` consecutive sweeps point in opposing directions
    (cosine between successive corrections below ``-oscillation_cos``).
    """

    delta_init: float = None
    delta_min: float = None
    shrink_factor: float = 10 ** 0.5
    inner_max_iterations: int = 200
    oscillation_window: int = 2
    oscillation_cos: float = 0.9
    step: float = 1.0

    def __post_init__(self):
        if self.shrink_factor <= 1:
            raise ValueError("shrink_factor must exceed 1")
        if self.delta_min is not None and self.delta_min <= 0:
            raise ValueError("delta_min must be positive")
        if (self.delta_init is not None and self.delta_min is not None
                and self.delta_init <= self.delta_min):
            raise ValueError("delta_init must exceed delta_min")
        if self.oscillation_window < 2:
            raise ValueError("oscillation_window must be >= 2")
        if self.inner_max_iterations < 1:
            raise ValueError("inner_max_iterations must be >= 1")


@numba.njit(cache=True, fastmath=True)
def _l1_differences(ur, ui, er, ei, delta, out_re, out_im):
    """eta(x + delta e_i) - eta(x - delta e_i), for the real and imaginary
    parts of every missing sample i, without recomputing the DFT.

    Perturbing sample i by z moves bin k by z * E[i, k], with
    E[i, k] = exp(-j 2 pi k t_i / N) / sqrt(N), so
    |U_k + z E_ik|^2 = |U_k|^2 + |z|^2 / N + 2 Re(conj(U_k) z E_ik).
    """
    m, n = er.shape
    dd = delta * delta / n
    t = 2.0 * delta
    for i in range(m):
        sr = 0.0
        si = 0.0
        for k in range(n):
            a = ur[k] * ur[k] + ui[k] * ui[k] + dd
            # conj(U_k) * E_ik, real and imaginary parts
            pr = ur[k] * er[i, k] + ui[k] * ei[i, k]
            pim = ur[k] * ei[i, k] - ui[k] * er[i, k]
            sr += np.sqrt(a + t * pr) - np.sqrt(abs(a - t * pr))
            # z = +/- j delta turns Re(conj(U) z E) into -/+ delta Im(conj(U) E)
            si += np.sqrt(abs(a - t * pim)) - np.sqrt(a + t * pim)
        out_re[i] = sr
        out_im[i] = si


def l1_differences(x, missing, delta):
    """Complex vector of eta(x + delta e_i) - eta(x - delta e_i) (real part)
    and eta(x + j delta e_i) - eta(x - j delta e_i) (imaginary part) over the
    indices in ``missing``; eta is the l1 norm of the unitary DFT."""
    n = x.shape[0]
    missing = np.asarray(missing)
    E = _perturbation_rows(n, missing)
    return _apply_kernel(dft(x), E, delta)


def _perturbation_rows(n, missing):
    return np.exp(-2j * np.pi * (np.outer(missing, np.arange(n)) % n) / n) / np.sqrt(n)


def _apply_kernel(U, E, delta, Er=None, Ei=None):
    if Er is None:
        Er, Ei = np.ascontiguousarray(E.real), np.ascontiguousarray(E.imag)
    out_re = np.empty(Er.shape[0])
    out_im = np.empty(Er.shape[0])
    _l1_differences(np.ascontiguousarray(U.real), np.ascontiguousarray(U.imag),
                    Er, Ei, float(delta), out_re, out_im)
    return out_re + 1j * out_im


def adaptive_gradient(y, n, params=GradientParams(), history=None):
    """Recover missing time samples by descending the spectral l1 norm.

    Measured samples stay fixed; missing ones start at zero. Each sweep
    estimates, for every missing sample, the change in concentration when
    its real and imaginary parts move by +/-delta and steps against it
    (all samples updated together after the sweep). Delta shrinks when
    consecutive sweeps oscillate; the run ends once delta < delta_min.
    A delta level that ends with a larger concentration than the previous
    level is rolled back.

    If ``history`` is a list, one ``(delta, eta, sweeps)`` tuple is appended
    per delta level.
    """
    mask = y.mask
    if mask.n != n:
        raise DimensionMismatch(f"mask is over {mask.n} samples, N={n}")
    vals = y.values
    if vals.size == 0:
        raise EmptyMeasurements("no measurements")
    if not np.all(np.isfinite(vals)):
        raise NonFinite("measurements contain NaN or Inf")
    known = mask.as_array()
    x = np.zeros(n, dtype=complex)
    x[known] = vals
    missing = np.setdiff1d(np.arange(n), known)
    if missing.size == 0:
        return x
    delta = params.delta_init if params.delta_init is not None else float(np.max(np.abs(vals)))
    if delta == 0.0:
        return x
    delta_min = params.delta_min if params.delta_min is not None else delta * 1e-5
    E = _perturbation_rows(n, missing)
    Er, Ei = np.ascontiguousarray(E.real), np.ascontiguousarray(E.imag)
    scale = params.step / np.sqrt(n)

    level_eta = concentration_measure(dft(x))
    level_x = x.copy()
    while delta >= delta_min:
        prev = None
        flips = 0
        sweeps = 0
        for sweeps in range(1, params.inner_max_iterations + 1):
            g = scale * _apply_kernel(dft(x), E, delta, Er, Ei)
            x[missing] -= g
            if prev is not None:
                denom = np.linalg.norm(prev) * np.linalg.norm(g)
                cos = np.vdot(prev, g).real / denom if denom > 0 else 1.0
                flips = flips + 1 if cos < -params.oscillation_cos else 0
                if flips >= params.oscillation_window - 1:
                    break
            prev = g
            if not np.any(g):
                break
        eta = concentration_measure(dft(x))
        if eta > level_eta:
            x[:] = level_x
            eta = level_eta
        else:
            level_eta = eta
            level_x = x.copy()
        if history is not None:
            history.append((delta, eta, sweeps))
        delta /= params.shrink_factor
    return x


def basis_pursuit_eq(d, y, params=LpSolverParams()):
    """min sum|u_k| subject to A u = y, for real coefficients u.

    The split u = p - q (p, q >= 0) with the real and imaginary parts of
    the constraints stacked gives the standard-form LP
    min 1^T [p; q] s.t. [Re A, -Re A; Im A, -Im A] [p; q] = [Re y; Im y].
    Only real-amplitude spectra are representable; complex amplitudes
    cannot be detected from underdetermined data and yield a wrong answer.
    """
    t0 = time.perf_counter()
    vals = y.values if hasattr(y, "values") else np.asarray(y, dtype=complex)
    if vals.size == 0:
        raise EmptyMeasurements("no measurements")
    B = d.unitary_matrix()
    if B.shape[0] != vals.shape[0]:
        raise DimensionMismatch(f"dictionary has {B.shape[0]} rows, {vals.shape[0]} measurements")
    N = B.shape[1]
    A_eq = np.block([[B.real, -B.real], [B.imag, -B.imag]])
    b_eq = np.concatenate([vals.real, vals.imag])
    c = np.ones(2 * N)
    sol = lp_primal_dual_solve(c, A_eq, b_eq, params)
    u = sol.primal[:N] - sol.primal[N:]
    peak = np.max(np.abs(u)) if u.size else 0.0
    support = tuple(int(i) for i in np.flatnonzero(np.abs(u) > 1e-4 * peak)) if peak > 0 else ()
    return RecoveryResult(
        coeffs=u.astype(complex),
        support=support,
        residual_norm=float(np.linalg.norm(B @ u - vals)),
        iterations=sol.iterations,
        elapsed=time.perf_counter() - t0,
        status="ok" if sol.status != MAX_ITERATIONS else MAX_ITERATIONS,
        info={"gap": sol.gap, "objective": sol.objective, "lp": sol},
    )
