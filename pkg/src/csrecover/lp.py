"""Primal-dual interior-point solver for standard-form linear programs.

    minimize c^T x  subject to  A x = b,  x >= 0

Mehrotra predictor-corrector with the normal equations (A D A^T) solved by
Cholesky at every step.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DimensionMismatch, Infeasible, Unbounded

OPTIMAL = "Optimal"
MAX_ITERATIONS = "MaxIterations"
INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class LpSolverParams:
    duality_gap_tol: float = 1e-8
    feasibility_tol: float = 1e-8
    max_iterations: int = 100

    def __post_init__(self):
        if self.duality_gap_tol <= 0 or self.feasibility_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class LpSolution:
    primal: np.ndarray = field(repr=False)
    dual: np.ndarray = field(repr=False)
    gap: float
    iterations: int
    status: str
    slack: np.ndarray = field(default=None, repr=False)
    primal_residual: float = 0.0
    dual_residual: float = 0.0
    objective: float = 0.0


def independent_rows(A, tol=1e-10):
    """Row indices of a maximal linearly independent subset of A's rows (sorted)."""
    if A.shape[0] == 0:
        return np.zeros(0, dtype=int)
    _, R, piv = sla.qr(A.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        return np.zeros(0, dtype=int)
    rank = int(np.sum(diag > tol * diag[0]))
    return np.sort(piv[:rank])


def _solve_normal(A, d, rhs):
    K = (A * d) @ A.T
    try:
        cf = sla.cho_factor(K, check_finite=False)
        return sla.cho_solve(cf, rhs, check_finite=False)
    except (np.linalg.LinAlgError, ValueError):
        # late iterations can make K numerically semidefinite
        return sla.lstsq(K, rhs, check_finite=False)[0]


def _max_step(v, dv):
    neg = dv < 0
    if not neg.any():
        return 1.0
    return min(1.0, float(np.min(-v[neg] / dv[neg])))


def _starting_point(A, b, c):
    AAt = A @ A.T
    x = A.T @ sla.solve(AAt, b, assume_a="pos")
    lam = sla.solve(AAt, A @ c, assume_a="pos")
    s = c - A.T @ lam
    x = x + max(-1.5 * x.min(), 0.0)
    s = s + max(-1.5 * s.min(), 0.0)
    xs = float(x @ s)
    if xs <= 0.0 or x.sum() <= 0.0 or s.sum() <= 0.0:
        x = x + 1.0
        s = s + 1.0
        xs = float(x @ s)
    x = x + 0.5 * xs / s.sum()
    s = s + 0.5 * xs / x.sum()
    return x, lam, s


def lp_primal_dual_solve(c, A_eq, b_eq, params=LpSolverParams()):
    """Solve the standard-form LP; returns an :class:`LpSolution`.

    Redundant equality rows are dropped first. Convergence requires the
    primal residual ||Ax - b|| <= tol (1 + ||b||), the dual residual
    ||A^T lam + s - c|| <= tol (1 + ||c||), and the duality gap
    |c^T x - b^T lam| <= duality_gap_tol (absolute).

    Raises Infeasible or Unbounded when detected; hitting the iteration cap
    returns the last iterate with status ``MaxIterations``.
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A_eq, dtype=float))
    b = np.asarray(b_eq, dtype=float)
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise DimensionMismatch(f"c {c.shape}, A {A.shape}, b {b.shape}")
    ftol = params.feasibility_tol
    bnorm, cnorm = float(np.linalg.norm(b)), float(np.linalg.norm(c))

    keep = independent_rows(A)
    if len(keep) < m:
        x_ls = sla.lstsq(A[keep], b[keep])[0] if len(keep) else np.zeros(n)
        if np.linalg.norm(A @ x_ls - b) > ftol * (1.0 + bnorm):
            raise Infeasible("equality constraints are inconsistent")
    Ar, br = A[keep], b[keep]

    if Ar.shape[0] == 0:
        if np.any(c < 0):
            raise Unbounded("no constraints and a negative cost")
        x = np.zeros(n)
        return _solution(x, np.zeros(m), c.copy(), 0.0, 0, OPTIMAL, A, b, c)

    x, lam, s = _starting_point(Ar, br, c)
    big = 1e10 * (1.0 + bnorm + cnorm)
    status = MAX_ITERATIONS
    it = 0
    for it in range(params.max_iterations + 1):
        rb = Ar @ x - br
        rc = Ar.T @ lam + s - c
        pobj, dobj = float(c @ x), float(br @ lam)
        gap = abs(pobj - dobj)
        if (np.linalg.norm(rb) <= ftol * (1.0 + bnorm)
                and np.linalg.norm(rc) <= ftol * (1.0 + cnorm)
                and gap <= params.duality_gap_tol):
            status = OPTIMAL
            break
        if it == params.max_iterations:
            break
        if np.linalg.norm(x) > big:
            raise Unbounded("primal iterates diverge")
        if np.linalg.norm(lam) > big:
            raise Infeasible("dual iterates diverge")

        mu = float(x @ s) / n
        d = x / s
        # predictor (affine scaling) direction
        rhs_x = -x * s
        dlam = _solve_normal(Ar, d, -rb - Ar @ ((rhs_x + x * rc) / s))
        ds = -rc - Ar.T @ dlam
        dx = (rhs_x - x * ds) / s
        ap = _max_step(x, dx)
        ad = _max_step(s, ds)
        mu_aff = float((x + ap * dx) @ (s + ad * ds)) / n
        sigma = (mu_aff / mu) ** 3 if mu > 0 else 0.0
        # corrector with centering
        rhs_x = -x * s - dx * ds + sigma * mu
        dlam = _solve_normal(Ar, d, -rb - Ar @ ((rhs_x + x * rc) / s))
        ds = -rc - Ar.T @ dlam
        dx = (rhs_x - x * ds) / s
        eta = max(0.9, 1.0 - 10.0 * mu / (1.0 + abs(pobj)))
        ap = min(1.0, eta * _max_step(x, dx))
        ad = min(1.0, eta * _max_step(s, ds))
        x = x + ap * dx
        lam = lam + ad * dlam
        s = s + ad * ds
        # guard against underflow to exactly zero
        x = np.maximum(x, 1e-300)
        s = np.maximum(s, 1e-300)

    full_dual = np.zeros(m)
    full_dual[keep] = lam
    return _solution(x, full_dual, s, gap, it, status, A, b, c)


def _solution(x, lam, s, gap, iterations, status, A, b, c):
    sol = LpSolution(
        primal=x,
        dual=lam,
        gap=float(gap),
        iterations=int(iterations),
        status=status,
        slack=s,
        primal_residual=float(np.linalg.norm(A @ x - b)),
        dual_residual=float(np.linalg.norm(A.T @ lam + s - c)),
        objective=float(c @ x),
    )
    return sol
