"""Dense complex least squares via Householder QR, and spectral norm estimation.

numpy arrays are used as storage only; the factorization itself is written
out here so that OLS can grow it one column at a time.
"""
import numpy as np

from .errors import DimensionMismatch, RankDeficient, ZeroMatrix

RANK_TOL = 1e-12


def _reflector(x):
    """Householder vector v (unit norm) and beta with (I - 2 v v^H) x = beta e_0."""
    alpha = np.linalg.norm(x)
    if alpha == 0.0:
        return None, 0.0
    x0 = x[0]
    phase = x0 / abs(x0) if x0 != 0 else 1.0
    v = x.astype(complex, copy=True)
    v[0] += phase * alpha
    v /= np.linalg.norm(v)
    return v, -phase * alpha


class HouseholderQR:
    """Thin QR factorization A = Q R of an M x k complex matrix.

    Columns can be appended one at a time (``append``); each append costs
    O(M k) since only the new column is pushed through the stored reflectors.
    """

    def __init__(self, n_rows, scale=1.0):
        self.n_rows = n_rows
        self.scale = scale  # reference size for the rank test (||A||_F)
        self._vs = []
        self._R = np.zeros((0, 0), dtype=complex)

    @classmethod
    def factor(cls, A):
        A = np.asarray(A, dtype=complex)
        if A.ndim != 2:
            raise DimensionMismatch("expected a 2-d matrix")
        M, k = A.shape
        if k > M:
            raise RankDeficient(f"{k} columns cannot be independent in {M} rows")
        qr = cls(M, scale=np.linalg.norm(A))
        for j in range(k):
            qr.append(A[:, j])
        return qr

    @property
    def ncols(self):
        return len(self._vs)

    @property
    def R(self):
        return self._R

    def _apply_qh(self, b):
        """Return Q_full^H b using the stored reflectors."""
        w = np.array(b, dtype=complex)
        for i, v in enumerate(self._vs):
            w[i:] -= 2.0 * v * np.vdot(v, w[i:])
        return w

    def _apply_q(self, w):
        b = np.array(w, dtype=complex)
        for i in range(len(self._vs) - 1, -1, -1):
            v = self._vs[i]
            b[i:] -= 2.0 * v * np.vdot(v, b[i:])
        return b

    def append(self, col, scale=None):
        """Add one column; raises RankDeficient if it lies in the current span."""
        k = self.ncols
        if k >= self.n_rows:
            raise RankDeficient("matrix already has as many columns as rows")
        if scale is not None:
            self.scale = scale
        w = self._apply_qh(col)
        v, beta = _reflector(w[k:])
        ref = self.scale if self.scale > 0 else np.linalg.norm(col)
        if v is None or abs(beta) < RANK_TOL * ref:
            raise RankDeficient(f"column {k} is linearly dependent (|R_kk| = {abs(beta):.3e})")
        R = np.zeros((k + 1, k + 1), dtype=complex)
        R[:k, :k] = self._R
        R[:k, k] = w[:k]
        R[k, k] = beta
        self._R = R
        self._vs.append(v)
        return self

    def q_column(self, j):
        e = np.zeros(self.n_rows, dtype=complex)
        e[j] = 1.0
        return self._apply_q(e)

    def solve(self, b):
        """Least-squares solution of A x = b."""
        b = np.asarray(b)
        if b.shape != (self.n_rows,):
            raise DimensionMismatch(f"rhs has shape {b.shape}, expected ({self.n_rows},)")
        k = self.ncols
        z = self._apply_qh(b)[:k]
        return _back_substitute(self._R, z)


def _back_substitute(R, z):
    k = len(z)
    x = np.zeros(k, dtype=complex)
    for i in range(k - 1, -1, -1):
        x[i] = (z[i] - R[i, i + 1:] @ x[i + 1:]) / R[i, i]
    return x


def least_squares_solve(A, b):
    """Minimize ||A x - b||_2 for a full column rank complex A (M x k, M >= k).

    This is the pseudo-inverse step used by OMP/OLS when refitting the
    coefficients on the current support.
    """
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"A is {A.shape}, b is {b.shape}")
    if A.shape[1] == 0:
        raise DimensionMismatch("A has no columns")
    return HouseholderQR.factor(A).solve(b)


def spectral_norm_sq_estimate(A, iterations=100, seed=0):
    """Estimate sigma_max(A)^2 by power iteration on A^H A.

    The start vector is drawn from a seeded Philox stream so the estimate
    is reproducible. The returned Rayleigh quotient ||A v||^2 / ||v||^2 is a
    lower bound that increases monotonically with ``iterations``.
    """
    A = np.asarray(A, dtype=complex)
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not np.any(A):
        raise ZeroMatrix("spectral norm of a zero matrix")
    rng = np.random.Generator(np.random.Philox(seed))
    n = A.shape[1]
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iterations):
        w = A.conj().T @ (A @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # start vector in the null space; restart along a column
            v = A.conj().T @ A[:, np.argmax(np.linalg.norm(A, axis=0))]
            v /= np.linalg.norm(v)
            continue
        v = w / nw
        est = max(est, float(np.linalg.norm(A @ v) ** 2))
    return est
