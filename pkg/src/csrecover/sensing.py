"""Random time-domain sampling and the partial inverse-DFT dictionary."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, MTooLarge


def make_rng(seed):
    """Counter-based Philox stream; every seeded draw in the package goes through here."""
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class SampleMask:
    n: int
    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if not 1 <= len(idx) <= self.n:
            raise MTooLarge(f"need 1 <= M <= N, got M={len(idx)}, N={self.n}")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("mask indices must be strictly increasing")
        if idx[0] < 0 or idx[-1] >= self.n:
            raise ValueError(f"mask index outside [0, {self.n})")

    @property
    def m(self):
        return len(self.indices)

    def as_array(self):
        return np.asarray(self.indices, dtype=np.intp)

    def selection_matrix(self):
        """The M x N 0/1 row-selection matrix."""
        S = np.zeros((self.m, self.n))
        S[np.arange(self.m), self.as_array()] = 1.0
        return S


@dataclass(frozen=True)
class Measurements:
    mask: SampleMask
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.mask.m,):
            raise LengthMismatch(f"{vals.shape[0] if vals.ndim else 0} values for a mask of {self.mask.m}")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Dictionary:
    """M x N sensing matrix ``matrix`` = rows of the unitary inverse DFT.

    When ``normalized`` is set every column has unit norm and
    ``column_norms`` holds the norms before rescaling, so a coefficient
    w solved against this matrix maps back to the unitary scale as
    ``w / column_norms``.
    """

    matrix: np.ndarray = field(repr=False)
    column_norms: np.ndarray = field(repr=False)
    normalized: bool
    mask: SampleMask

    @property
    def shape(self):
        return self.matrix.shape

    def to_unitary(self, w):
        w = np.asarray(w)
        return w / self.column_norms if self.normalized else w.copy()

    def from_unitary(self, u):
        u = np.asarray(u)
        return u * self.column_norms if self.normalized else u.copy()

    def unitary_matrix(self):
        """Dictionary on the unitary-DFT coefficient scale (columns not rescaled)."""
        return self.matrix * self.column_norms if self.normalized else self.matrix


def draw_mask(n, m, seed):
    """Choose ``m`` of ``n`` time instants uniformly without replacement.

    Partial Fisher-Yates shuffle on a Philox stream, so the draw is exactly
    uniform and reproducible for a given seed.
    """
    if not 1 <= m <= n:
        raise MTooLarge(f"need 1 <= M <= N, got M={m}, N={n}")
    rng = make_rng(seed)
    perm = np.arange(n)
    swaps = rng.integers(np.arange(m), n)
    for i, j in enumerate(swaps):
        perm[i], perm[j] = perm[j], perm[i]
    return SampleMask(n, tuple(sorted(perm[:m].tolist())))


def sample(x, mask):
    x = np.asarray(x, dtype=complex)
    if x.shape != (mask.n,):
        raise LengthMismatch(f"signal length {x.shape[0]} != mask length {mask.n}")
    return Measurements(mask, x[mask.as_array()])


def build_dictionary(n, mask, normalize=True):
    """A[m, k] = N^-1/2 exp(j 2 pi k t_m / N), t_m = mask.indices[m]."""
    if n != mask.n:
        raise DimensionMismatch(f"N={n} but mask is over {mask.n} samples")
    t = mask.as_array()
    k = np.arange(n)
    A = np.exp(2j * np.pi * (np.outer(t, k) % n) / n) / np.sqrt(n)
    norms = np.linalg.norm(A, axis=0)
    if normalize:
        A = A / norms
    return Dictionary(A, norms, bool(normalize), mask)


def mutual_coherence(d):
    """max_{i != j} |<a_i, a_j>| / (||a_i|| ||a_j||)."""
    A = d.matrix if isinstance(d, Dictionary) else np.asarray(d)
    if A.shape[1] < 2:
        raise DimensionMismatch("coherence needs at least two columns")
    An = A / np.linalg.norm(A, axis=0)
    G = np.abs(An.conj().T @ An)
    np.fill_diagonal(G, 0.0)
    return float(min(G.max(), 1.0))


def write_mask_csv(path, mask):
    with open(path, "w") as fh:
        for i in mask.indices:
            fh.write(f"{i}\n")


def read_mask_csv(path, n):
    with open(path) as fh:
        idx = [int(line) for line in fh if line.strip()]
    return SampleMask(n, tuple(idx))
