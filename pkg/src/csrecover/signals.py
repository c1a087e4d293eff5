"""Multitone test signals and the unitary DFT pair linking time and frequency."""
import csv
from dataclasses import dataclass

import numpy as np

from .errors import BinOutOfRange, DuplicateBin, NonFinite


@dataclass(frozen=True)
class MultitoneSpec:
    """A K-sparse sum of complex exponentials of length ``n``.

    ``components`` is a sequence of ``(bin, amplitude)`` pairs. Amplitudes
    may be complex, but the reference experiment only uses real ones and
    basis pursuit assumes real amplitudes.
    """

    n: int
    components: tuple = ()

    def __post_init__(self):
        comps = tuple((int(k), a) for k, a in self.components)
        object.__setattr__(self, "components", comps)
        if self.n < 1:
            raise ValueError("signal length must be >= 1")
        bins = [k for k, _ in comps]
        if len(set(bins)) != len(bins):
            raise DuplicateBin(f"repeated bin in {bins}")
        for k, a in comps:
            if not 0 <= k < self.n:
                raise BinOutOfRange(f"bin {k} outside [0, {self.n})")
            if not np.isfinite(a):
                raise NonFinite(f"amplitude {a!r} at bin {k}")

    @property
    def bins(self):
        return tuple(sorted(k for k, _ in self.components))

    @property
    def sparsity(self):
        return len(self.components)

    def with_length(self, n):
        return MultitoneSpec(n, self.components)


# the five-tone test signal used throughout the benchmark
BENCHMARK_SIGNAL = MultitoneSpec(
    512, ((28, 3.5), (26, 1.5), (6, 4.4), (42, 1.8), (90, 3.0))
)


def generate_multitone(spec):
    """x[n] = sum_i A_i exp(j 2 pi k_i n / N) for n = 0..N-1."""
    n = np.arange(spec.n)
    x = np.zeros(spec.n, dtype=complex)
    for k, a in spec.components:
        # reduce k*n mod N first so the phase argument stays small
        x += a * np.exp(2j * np.pi * ((k * n) % spec.n) / spec.n)
    return x


def dft(x):
    """Unitary DFT: U[k] = N^-1/2 sum_n x[n] exp(-j 2 pi k n / N)."""
    return np.fft.fft(np.asarray(x, dtype=complex), norm="ortho")


def idft(u):
    """Inverse of :func:`dft` under the same unitary scaling."""
    return np.fft.ifft(np.asarray(u, dtype=complex), norm="ortho")


def support_of(u, threshold):
    """Sorted indices whose magnitude strictly exceeds ``threshold``."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    return tuple(int(i) for i in np.flatnonzero(np.abs(np.asarray(u)) > threshold))


def write_signal_csv(path, x):
    """Write a complex vector as ``re,im`` rows (no header, 17 significant digits)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for v in np.asarray(x, dtype=complex):
            w.writerow([f"{v.real:.17g}", f"{v.imag:.17g}"])


def read_signal_csv(path):
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            rows.append(complex(float(row[0]), float(row[1])))
    x = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(x)):
        raise NonFinite(f"{path}: non-finite sample")
    return x
