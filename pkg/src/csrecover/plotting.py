"""Matplotlib figures written next to the CSV reports."""
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .benchmark import median_mse  # noqa: E402

FLOOR = 1e-32


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_mse_curves(records, path, title="MSE vs available samples"):
    """Median MSE against M, one line per algorithm, log y axis."""
    curves = median_mse(records)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in sorted(curves):
        pts = sorted(curves[name].items())
        if not pts:
            continue
        ms, vals = zip(*pts)
        ax.plot(ms, [max(v, FLOOR) for v in vals], marker="o", label=name)
    ax.set_yscale("log")
    ax.set_xlabel("available samples M")
    ax.set_ylabel("median MSE")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if curves:
        ax.legend()
    return _finish(fig, path)


def plot_spectra(u_true, recovered, path):
    """Magnitude spectra of the original and each reconstruction (stems).

    ``recovered`` maps an algorithm name to its unitary-scale coefficients.
    Magnitudes are divided by sqrt(N) so tones show at their amplitudes.
    """
    n = len(u_true)
    panels = [("original", u_true)] + list(recovered.items())
    cols = 2 if len(panels) > 1 else 1
    rows = math.ceil(len(panels) / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(6 * cols, 2.6 * rows), squeeze=False)
    for ax, (name, u) in zip(axes.flat, panels):
        ax.stem(np.arange(n), np.abs(u) / math.sqrt(n), markerfmt=" ", basefmt=" ")
        ax.set_title(name)
        ax.set_xlabel("bin k")
        ax.set_ylabel("|amplitude|")
    for ax in list(axes.flat)[len(panels):]:
        ax.set_visible(False)
    return _finish(fig, path)


def plot_time_domain(x, recovered, path, mask=None, span=128):
    """Real part of the first ``span`` samples: original vs reconstructions."""
    span = min(span, len(x))
    t = np.arange(span)
    fig, ax = plt.subplots(figsize=(8, 3.5))
    ax.plot(t, x[:span].real, color="black", lw=2, label="original")
    for name, xr in recovered.items():
        ax.plot(t, np.asarray(xr)[:span].real, lw=1, ls="--", label=name)
    if mask is not None:
        idx = [i for i in mask.indices if i < span]
        ax.plot(idx, x[idx].real, "o", ms=4, color="tab:red", label="measured")
    ax.set_xlabel("n")
    ax.set_ylabel("Re x[n]")
    ax.legend(fontsize="small", ncol=2)
    return _finish(fig, path)
