"""Recovery metrics and the seeded sweep over measurement counts."""
import csv
import io
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .convex import GradientParams, adaptive_gradient, basis_pursuit_eq
from .errors import LengthMismatch
from .greedy import RecoveryResult, StoppingRule, gradient_pursuit, ols, omp
from .lp import LpSolverParams
from .sensing import build_dictionary, draw_mask, sample
from .signals import MultitoneSpec, dft, generate_multitone, idft, support_of
from .thresholding import IhtParams, LambdaThreshold, TopK, auto_step, iht

ALGORITHMS = ("omp", "ols", "gp", "adaptive_gradient", "l1eq", "iht_topk", "iht_lambda")
DEFAULT_ALGORITHMS = ("omp", "ols", "gp", "adaptive_gradient", "l1eq", "iht_topk")
CSV_HEADER = ("algorithm", "M", "trial", "mse", "support_exact",
              "residual_norm", "iterations", "elapsed_us", "status")


def mse(x, x_hat):
    """(1/N) sum |x[n] - x_hat[n]|^2."""
    x = np.asarray(x)
    x_hat = np.asarray(x_hat)
    if x.shape != x_hat.shape:
        raise LengthMismatch(f"{x.shape} vs {x_hat.shape}")
    return float(np.mean(np.abs(x - x_hat) ** 2))


def support_match(truth, result, threshold):
    coeffs = result.coeffs if isinstance(result, RecoveryResult) else result
    return support_of(coeffs, threshold) == tuple(sorted(truth))


def trial_seed(base_seed, m, trial):
    """64-bit seed for one (M, trial) cell.

    numpy's SeedSequence hashes the three integers, so the mapping is fixed
    and independent of the order in which cells are executed.
    """
    ss = np.random.SeedSequence([int(base_seed), int(m), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class ExperimentConfig:
    signal: MultitoneSpec
    m_values: tuple
    trials_per_m: int = 50
    base_seed: int = 0
    algorithms: tuple = DEFAULT_ALGORITHMS
    params: dict = field(default_factory=dict)
    timing_repeats: int = 5
    support_threshold: float = 0.1  # in amplitude units; scaled by sqrt(N) for coefficients

    def __post_init__(self):
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.m_values:
            raise ValueError("m_values must not be empty")
        if any(not 1 <= m <= self.signal.n for m in self.m_values):
            raise ValueError(f"every M must lie in [1, {self.signal.n}]")
        if self.trials_per_m < 1 or self.timing_repeats < 1:
            raise ValueError("trials_per_m and timing_repeats must be >= 1")
        if self.base_seed < 0:
            raise ValueError("base_seed must be non-negative")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")


@dataclass(frozen=True)
class BenchmarkRecord:
    algorithm: str
    M: int
    trial: int
    mse: float
    support_exact: bool
    residual_norm: float
    iterations: int
    elapsed_us: int
    status: str = "ok"

    def sort_key(self):
        return (self.algorithm, self.M, self.trial)


def _stopping(block, k, y):
    return StoppingRule.for_sparsity(
        int(block.get("max_atoms", k)), y,
        rel_tol=float(block.get("residual_tol", 1e-6)),
        max_iterations=int(block.get("max_iterations", 1000)),
    )


def _step(block):
    step = block.get("step", "auto")
    return None if step in (None, "auto") else float(step)


def run_algorithm(name, d, y, k, block=None):
    """Run one named algorithm against a normalized dictionary.

    ``k`` is the number of planted components; ``block`` holds the
    algorithm's parameter overrides from the experiment config.
    """
    block = dict(block or {})
    if name == "omp":
        return omp(d, y, _stopping(block, k, y))
    if name == "ols":
        return ols(d, y, _stopping(block, k, y))
    if name == "gp":
        return gradient_pursuit(d, y, _stopping(block, k, y))
    if name == "l1eq":
        return basis_pursuit_eq(d, y, LpSolverParams(**block))
    if name == "adaptive_gradient":
        return _adaptive_gradient_result(d, y, GradientParams(**block))
    if name == "iht_topk":
        keep = block.pop("keep", "components")
        keep = {"components": k, "measurements": y.mask.m}.get(keep, keep)
        return iht(d, y, IhtParams(TopK(int(keep)), step=_step(block),
                                   max_iterations=int(block.get("max_iterations", 500)),
                                   convergence_tol=float(block.get("convergence_tol", 1e-6))))
    if name == "iht_lambda":
        step = _step(block)
        step_used = step if step is not None else auto_step(d.matrix)
        # threshold at `fraction` of the first iterate's peak: sqrt(lam*step) = f*step*max|A^H y|
        frac = float(block.get("threshold_fraction", 0.1))
        peak = float(np.max(np.abs(d.matrix.conj().T @ y.values)))
        lam = step_used * (frac * peak) ** 2
        return iht(d, y, IhtParams(LambdaThreshold(lam), step=step_used,
                                   max_iterations=int(block.get("max_iterations", 500)),
                                   convergence_tol=float(block.get("convergence_tol", 1e-6))))
    raise ValueError(f"unknown algorithm {name!r}")


def _adaptive_gradient_result(d, y, params):
    t0 = time.perf_counter()
    history = []
    x_hat = adaptive_gradient(y, y.mask.n, params, history=history)
    u = dft(x_hat)
    peak = np.max(np.abs(u)) if u.size else 0.0
    return RecoveryResult(
        coeffs=u,
        support=support_of(u, 1e-3 * peak) if peak > 0 else (),
        residual_norm=float(np.linalg.norm(d.unitary_matrix() @ u - y.values)),
        iterations=int(sum(h[2] for h in history)),
        elapsed=time.perf_counter() - t0,
        info={"history": history},
    )


def _run_cell(cfg, m, trial):
    spec = cfg.signal
    x = generate_multitone(spec)
    truth = spec.bins
    mask = draw_mask(spec.n, m, trial_seed(cfg.base_seed, m, trial))
    y = sample(x, mask)
    d = build_dictionary(spec.n, mask, normalize=True)
    threshold = cfg.support_threshold * math.sqrt(spec.n)
    out = []
    for name in cfg.algorithms:
        block = cfg.params.get(name, {})
        timings = []
        try:
            for _ in range(cfg.timing_repeats):
                t0 = time.perf_counter_ns()
                res = run_algorithm(name, d, y, spec.sparsity, block)
                timings.append(time.perf_counter_ns() - t0)
        except Exception as exc:  # one failing solver must not abort the sweep
            out.append(BenchmarkRecord(name, m, trial, math.inf, False, math.nan, 0, 0,
                                       type(exc).__name__))
            continue
        out.append(BenchmarkRecord(
            algorithm=name,
            M=m,
            trial=trial,
            mse=mse(x, idft(res.coeffs)),
            support_exact=support_match(truth, res, threshold),
            residual_norm=res.residual_norm,
            iterations=res.iterations,
            elapsed_us=int(statistics.median(timings) // 1000),
            status=res.status,
        ))
    return out


def _run_cell_args(args):
    return _run_cell(*args)


def run_sweep(cfg, jobs=1, progress=None):
    """Run every configured algorithm on every (M, trial) cell.

    All algorithms in a cell share one mask. Records come back sorted by
    (algorithm, M, trial). ``progress``, if given, is called with the
    number of finished cells.
    """
    cells = [(cfg, m, t) for m in cfg.m_values for t in range(cfg.trials_per_m)]
    records = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, recs in enumerate(pool.map(_run_cell_args, cells, chunksize=4), 1):
                records.extend(recs)
                if progress:
                    progress(i)
    else:
        for i, cell in enumerate(cells, 1):
            records.extend(_run_cell(*cell))
            if progress:
                progress(i)
    records.sort(key=BenchmarkRecord.sort_key)
    return records


def _fmt(v):
    if isinstance(v, float):
        return "" if not math.isfinite(v) else f"{v:.12g}"
    return str(v)


def emit_csv(records, destination):
    """Write records with the fixed header; ``destination`` is a path or text stream."""
    if hasattr(destination, "write"):
        _write_csv(records, destination)
    else:
        with open(destination, "w", newline="") as fh:
            _write_csv(records, fh)


def _write_csv(records, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.algorithm, r.M, r.trial, _fmt(r.mse), int(r.support_exact),
                    _fmt(r.residual_norm), r.iterations, r.elapsed_us, r.status])


def read_csv(source):
    """Parse a records CSV back into :class:`BenchmarkRecord` objects."""
    if isinstance(source, str) and "\n" in source:
        fh = io.StringIO(source)
    elif hasattr(source, "read"):
        fh = source
    else:
        fh = open(source, newline="")
    with fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected header {header}")
        return [
            BenchmarkRecord(
                algorithm=row[0], M=int(row[1]), trial=int(row[2]),
                mse=float(row[3]) if row[3] else math.inf,
                support_exact=row[4] == "1",
                residual_norm=float(row[5]) if row[5] else math.nan,
                iterations=int(row[6]), elapsed_us=int(row[7]), status=row[8],
            )
            for row in reader if row
        ]


def median_mse(records):
    """{algorithm: {M: median finite MSE}}; cells with no finite value are omitted."""
    groups = {}
    for r in records:
        groups.setdefault(r.algorithm, {}).setdefault(r.M, []).append(r.mse)
    out = {}
    for alg, by_m in groups.items():
        out[alg] = {}
        for m, vals in sorted(by_m.items()):
            finite = [v for v in vals if math.isfinite(v)]
            if finite:
                out[alg][m] = float(statistics.median(finite))
    return out


def summarize(records):
    """Per (algorithm, M): median MSE, exact-support rate, median runtime."""
    rows = {}
    for r in records:
        rows.setdefault((r.algorithm, r.M), []).append(r)
    table = []
    for (alg, m), group in sorted(rows.items()):
        finite = [r.mse for r in group if math.isfinite(r.mse)]
        table.append({
            "algorithm": alg,
            "M": m,
            "median_mse": statistics.median(finite) if finite else math.inf,
            "support_rate": sum(r.support_exact for r in group) / len(group),
            "median_us": statistics.median(r.elapsed_us for r in group),
            "failures": sum(r.status != "ok" for r in group),
        })
    return table


PLOT_SCRIPT_TEMPLATE = """\
#!/usr/bin/env python3
# csrecover plot script, format 1: median MSE vs number of available samples.
# Self-contained: the data below is embedded; only matplotlib is required.
# usage: python3 {{this file}} [output.png]
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

TITLE = {title!r}
FLOOR = 1e-32  # zero MSE cannot be drawn on a log axis
SERIES = {{
{series}}}

fig, ax = plt.subplots(figsize=(7, 4.5))
for name, points in SERIES.items():
    if not points:
        continue
    ms, vals = zip(*points)
    ax.plot(ms, [max(v, FLOOR) for v in vals], marker="o", label=name)
ax.set_yscale("log")
ax.set_xlabel("available samples M")
ax.set_ylabel("median MSE")
ax.set_title(TITLE)
ax.grid(True, which="both", alpha=0.3)
if any(SERIES.values()):
    ax.legend()
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else "mse_vs_m.png", dpi=150)
"""


def emit_plot_script(records, destination, algorithms=None, title="MSE vs available samples"):
    """Write a standalone matplotlib script drawing median MSE against M.

    One series per algorithm (those in ``records``, plus any listed in
    ``algorithms``), log-scale MSE axis, data embedded as literals.
    """
    curves = median_mse(records)
    names = sorted(set(curves) | set(algorithms or ()))
    lines = []
    for name in names:
        pts = ", ".join(f"({m}, {v!r})" for m, v in sorted(curves.get(name, {}).items()))
        lines.append(f"    {name!r}: [{pts}],\n")
    text = PLOT_SCRIPT_TEMPLATE.format(title=title, series="".join(lines))
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w") as fh:
            fh.write(text)
