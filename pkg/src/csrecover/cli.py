"""Command-line interface: ``csrecover {generate,recover,sweep,coherence}``.

Exit status: 0 on success, 1 on usage errors, 2 on runtime failures.
"""
import argparse
import math
import os
import sys

import numpy as np

from . import config as cfgmod
from .benchmark import ALGORITHMS, emit_csv, emit_plot_script, mse, run_algorithm, run_sweep, summarize
from .errors import RecoveryError
from .sensing import build_dictionary, draw_mask, mutual_coherence, sample, write_mask_csv
from .signals import BENCHMARK_SIGNAL, dft, generate_multitone, idft, read_signal_csv, write_signal_csv


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _build_parser():
    p = _Parser(prog="csrecover", description="Sparse recovery of multitone signals from random samples.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("generate", help="write a multitone signal as re,im CSV")
    g.add_argument("--spec", default="paper", help="'paper' or a config file with a signal block")
    g.add_argument("--config", help="config file whose signal block is used")
    g.add_argument("--n", type=int, help="override the signal length")
    g.add_argument("--out", help="output CSV (default: stdout)")

    r = sub.add_parser("recover", help="recover one signal from M random samples")
    r.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    r.add_argument("--spec", default="paper",
                   help="'paper', a config file with a signal block, or a re,im signal CSV")
    r.add_argument("--config", help="config file supplying the signal and algorithm parameters")
    r.add_argument("--n", type=int, help="override the signal length")
    r.add_argument("--m", type=int, required=True, help="number of samples kept")
    r.add_argument("--k", type=int, help="sparsity (default: number of planted tones)")
    r.add_argument("--seed", type=int, default=0, help="mask seed")
    r.add_argument("--out", help="directory for recovered signal, mask and figures")

    s = sub.add_parser("sweep", help="run the MSE-vs-M experiment")
    s.add_argument("--config", required=True, help="config file or bundled name (paper_experiment)")
    s.add_argument("--out", default="sweep_out", help="output directory")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--seed", type=int, help="override base_seed")
    s.add_argument("--m", type=int, help="run a single M instead of the configured list")
    s.add_argument("--algorithm", help="comma-separated subset of algorithms")
    s.add_argument("--no-figures", action="store_true", help="skip the PNG rendering")

    c = sub.add_parser("coherence", help="mutual coherence of a random partial-DFT dictionary")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    return p


def _signal_from(spec_arg, config_arg, n):
    """(spec or None, samples) from --spec/--config; a CSV gives no spec."""
    source = config_arg or spec_arg
    if source == "paper":
        spec = BENCHMARK_SIGNAL
    elif source.endswith(".csv"):
        x = read_signal_csv(source)
        if n is not None and n != len(x):
            raise UsageError(f"--n {n} does not match the {len(x)}-sample CSV")
        return None, x
    else:
        spec = cfgmod.load_signal(source)
    if n is not None:
        spec = spec.with_length(n)
    return spec, generate_multitone(spec)


def _fmt_support(support):
    return "{" + ", ".join(str(i) for i in support) + "}"


def cmd_generate(args, out):
    spec, x = _signal_from(args.spec, args.config, args.n)
    if args.out:
        write_signal_csv(args.out, x)
        print(f"wrote {len(x)} samples to {args.out}", file=out)
    else:
        _write_stream(out, x)
    return 0


def _write_stream(out, x):
    for v in x:
        out.write(f"{v.real:.17g},{v.imag:.17g}\n")


def cmd_recover(args, out):
    spec, x = _signal_from(args.spec, args.config, args.n)
    n = len(x)
    if spec is None and args.k is None:
        raise UsageError("--k is required when recovering from a signal CSV")
    k = args.k if args.k is not None else spec.sparsity
    if not 1 <= args.m <= n:
        raise UsageError(f"--m must lie in [1, {n}]")
    block = {}
    if args.config:
        block = cfgmod.load_config(args.config).params.get(args.algorithm, {})
    mask = draw_mask(n, args.m, args.seed)
    y = sample(x, mask)
    d = build_dictionary(n, mask, normalize=True)
    res = run_algorithm(args.algorithm, d, y, k, block)
    x_hat = idft(res.coeffs)

    print(f"algorithm      {args.algorithm}", file=out)
    print(f"N, M, seed     {n}, {args.m}, {args.seed}", file=out)
    print(f"status         {res.status}", file=out)
    print(f"support        {_fmt_support(res.support)}", file=out)
    print("coefficients   (unitary DFT scale; amplitude = coeff / sqrt(N))", file=out)
    for i in res.support:
        c = res.coeffs[i]
        a = c / math.sqrt(n)
        print(f"  bin {i:5d}  {c.real:+.6f}{c.imag:+.6f}j   amplitude {a.real:+.6f}{a.imag:+.6f}j", file=out)
    print(f"residual norm  {res.residual_norm:.6e}", file=out)
    if spec is not None:
        print(f"MSE vs truth   {mse(x, x_hat):.6e}", file=out)
    print(f"iterations     {res.iterations}", file=out)
    print(f"elapsed        {res.elapsed * 1e6:.0f} us", file=out)

    if args.out:
        from .plotting import plot_spectra, plot_time_domain

        os.makedirs(args.out, exist_ok=True)
        write_signal_csv(os.path.join(args.out, "recovered.csv"), x_hat)
        write_mask_csv(os.path.join(args.out, "mask.csv"), mask)
        plot_spectra(dft(x), {args.algorithm: res.coeffs}, os.path.join(args.out, "spectrum.png"))
        plot_time_domain(x, {args.algorithm: x_hat}, os.path.join(args.out, "time.png"), mask=mask)
        print(f"wrote recovered.csv, mask.csv, spectrum.png, time.png to {args.out}", file=out)
    return 0


def cmd_sweep(args, out):
    algorithms = tuple(a.strip() for a in args.algorithm.split(",")) if args.algorithm else None
    cfg = cfgmod.load_config(
        args.config,
        base_seed=args.seed,
        m_values=(args.m,) if args.m is not None else None,
        algorithms=algorithms,
    )
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    total = len(cfg.m_values) * cfg.trials_per_m
    step = max(1, total // 10)

    def progress(i):
        if i % step == 0 or i == total:
            print(f"  {i}/{total} cells", file=sys.stderr)

    records = run_sweep(cfg, jobs=args.jobs, progress=progress)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "records.csv")
    script_path = os.path.join(args.out, "plot_mse.py")
    emit_csv(records, csv_path)
    emit_plot_script(records, script_path, algorithms=cfg.algorithms)
    written = [csv_path, script_path]
    if not args.no_figures:
        from .plotting import plot_mse_curves

        written.append(plot_mse_curves(records, os.path.join(args.out, "mse_vs_m.png")))
    print(f"{'algorithm':<18} {'M':>4} {'median MSE':>12} {'exact':>6} {'median us':>10}", file=out)
    for row in summarize(records):
        print(f"{row['algorithm']:<18} {row['M']:>4} {row['median_mse']:>12.3e} "
              f"{row['support_rate']:>6.2f} {row['median_us']:>10.0f}", file=out)
    for path in written:
        print(f"wrote {path}", file=out)
    return 0


def cmd_coherence(args, out):
    d = build_dictionary(args.n, draw_mask(args.n, args.m, args.seed), normalize=True)
    print(f"{mutual_coherence(d):.12g}", file=out)
    return 0


COMMANDS = {"generate": cmd_generate, "recover": cmd_recover, "sweep": cmd_sweep, "coherence": cmd_coherence}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = _build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if not argv:
            raise UsageError(parser.format_usage().rstrip())
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().rstrip())
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (RecoveryError, cfgmod.ConfigError, OSError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"csrecover: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
