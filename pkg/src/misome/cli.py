"""Command line front end: single-shot rate computations, SNR sweeps,
large-system scaling tables, eigenvalue distribution checks, fading
studies, and regeneration of the bundled example datasets as CSV.

SNR is taken in dB at the interface and converted to linear power
``P = 10**(snr_db/10)`` internally.  All outputs are CSV with a header
row; files are written to a temporary name and atomically renamed, so a
failed run never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np
from scipy import stats

from .capacity import (
    REGIME_LOG_GROWTH,
    ChannelRealization,
    converse_certificate,
    high_snr_asymptote,
    masked_beamforming_rate,
    mb_gap_bound,
    secrecy_capacity,
    verify_certificate,
)
from .channel_file import format_complex, parse_channel_file, parse_complex
from .ensembles import (
    EnsembleSpec,
    asymptotic_capacity_infinite_snr,
    lambda_max_f_params,
    lambda_max_reference_cdf,
    monte_carlo_scaled_capacity,
    sample_lambda_max_rayleigh,
    scaled_capacity_lower_bound,
)
from .fading import PowerAllocation, expected_bounds, optimize_allocation

# Bundled two-antenna demonstration channel, stored to all printed digits.
# With both eavesdropper rows the receiver direction is covered and the
# capacity saturates; with only the first row it grows with power.
EXAMPLE_RECEIVER_GAIN = (0.0991 + 0.8676j, 1.0814 - 1.1281j)
EXAMPLE_EAVESDROPPER_GAIN = (
    (0.3880 + 1.2024j, -0.9825 + 0.5914j),
    (0.4709 - 0.3073j, 0.6815 - 0.2125j),
)


def example_channel(n_e: int = 2) -> ChannelRealization:
    """The bundled example channel with its first n_e eavesdropper rows."""
    if not 0 <= n_e <= 2:
        raise ValueError("the example channel has at most 2 eavesdropper rows")
    rows = EXAMPLE_EAVESDROPPER_GAIN[:n_e]
    return ChannelRealization(
        h_r=np.array(EXAMPLE_RECEIVER_GAIN),
        H_e=np.array(rows) if n_e else None,
    )


def snr_db_to_power(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def _fmt(cell) -> str:
    if isinstance(cell, bool):
        return "1" if cell else "0"
    if isinstance(cell, str):
        return cell
    if isinstance(cell, (int, np.integer)):
        return str(int(cell))
    x = float(cell)
    if math.isnan(x):
        raise ValueError("refusing to emit NaN into CSV output")
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _emit_csv(out, header, rows) -> None:
    text = ",".join(header) + "\n"
    text += "".join(",".join(_fmt(c) for c in row) + "\n" for row in rows)
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    fd, tmp = tempfile.mkstemp(
        dir=str(path.parent), prefix=path.name + ".", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_snr_spec(spec: str):
    """'v' -> [v]; 'start:stop:step' -> inclusive dB grid."""
    parts = spec.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError(
            f"--snr-db must be a value or start:stop:step, got {spec!r}"
        )
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise ValueError("--snr-db step must be positive")
    if stop < start:
        raise ValueError("--snr-db range is empty")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _parse_float_list(spec: str, flag: str):
    try:
        vals = [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"{flag} must be a comma-separated list of numbers")
    if not vals:
        raise ValueError(f"{flag} list is empty")
    return vals


def _load_channel(args) -> ChannelRealization:
    sources = [s for s in (args.channel, args.hr) if s is not None]
    if len(sources) != 1:
        raise ValueError(
            "exactly one channel source required: --channel FILE or --hr/--he"
        )
    if args.channel is not None:
        if args.he is not None:
            raise ValueError("--he only applies together with --hr")
        return parse_channel_file(args.channel)
    h = [parse_complex(tok) for tok in args.hr.split()]
    rows = None
    if args.he is not None:
        rows = [
            [parse_complex(tok) for tok in row.split()]
            for row in args.he.split(";")
            if row.strip()
        ]
    return ChannelRealization(h_r=h, H_e=rows)


def _single_snr(args) -> float:
    grid = _parse_snr_spec(args.snr_db)
    if len(grid) != 1:
        raise ValueError("this command takes a single --snr-db value")
    return grid[0]


def _cmd_capacity(args) -> int:
    ch = _load_channel(args)
    snr = _single_snr(args)
    P = snr_db_to_power(snr)
    rep = secrecy_capacity(P, ch)
    _emit_csv(
        args.out,
        ["snr_db", "p_linear", "capacity_bits", "lambda_max", "clamped"],
        [[snr, P, rep.capacity_bits, rep.lambda_max, rep.clamped]],
    )
    return 0


def _cmd_mb_rate(args) -> int:
    ch = _load_channel(args)
    snr = _single_snr(args)
    P = snr_db_to_power(snr)
    rate = masked_beamforming_rate(P, ch)
    lo, up = mb_gap_bound(P, ch)
    _emit_csv(
        args.out,
        ["snr_db", "p_linear", "rmb_bits", "gap_lower_bits", "gap_upper_bits"],
        [[snr, P, rate, lo, up]],
    )
    return 0


def _cmd_asymptote(args) -> int:
    ch = _load_channel(args)
    rep = high_snr_asymptote(ch)
    if rep.regime == REGIME_LOG_GROWTH:
        limit, offset = math.inf, rep.offset_bits
    else:
        limit, offset = rep.limit_bits, -math.inf
    _emit_csv(
        args.out,
        ["regime", "limit_bits", "offset_bits", "low_snr_slope"],
        [[rep.regime, limit, offset, rep.low_snr_slope]],
    )
    return 0


def _cmd_certificate(args) -> int:
    ch = _load_channel(args)
    snr = _single_snr(args)
    P = snr_db_to_power(snr)
    rep = secrecy_capacity(P, ch)
    nc = converse_certificate(P, ch)
    gap = verify_certificate(P, ch, nc)
    _emit_csv(
        args.out,
        ["snr_db", "p_linear", "case_tag", "lambda_max", "phi_norm",
         "certified_gap_bits"],
        [[snr, P, nc.case_tag, rep.lambda_max,
          float(np.linalg.norm(nc.phi)), gap]],
    )
    return 0


def sweep_rows(ch: ChannelRealization, snr_grid):
    """One row per dB grid point: capacity, masked rate, asymptote, gap."""
    asym = high_snr_asymptote(ch)
    rows = []
    for snr in snr_grid:
        P = snr_db_to_power(snr)
        cap = secrecy_capacity(P, ch).capacity_bits
        rmb = masked_beamforming_rate(P, ch)
        if asym.regime == REGIME_LOG_GROWTH:
            a = math.log2(P) + asym.offset_bits
        else:
            a = asym.limit_bits
        rows.append([snr, cap, rmb, a, cap - rmb])
    return rows


SWEEP_HEADER = ["snr_db", "capacity_bits", "rmb_bits", "asymptote_bits",
                "gap_bits"]


def run_sweep(ch: ChannelRealization, snr_grid, out=None) -> int:
    _emit_csv(out, SWEEP_HEADER, sweep_rows(ch, snr_grid))
    return 0


def _cmd_sweep(args) -> int:
    ch = _load_channel(args)
    grid = _parse_snr_spec(args.snr_db)
    return run_sweep(ch, grid, args.out)


SCALING_HEADER = ["beta", "gamma", "xi_lower_bits", "infinite_snr_bits",
                  "mc_mean_bits", "mc_stderr"]


def scaling_rows(betas, gammas, n_t, trials, seed):
    rows = []
    for beta in betas:
        inf_bits = (
            asymptotic_capacity_infinite_snr(beta) if beta > 0 else math.inf
        )
        for gamma in gammas:
            run = monte_carlo_scaled_capacity(
                EnsembleSpec(n_t=n_t, beta=beta, gamma=gamma, trials=trials,
                             seed=seed)
            )
            rows.append([
                beta, gamma,
                scaled_capacity_lower_bound(gamma, beta),
                inf_bits,
                run.capacity.mean,
                run.capacity.std_error,
            ])
    return rows


def run_scaling(betas, gammas, n_t, trials, seed, out=None) -> int:
    _emit_csv(out, SCALING_HEADER, scaling_rows(betas, gammas, n_t, trials,
                                                seed))
    return 0


def _cmd_scaling(args) -> int:
    betas = _parse_float_list(args.beta, "--beta")
    gammas = _parse_float_list(args.gamma, "--gamma")
    return run_scaling(betas, gammas, args.nt, args.trials, args.seed,
                       args.out)


def _cmd_fstat(args) -> int:
    samples = sample_lambda_max_rayleigh(args.nt, args.ne, args.trials,
                                         args.seed)
    ks = stats.kstest(
        samples, lambda x: lambda_max_reference_cdf(x, args.nt, args.ne)
    )
    d1, d2, scale = lambda_max_f_params(args.nt, args.ne)
    _emit_csv(
        args.out,
        ["n_t", "n_e", "trials", "f_dof1", "f_dof2", "f_scale",
         "ks_statistic", "ks_p_value", "sample_median"],
        [[args.nt, args.ne, args.trials, d1, d2, scale,
          float(ks.statistic), float(ks.pvalue), float(np.median(samples))]],
    )
    return 0


def _cmd_fading(args) -> int:
    if (args.ne is None) == (args.beta is None):
        raise ValueError("give exactly one of --ne or --beta")
    if args.ne is not None:
        n_e = args.ne
    else:
        n_e = int(math.floor(float(args.beta) * args.nt + 0.5))
    snr = _single_snr(args)
    P = snr_db_to_power(snr)
    allocations = [("constant", PowerAllocation.constant(P))]
    if args.bins > 1:
        allocations.append((
            "binned",
            optimize_allocation(args.nt, n_e, P, args.bins, args.trials,
                                args.seed),
        ))
    rows = []
    for label, alloc in allocations:
        rep = expected_bounds(args.nt, n_e, P, alloc, args.trials, args.seed)
        rows.append([
            args.nt, n_e, snr, P, args.bins, args.trials, label,
            rep.lower_bits, rep.std_error_lower,
            rep.upper_bits, rep.std_error_upper,
        ])
    _emit_csv(
        args.out,
        ["n_t", "n_e", "snr_db", "p_linear", "bins", "trials", "allocation",
         "lower_bits", "std_error_lower", "upper_bits", "std_error_upper"],
        rows,
    )
    return 0


EXAMPLE_RATES_NAME = "example_rates.csv"
EXAMPLE_SCALING_NAME = "example_scaling.csv"


def run_example(out_dir) -> list:
    """Write the bundled example datasets and return the file paths.

    ``example_rates.csv`` tabulates capacity, masked beamforming rate,
    and the high-SNR asymptote over -10..40 dB for the example channel
    with one and with two eavesdropper rows.  ``example_scaling.csv``
    tabulates the large-system bounds over the antenna ratio for several
    received SNR values.  Output is deterministic, so reruns are
    byte-identical.
    """
    out_dir = Path(out_dir)
    if not out_dir.is_dir():
        raise ValueError(f"output directory {out_dir} does not exist")
    grid = [float(db) for db in range(-10, 41)]
    rate_rows = []
    for n_e in (1, 2):
        ch = example_channel(n_e)
        for row in sweep_rows(ch, grid):
            rate_rows.append([row[0], n_e, row[1], row[2], row[3]])
    rates_path = out_dir / EXAMPLE_RATES_NAME
    _emit_csv(
        rates_path,
        ["snr_db", "n_e", "capacity_bits", "rmb_bits", "asymptote_bits"],
        rate_rows,
    )

    betas = [round(0.05 * k, 2) for k in range(1, 61)]
    gammas = [1.0, 10.0, 100.0, 1000.0]
    scale_rows = []
    for beta in betas:
        inf_bits = asymptotic_capacity_infinite_snr(beta)
        for gamma in gammas:
            scale_rows.append([
                beta, gamma,
                scaled_capacity_lower_bound(gamma, beta),
                inf_bits,
            ])
    scaling_path = out_dir / EXAMPLE_SCALING_NAME
    _emit_csv(
        scaling_path,
        ["beta", "gamma", "xi_lower_bits", "infinite_snr_bits"],
        scale_rows,
    )
    return [rates_path, scaling_path]


def _cmd_example(args) -> int:
    for path in run_example(args.out):
        print(path)
    return 0


def _add_channel_args(p):
    p.add_argument("--channel", metavar="FILE",
                   help="channel file (see README for the format)")
    p.add_argument("--hr", metavar="LITERALS",
                   help="inline receiver gains, e.g. '1+0i 0.5-0.1i'")
    p.add_argument("--he", metavar="ROWS",
                   help="inline eavesdropper rows separated by ';'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="misome",
        description="Secrecy rates for multi-antenna wiretap channels "
                    "with a single-antenna receiver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="exact secrecy capacity at one SNR")
    _add_channel_args(p)
    p.add_argument("--snr-db", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("mb-rate",
                       help="masked beamforming rate and gap bracket")
    _add_channel_args(p)
    p.add_argument("--snr-db", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_mb_rate)

    p = sub.add_parser("asymptote", help="high and low SNR behavior")
    _add_channel_args(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_asymptote)

    p = sub.add_parser("certificate",
                       help="converse certificate and its verified gap")
    _add_channel_args(p)
    p.add_argument("--snr-db", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_certificate)

    p = sub.add_parser("sweep", help="rates over a dB grid as CSV")
    _add_channel_args(p)
    p.add_argument("--snr-db", required=True, metavar="START:STOP:STEP")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("scaling",
                       help="large-system bounds and Monte Carlo means")
    p.add_argument("--beta", required=True, metavar="LIST")
    p.add_argument("--gamma", required=True, metavar="LIST")
    p.add_argument("--nt", type=int, default=64)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_scaling)

    p = sub.add_parser("fstat",
                       help="top-eigenvalue samples against the F law")
    p.add_argument("--nt", type=int, required=True)
    p.add_argument("--ne", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fstat)

    p = sub.add_parser("fading", help="ergodic fading bounds")
    p.add_argument("--nt", type=int, required=True)
    p.add_argument("--ne", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--snr-db", required=True)
    p.add_argument("--bins", type=int, default=1)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fading)

    p = sub.add_parser("example", help="write the bundled example datasets")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=_cmd_example)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # single-line diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
