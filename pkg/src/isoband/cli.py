"""Command-line front door: fitting, bands, norm checks, density, simulation.

File conventions: sequences are CSV with one numeric value per line;
band-like outputs are CSV with a header row.  Floats are written with
round-trip-exact ``repr`` formatting.  Exit codes: 0 success, 1 property
violation found (check-norm), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .bands import (
    Band,
    adaptive_band,
    backbone_band_from_y,
    estimate_sigma,
    theoretical_error_envelope,
)
from .density import grenander_band, grenander_fit
from .exceptions import IsobandError
from .isotonic import pava
from .norms import (
    PsiSpec,
    builtin_norm,
    check_contraction,
    counterexample_from_nuna,
    check_nuna,
    default_contraction_pairs,
    default_nuna_samples,
    validate_psi,
)
from .sim import (
    PiecewiseSignalSpec,
    coverage_shrink_factor,
    run_trials_grid,
    slope_experiment,
    write_region_summary_csv,
    write_trials_json,
)


class CliError(Exception):
    """Usage or input error; maps to exit code 2."""


def _read_sequence(path: str) -> np.ndarray:
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot open input file {path}: {exc.strerror}") from None
    values = []
    with fh:
        for line_no, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise CliError(
                    f"{path}: line {line_no}: not a number: {text!r}"
                ) from None
    if not values:
        raise CliError(f"{path}: empty input, need one value per line")
    return np.asarray(values, dtype=np.float64)


def _open_output(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_lines(path: str | None, lines) -> None:
    fh, close = _open_output(path)
    try:
        for line in lines:
            fh.write(line)
            fh.write("\n")
    finally:
        if close:
            fh.close()


def _check_delta_arg(delta: float) -> float:
    if not 0.0 < delta < 1.0:
        raise CliError(f"--delta must lie in (0, 1), got {delta}")
    return float(delta)


def _resolve_threads() -> int | None:
    raw = os.environ.get("ISOBAND_THREADS")
    if raw is None:
        return None
    try:
        workers = int(raw)
    except ValueError:
        raise CliError(f"ISOBAND_THREADS must be an integer, got {raw!r}") from None
    return max(1, workers)


def cmd_fit(args) -> int:
    y = _read_sequence(args.input)
    fit = pava(y)
    if args.format == "json":
        _write_lines(
            args.output,
            [
                json.dumps(
                    {
                        "fitted": [float(v) for v in fit.fitted],
                        "blocks": [[s, e, lvl] for s, e, lvl in fit.blocks],
                        "df": fit.df,
                    }
                )
            ],
        )
    else:
        _write_lines(args.output, (repr(float(v)) for v in fit.fitted))
        print(f"df={fit.df} blocks={len(fit.blocks)}", file=sys.stderr)
    return 0


def _load_psi(args, n: int) -> PsiSpec:
    if args.psi == "custom":
        if not args.psi_file:
            raise CliError("--psi custom requires --psi-file")
        values = _read_sequence(args.psi_file)
        if values.shape[0] < n:
            raise CliError(
                f"--psi-file provides {values.shape[0]} weights, need {n}"
            )
        psi = PsiSpec(values)
        report = validate_psi(psi)
        if not report.ok:
            raise CliError(
                "invalid psi: "
                f"monotone violation at {report.monotone_violation}, "
                f"concavity violation at {report.concavity_violation}"
            )
        return psi
    if args.psi == "const":
        return PsiSpec.constant(n)
    return PsiSpec.sqrt(n)


def cmd_band(args) -> int:
    y = _read_sequence(args.input)
    n = y.shape[0]
    delta = _check_delta_arg(args.delta)
    fit = pava(y)
    if args.sw_bound is not None:
        # deterministic backbone with an explicit sliding-window bound
        if args.sw_bound < 0:
            raise CliError("--sw-bound must be >= 0")
        band = backbone_band_from_y(fit, args.sw_bound, _load_psi(args, n))
        if args.eps_iso:
            band = Band(
                lower=band.lower - args.eps_iso,
                upper=band.upper + args.eps_iso,
                eps_iso=args.eps_iso,
            )
    else:
        if args.psi != "sqrt":
            raise CliError("statistical bands fix psi to sqrt; use --sw-bound for other psi")
        if args.sigma is None:
            method = args.sigma_method.replace("-", "_")
            sigma = estimate_sigma(y, method=method, c1=args.c1).sigma_hat
            if sigma <= 0.0:
                raise CliError("estimated sigma is zero; pass --sigma explicitly")
        else:
            sigma = args.sigma
            if sigma <= 0.0:
                raise CliError("--sigma must be > 0")
        band = adaptive_band(y, sigma, delta, eps_iso=args.eps_iso)
    crossings = band.crossings()
    if crossings.size:
        print(
            f"warning: envelopes cross at {crossings.size} indices "
            f"(first at {int(crossings[0])})",
            file=sys.stderr,
        )
    if args.format == "json":
        payload = {
            "lower": [float(v) for v in band.lower],
            "fitted": [float(v) for v in fit.fitted],
            "upper": [float(v) for v in band.upper],
            "sigma": band.sigma,
            "delta": band.delta,
            "eps_iso": band.eps_iso,
            "target": band.target,
        }
        _write_lines(args.output, [json.dumps(payload)])
    else:
        rows = ["index,lower,fitted,upper"]
        for k in range(n):
            rows.append(
                f"{k},{float(band.lower[k])!r},{float(fit.fitted[k])!r},{float(band.upper[k])!r}"
            )
        _write_lines(args.output, rows)
    return 0


def cmd_envelope(args) -> int:
    x = _read_sequence(args.input)
    delta = _check_delta_arg(args.delta)
    if args.sigma < 0:
        raise CliError("--sigma must be >= 0")
    neg, pos = theoretical_error_envelope(
        x, args.sigma, delta, from_signal=args.from_signal, eps=args.eps_iso
    )
    if args.format == "json":
        _write_lines(
            args.output,
            [json.dumps({"lower_dev": list(map(float, neg)),
                         "upper_dev": list(map(float, pos))})],
        )
    else:
        rows = ["index,lower_dev,upper_dev"]
        rows.extend(
            f"{k},{float(neg[k])!r},{float(pos[k])!r}" for k in range(x.shape[0])
        )
        _write_lines(args.output, rows)
    return 0


def cmd_check_norm(args) -> int:
    try:
        norm = builtin_norm(args.norm)
    except IsobandError as exc:
        raise CliError(str(exc)) from None
    rng = np.random.default_rng(args.seed)
    samples = default_nuna_samples(rng, gaussian_per_size=args.samples_per_size)
    violation = check_nuna(norm, samples)
    if violation is not None:
        print(f"NUNA violation for norm {norm.name!r}:")
        print(f"  x = {violation.x.tolist()}")
        print(f"  pair index i = {violation.i}")
        print(f"  ||x|| = {violation.before!r} -> ||A_i x|| = {violation.after!r}")
        witness = counterexample_from_nuna(norm, violation)
        print("contraction counterexample:")
        print(f"  y = {witness.y.tolist()}")
        print(f"  z = {witness.z.tolist()}")
        print(f"  ||iso(z) - iso(y)|| = {witness.lhs!r} > ||z - y|| = {witness.rhs!r}")
        return 1
    pairs = default_contraction_pairs(rng, pairs_per_size=args.pairs_per_size)
    witness = check_contraction(norm, pairs)
    if witness is not None:
        print(f"contraction violation for norm {norm.name!r}:")
        print(f"  ||iso(x) - iso(y)|| = {witness.lhs!r} > ||x - y|| = {witness.rhs!r}")
        return 1
    print(f"norm {norm.name!r}: NUNA and contraction checks passed")
    return 0


def cmd_density(args) -> int:
    samples = _read_sequence(args.input)
    estimate = grenander_fit(samples)
    if args.band_c is not None:
        band = grenander_band(args.band_c, args.band_lipschitz, estimate.n,
                              _check_delta_arg(args.delta))
        if band.valid:
            print(
                f"band: margin={band.margin_delta!r} half_width={band.half_width!r}",
                file=sys.stderr,
            )
        else:
            print(
                f"band: invalid at n={estimate.n} (margin={band.margin_delta!r})",
                file=sys.stderr,
            )
    if args.format == "json":
        _write_lines(
            args.output,
            [
                json.dumps(
                    {
                        "breakpoints": [float(v) for v in estimate.breakpoints],
                        "density_values": [float(v) for v in estimate.density_values],
                    }
                )
            ],
        )
    else:
        rows = ["left,right,density"]
        bp = estimate.breakpoints
        rows.extend(
            f"{float(bp[i])!r},{float(bp[i + 1])!r},{float(estimate.density_values[i])!r}"
            for i in range(estimate.n)
        )
        _write_lines(args.output, rows)
    return 0


def cmd_simulate(args) -> int:
    delta = _check_delta_arg(args.delta)
    if args.n_values:
        n_values = [int(v) for v in args.n_values.split(",")]
    else:
        stride = 1 if args.full_grid else 30
        n_values = list(range(700, 1001, stride))
    spec = PiecewiseSignalSpec.default()
    workers = _resolve_threads()
    trials = run_trials_grid(
        spec, n_values, args.sigma, delta, args.trials, args.seed, workers
    )
    if args.trials_json:
        write_trials_json(trials, args.trials_json)
    if args.summary_csv:
        write_region_summary_csv(trials, args.summary_csv)
    coverage = float(np.mean([t.covered for t in trials]))
    print(f"trials={len(trials)} coverage={coverage!r}")
    if len(n_values) >= 2:
        flat, increasing = slope_experiment(
            spec, n_values, args.sigma, delta, args.trials, args.seed, workers
        )
        print(f"slope flat={flat.slope!r} increasing={increasing.slope!r}")
    if args.shrink_factors:
        factors = [float(v) for v in args.shrink_factors.split(",")]
        table = coverage_shrink_factor(
            spec, max(n_values), args.sigma, delta, args.trials, factors,
            args.seed, workers,
        )
        for factor, cov in table:
            print(f"shrink factor={factor!r} coverage={cov!r}")
    return 0


def cmd_sigma(args) -> int:
    y = _read_sequence(args.input)
    method = args.method.replace("-", "_")
    estimate = estimate_sigma(y, method=method, c1=args.c1)
    print(
        json.dumps(
            {
                "sigma_hat": estimate.sigma_hat,
                "method": estimate.method,
                "df_used": estimate.df_used,
                "c1": estimate.c1,
            }
        )
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoband",
        description="Isotonic regression, adaptive confidence bands and "
        "monotone density estimation over CSV files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="isotonic projection of a sequence")
    p.add_argument("input", help="CSV file, one value per line")
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("band", help="confidence band around the monotone fit")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--sigma", type=float, default=None,
                   help="noise scale; estimated from residuals when omitted")
    p.add_argument("--sigma-method", choices=("mle", "bias-corrected"), default="mle")
    p.add_argument("--c1", type=float, default=1.5)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--eps-iso", type=float, default=0.0)
    p.add_argument("--sw-bound", type=float, default=None,
                   help="deterministic mode: explicit sliding-window bound")
    p.add_argument("--psi", choices=("sqrt", "const", "custom"), default="sqrt")
    p.add_argument("--psi-file", default=None,
                   help="CSV of psi(1..n) values for --psi custom")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("envelope", help="signal-side error envelopes")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--from-signal", action="store_true",
                   help="evaluate from the raw signal, widened by its defect")
    p.add_argument("--eps-iso", type=float, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("check-norm", help="NUNA and contraction property checks")
    p.add_argument("--norm", required=True,
                   help="one of: l1, l2, linf, sw-sqrt, first-coord")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples-per-size", type=int, default=1000)
    p.add_argument("--pairs-per-size", type=int, default=250)
    p.set_defaults(func=cmd_check_norm)

    p = sub.add_parser("density", help="monotone density estimate from samples")
    p.add_argument("input", help="CSV file of samples in [0, 1], one per line")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--band-c", type=float, default=None,
                   help="density lower bound; enables the error band report")
    p.add_argument("--band-lipschitz", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("simulate", help="local-adaptivity simulation")
    p.add_argument("--n-values", default=None,
                   help="comma-separated sample sizes (default 700..1000 step 30)")
    p.add_argument("--full-grid", action="store_true",
                   help="use every n in 700..1000 instead of the strided default")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials-json", default=None, help="write per-trial JSON records")
    p.add_argument("--summary-csv", default=None, help="write the region summary CSV")
    p.add_argument("--shrink-factors", default=None,
                   help="comma-separated factors for coverage after shrinking")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sigma", help="noise-scale estimate from residuals")
    p.add_argument("input")
    p.add_argument("--method", choices=("mle", "bias-corrected"), default="mle")
    p.add_argument("--c1", type=float, default=1.5)
    p.set_defaults(func=cmd_sigma)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IsobandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
