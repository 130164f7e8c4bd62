"""Command-line interface.

Powers are given in dB, times in ms and speeds in km/h; they are converted
to linear/SI values once, here.  Exit status is 0 on success, 1 on a
numeric or I/O failure and 2 on a usage error.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from . import __version__
from .channel import PilotSimConfig, SelfInterferenceParams, simulate_pilot_sinr
from .errors import ConfigurationError, ConvergenceError, DomainError, InfeasibleTargetError
from .metrics import LinkStatistics, RateAdaptParams, average_effective_rate, outage_probability, rate
from .montecarlo import McConfig, agreement_grid, stream
from .scenario import SweepPointError, default_scenario, figure_preset, load_config, run_sweep
from .schemes import budget_for, scheme_throughput
from .svg import render_svg
from .units import db_to_linear, ms_to_s

AXIS_LABELS = {
    "inr_db": "Residual self-interference INR [dB]",
    "speed_kmh": "UE speed [km/h]",
    "rho_tilde": "Channel autocorrelation",
}
PASS_FRACTION = 0.99


class UsageError(Exception):
    pass


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _fmt(x):
    return format(x, ".6g")


def _add_output(p, formats=("csv", "svg")):
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=formats, default=formats[0])


def _add_mc(p):
    p.add_argument("--mc", action="store_true", help="add Monte Carlo columns")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--samples", type=_positive_int, default=1_000_000)
    p.add_argument("--workers", type=_positive_int, default=1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fdcsi",
        description="Outage and throughput of rate adaptation with delayed, noisy CSIT.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("pout", help="average outage probability (closed form)")
    p.add_argument("--rho-tilde", type=float, required=True)
    p.add_argument("--sigma-e-sq", type=float, default=0.0)
    p.add_argument("--delta-db", type=float, required=True)

    p = sub.add_parser("rate", help="rate selected for an estimated SNR [nats/symbol]")
    p.add_argument("--gamma-hat", type=float, required=True)
    p.add_argument("--snr-db", type=float, default=5.0)
    p.add_argument("--delta-db", type=float, required=True)
    p.add_argument("--gap-db", type=float, default=1.0)

    p = sub.add_parser("ase", help="average effective rate [nats/symbol]")
    p.add_argument("--rho-tilde", type=float, required=True)
    p.add_argument("--sigma-e-sq", type=float, default=0.0)
    p.add_argument("--delta-db", type=float, required=True)
    p.add_argument("--snr-db", type=float, default=5.0)
    p.add_argument("--gap-db", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("throughput", help="throughput report for one scheme")
    p.add_argument("--scheme", required=True, help="PCSI, PROBE, FDCSI, FDDATA or FDDATA@<kappa>")
    p.add_argument("--snr-ul-db", type=float)
    p.add_argument("--snr-dl-db", type=float)
    p.add_argument("--inr-db", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--t-min-ms", type=float)
    p.add_argument("--t-pr-ms", type=float)
    p.add_argument("--c-e", type=float)
    p.add_argument("--speed-kmh", type=float)
    p.add_argument("--carrier-ghz", type=float)
    p.add_argument("--delta-db", type=float, help="default: the scheme's standard backoff")
    p.add_argument("--gap-db", type=float)

    p = sub.add_parser("sweep", help="run a JSON scenario file")
    p.add_argument("--config", required=True)
    _add_mc(p)
    _add_output(p)

    p = sub.add_parser("figure", help="run a figure preset")
    p.add_argument("figure", choices=("fig2", "fig3", "fig4"))
    _add_mc(p)
    _add_output(p)

    p = sub.add_parser("mc-validate", help="Monte Carlo agreement on the 36-cell grid")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--samples", type=_positive_int, default=1_000_000)
    p.add_argument("--snr-db", type=float, default=5.0)
    p.add_argument("--gap-db", type=float, default=1.0)
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("pilot-sim", help="symbol-level full-duplex pilot SINR")
    p.add_argument("--snr-dl-db", type=float, default=5.0)
    p.add_argument("--inr-db", type=float, default=0.0)
    p.add_argument("--n-bs", type=_positive_int, default=1)
    p.add_argument("--pilot-len", type=_positive_int, default=16)
    p.add_argument("--target-bs", type=_positive_int, default=1)
    p.add_argument("--blocks", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_u64, default=0)
    return parser


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _cmd_pout(args):
    stats = LinkStatistics(args.rho_tilde, args.sigma_e_sq)
    print(_fmt(outage_probability(stats, db_to_linear(args.delta_db))))


def _cmd_rate(args):
    p = RateAdaptParams.from_db(args.snr_db, args.delta_db, args.gap_db)
    if args.gamma_hat < 0:
        raise DomainError("gamma-hat must be non-negative")
    print(_fmt(float(rate(args.gamma_hat, p))))


def _cmd_ase(args):
    if not args.tol > 0:
        raise DomainError("tol must be positive")
    stats = LinkStatistics(args.rho_tilde, args.sigma_e_sq)
    p = RateAdaptParams.from_db(args.snr_db, args.delta_db, args.gap_db)
    print(_fmt(average_effective_rate(p, stats, args.tol)))


def _cmd_throughput(args):
    cfg = default_scenario()
    budget, fading = cfg.budget, cfg.fading
    overrides = {
        "snr_ul": None if args.snr_ul_db is None else db_to_linear(args.snr_ul_db),
        "snr_dl": None if args.snr_dl_db is None else db_to_linear(args.snr_dl_db),
        "inr": None if args.inr_db is None else db_to_linear(args.inr_db),
        "kappa": args.kappa,
        "t_min_s": None if args.t_min_ms is None else ms_to_s(args.t_min_ms),
        "t_pr_s": None if args.t_pr_ms is None else ms_to_s(args.t_pr_ms),
        "c_e": args.c_e,
    }
    budget = replace(budget, **{k: v for k, v in overrides.items() if v is not None})
    if args.speed_kmh is not None:
        fading = replace(fading, speed_kmh=args.speed_kmh)
    if args.carrier_ghz is not None:
        fading = replace(fading, carrier_hz=args.carrier_ghz * 1e9)
    tag, budget = budget_for(args.scheme, budget)
    delta_db = cfg.delta_db[tag.value] if args.delta_db is None else args.delta_db
    gap_db = cfg.gamma_gap_db if args.gap_db is None else args.gap_db
    report = scheme_throughput(tag, budget, fading, delta_db, gap_db)
    doc = {
        "scheme": args.scheme,
        "throughput_mnats_per_s": report.throughput_mnats_per_s,
        "pout": report.pout,
    }
    if report.components:
        doc["components"] = report.components
    print(json.dumps(doc, indent=2))


def _emit_sweep(cfg, args):
    if args.mc:
        cfg = cfg.with_mc(McConfig(samples=args.samples, seed=args.seed))
    elif cfg.mc is not None:
        cfg = cfg.with_mc(replace(cfg.mc, seed=args.seed, samples=args.samples))
    result = run_sweep(cfg, workers=args.workers)
    if args.format == "csv":
        _write(result.to_csv(), args.out)
        return
    if not result.rows:
        raise UsageError("nothing to plot: the scenario has no schemes")
    _write(render_svg(result, AXIS_LABELS[cfg.axis]), args.out)


def _cmd_sweep(args):
    try:
        cfg = load_config(args.config)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse {args.config}: {exc}") from exc
    _emit_sweep(cfg, args)


def _cmd_figure(args):
    _emit_sweep(figure_preset(args.figure), args)


def _cmd_mc_validate(args):
    cfg = McConfig(samples=args.samples, seed=args.seed)
    snr, gap = db_to_linear(args.snr_db), db_to_linear(args.gap_db)
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            cells = agreement_grid(cfg, snr, gap, executor=pool)
    else:
        cells = agreement_grid(cfg, snr, gap)
    passed = 0
    for c in cells:
        ok = c.pout_ok and c.eta_ok
        passed += ok
        print(
            f"{'PASS' if ok else 'FAIL'} rho_tilde={c.rho_tilde:g} sigma_e_sq={c.sigma_e_sq:g} "
            f"delta={c.delta:g} pout={_fmt(c.pout)} mc={_fmt(c.mc_pout.mean)}+-{_fmt(c.mc_pout.std_error)} "
            f"eta={_fmt(c.eta)} mc={_fmt(c.mc_eta.mean)}+-{_fmt(c.mc_eta.std_error)}"
        )
    print(f"{passed}/{len(cells)} cells agree within 3 standard errors")
    return 0 if passed >= PASS_FRACTION * len(cells) else 1


def _cmd_pilot_sim(args):
    cfg = PilotSimConfig(
        n_bs=args.n_bs,
        pilot_len=args.pilot_len,
        snr_dl_per_bs=(db_to_linear(args.snr_dl_db),) * args.n_bs,
        si=SelfInterferenceParams(db_to_linear(args.inr_db)),
    )
    sinr = simulate_pilot_sinr(cfg, args.target_bs, args.blocks, stream(args.seed))
    expected = db_to_linear(args.snr_dl_db) / (1.0 + db_to_linear(args.inr_db))
    print(f"simulated {_fmt(sinr)}")
    print(f"expected {_fmt(expected)}")


COMMANDS = {
    "pout": _cmd_pout,
    "rate": _cmd_rate,
    "ase": _cmd_ase,
    "throughput": _cmd_throughput,
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
    "mc-validate": _cmd_mc_validate,
    "pilot-sim": _cmd_pilot_sim,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = COMMANDS[args.command](args)
    except (UsageError, DomainError, ConfigurationError, InfeasibleTargetError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, SweepPointError, ArithmeticError) as exc:
        print(f"{parser.prog}: numeric failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{parser.prog}: {exc.strerror or exc}: {getattr(exc, 'filename', '')}", file=sys.stderr)
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
