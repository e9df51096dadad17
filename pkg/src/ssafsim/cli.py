"""Command-line front end: sweeps, analytical curves and CSV output.

Configuration comes from flags plus an optional JSON config file
(--config); explicit flags override file entries.  All CSV output uses
period decimal separators and full-precision shortest-round-trip floats,
so reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import dmt, montecarlo
from .cbc_ssaf import overhead_fraction
from .channel import SnrPoint
from .errors import ConfigurationError, EstimationError, NumericDomainError

_OUTAGE_HEADER = "strategy,size,receiver_l,snr_db,rate_bpcu,trials,failures,p_hat,ci_low,ci_high,seed"
_DMT_HEADER = "r,d_miso,d_cbc_ssaf_lb,d_cma_ssaf,d_direct"
_EXPONENT_HEADER = "model,size,receiver_l,r,d_o_numeric,d_bound,gap"
_OVERHEAD_HEADER = "n_dest,probe_len,feedback_len,data_slot_len,overhead_fraction"


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(float(x))  # builtin-float repr: shortest round-trip decimal
    return str(x)


def _parse_grid(text: str) -> list[float]:
    """Comma list ('10,15,20') or inclusive range ('10:25:5')."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError(f"range syntax is start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigurationError("range step must be positive")
        values = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + 1e-9:
                break
            values.append(v)
            k += 1
        return values
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _resolve_strategy(strategy: str, mode: str) -> str:
    if strategy in ("cbc-ssaf-isolated", "cbc-ssaf-exact", "cma-ssaf", "direct"):
        return strategy
    if strategy == "cbc-ssaf":
        return f"cbc-ssaf-{mode}"
    raise ConfigurationError(f"unknown strategy {strategy!r}")


def _write_lines(path: str, lines: list[str]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_outage(args) -> None:
    strategy = _resolve_strategy(args.strategy, args.mode)
    snr_grid = tuple(SnrPoint.from_db(db) for db in _parse_grid(args.snr_db))
    rate_grid = tuple(_parse_grid(args.rate))
    size = args.size if strategy != "direct" else 1
    receiver_l = args.receiver_l
    if strategy.startswith("cbc") and receiver_l is None:
        receiver_l = montecarlo.default_receiver(strategy, size)
    if not strategy.startswith("cbc") and receiver_l is not None:
        raise ConfigurationError("--receiver-l only applies to CBC strategies")
    spec = montecarlo.SweepSpec(
        strategy=strategy,
        size=size,
        snr_grid=snr_grid,
        rate_grid=rate_grid,
        trials=args.trials,
        master_seed=args.seed,
        receiver_l=receiver_l,
        confidence=args.confidence,
        reciprocal=args.reciprocal,
        crn=args.crn,
        workers=args.workers,
    )
    results = montecarlo.run_sweep(spec)
    seeds = {
        (snr.rho_db, rate): montecarlo.point_seed(args.seed, i, j, args.crn)
        for i, snr in enumerate(snr_grid)
        for j, rate in enumerate(rate_grid)
    }
    lines = [_OUTAGE_HEADER]
    for (snr_db, rate) in sorted(results):
        est = results[(snr_db, rate)]
        lines.append(
            ",".join(
                [
                    strategy,
                    str(size),
                    "" if receiver_l is None else str(receiver_l),
                    _fmt(float(snr_db)),
                    _fmt(float(rate)),
                    str(est.trials),
                    str(est.failures),
                    _fmt(est.p_hat),
                    _fmt(est.ci_low),
                    _fmt(est.ci_high),
                    str(seeds[(snr_db, rate)]),
                ]
            )
        )
    _write_lines(args.out, lines)


def cmd_dmt(args) -> None:
    r_grid = _parse_grid(args.r_grid)
    n = args.size
    lines = [_DMT_HEADER]
    for r in sorted(r_grid):
        lines.append(
            ",".join(
                [
                    _fmt(float(r)),
                    _fmt(dmt.miso_bound(n, r)),
                    _fmt(dmt.cbc_ssaf_lower_bound(n, r)),
                    _fmt(dmt.cma_ssaf_dmt(n, r)),
                    _fmt(dmt.direct_dmt(r)),
                ]
            )
        )
    _write_lines(args.out, lines)


def cmd_exponent(args) -> None:
    r_grid = _parse_grid(args.r_grid)
    size = args.size
    lines = [_EXPONENT_HEADER]
    if args.model == "cbc":
        receiver_l = args.receiver_l if args.receiver_l is not None else math.ceil(size / 2)
    else:
        receiver_l = None
    for r in sorted(r_grid):
        if args.model == "cbc":
            numeric = dmt.cbc_outage_exponent(size, receiver_l, r).d_o
            bound = dmt.cbc_ssaf_lower_bound(size, r)
        else:
            numeric = dmt.cma_outage_exponent(size, r).d_o
            bound = dmt.cma_ssaf_dmt(size, r)
        lines.append(
            ",".join(
                [
                    args.model,
                    str(size),
                    "" if receiver_l is None else str(receiver_l),
                    _fmt(float(r)),
                    _fmt(numeric),
                    _fmt(bound),
                    _fmt(numeric - bound),
                ]
            )
        )
    _write_lines(args.out, lines)


def cmd_overhead(args) -> None:
    frac = overhead_fraction(args.size, args.probe_len, args.feedback_len, args.data_slot_len)
    lines = [
        _OVERHEAD_HEADER,
        ",".join(
            [
                str(args.size),
                _fmt(float(args.probe_len)),
                _fmt(float(args.feedback_len)),
                _fmt(float(args.data_slot_len)),
                _fmt(frac),
            ]
        ),
    ]
    _write_lines(args.out, lines)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssafsim",
        description="Outage and DMT analysis for sequential slotted amplify-and-forward cooperation.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file; flags override its entries")
        p.add_argument("--out", help="output CSV path")

    p_out = sub.add_parser("outage", help="Monte Carlo outage sweep")
    add_common(p_out)
    p_out.add_argument("--strategy", help="direct | cma-ssaf | cbc-ssaf[-isolated|-exact]")
    p_out.add_argument("--size", type=int, help="N destinations (CBC) or M sources (CMA)")
    p_out.add_argument("--receiver-l", type=int, dest="receiver_l",
                       help="CBC receiver position (default ceil(N/2))")
    p_out.add_argument("--snr-db", dest="snr_db", help="comma list or start:stop:step, in dB")
    p_out.add_argument("--rate", help="comma list of BPCU rates")
    p_out.add_argument("--trials", type=int, help="Monte Carlo trials per grid point")
    p_out.add_argument("--seed", type=int, help="64-bit master seed")
    p_out.add_argument("--confidence", type=float, help="Wilson interval confidence (default 0.95)")
    p_out.add_argument("--workers", type=int, help="worker threads (default: all cores)")
    p_out.add_argument("--mode", choices=("isolated", "exact"),
                       help="CBC effective-channel mode (default isolated)")
    p_out.add_argument("--reciprocal", action=argparse.BooleanOptionalAction, default=None,
                       help="force channel reciprocity on/off (default: CBC on, CMA off)")
    p_out.add_argument("--crn", action="store_true", default=None,
                       help="common random numbers across grid points")
    p_out.set_defaults(func=cmd_outage)

    p_dmt = sub.add_parser("dmt", help="analytical DMT curves")
    add_common(p_dmt)
    p_dmt.add_argument("--size", type=int, help="number of cooperating users")
    p_dmt.add_argument("--r-grid", dest="r_grid", help="comma list or start:stop:step of r values")
    p_dmt.set_defaults(func=cmd_dmt)

    p_exp = sub.add_parser("exponent", help="numerical outage-set exponents vs bounds")
    add_common(p_exp)
    p_exp.add_argument("--model", choices=("cbc", "cma"), help="which outage set to minimize")
    p_exp.add_argument("--size", type=int, help="N (cbc) or M (cma)")
    p_exp.add_argument("--receiver-l", type=int, dest="receiver_l",
                       help="CBC receiver position (default ceil(N/2))")
    p_exp.add_argument("--r-grid", dest="r_grid", help="comma list or start:stop:step of r values")
    p_exp.set_defaults(func=cmd_exponent)

    p_ovh = sub.add_parser("overhead", help="scheduling overhead accounting")
    add_common(p_ovh)
    p_ovh.add_argument("--size", type=int, help="number of destinations N")
    p_ovh.add_argument("--probe-len", type=float, dest="probe_len")
    p_ovh.add_argument("--feedback-len", type=float, dest="feedback_len")
    p_ovh.add_argument("--data-slot-len", type=float, dest="data_slot_len")
    p_ovh.set_defaults(func=cmd_overhead)

    return parser


_DEFAULTS = {
    "outage": {
        "strategy": None, "size": 2, "receiver_l": None, "snr_db": None, "rate": None,
        "trials": 10000, "seed": 0, "confidence": 0.95, "workers": os.cpu_count() or 1,
        "mode": "isolated", "reciprocal": None, "crn": False,
    },
    "dmt": {"size": None, "r_grid": "0:1:0.05"},
    "exponent": {"model": None, "size": None, "receiver_l": None, "r_grid": "0:1:0.05"},
    "overhead": {"size": None, "probe_len": None, "feedback_len": None, "data_slot_len": None},
}
_REQUIRED = {
    "outage": ("strategy", "snr_db", "rate", "out"),
    "dmt": ("size", "out"),
    "exponent": ("model", "size", "out"),
    "overhead": ("size", "probe_len", "feedback_len", "data_slot_len", "out"),
}


def _merge_config(args) -> None:
    file_cfg = {}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise ConfigurationError("config file must contain a JSON object")
    for key, value in file_cfg.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise ConfigurationError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, value)
    for key, default in _DEFAULTS.get(args.subcommand, {}).items():
        if getattr(args, key, None) is None:
            setattr(args, key, default)
    missing = [k for k in _REQUIRED[args.subcommand] if getattr(args, k, None) is None]
    if missing:
        raise ConfigurationError(
            f"missing required options for {args.subcommand}: "
            + ", ".join("--" + m.replace("_", "-") for m in missing)
        )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        args.func(args)
    except (ConfigurationError, NumericDomainError, EstimationError, OSError, json.JSONDecodeError) as exc:
        print(f"ssafsim: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
