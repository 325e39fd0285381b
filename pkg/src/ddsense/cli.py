"""``ddsense`` command line interface.

Exit codes: 0 success, 1 validation failure, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .fim import CrlbReport
from .output import PLOT_COLUMNS, emit_csv, emit_plot
from .sweep import ScenarioError, load_scenario, run_point, run_sweep

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


def _u64(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _load(args):
    spec = load_scenario(args.scenario)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    return spec


def cmd_crlb(args) -> int:
    spec = _load(args)
    results = run_point(spec)
    print(f"M={spec.M} N={spec.N} scs={spec.delta_f:g} Hz snr={spec.snr_db:g} dB seed={spec.seed}")
    print(f"{'scheme':<15}{'path':>5}{'crlb_tau_s2':>14}{'crlb_nu_hz2':>14}{'crlb_amp':>12}{'crlb_phase':>12}{'cond':>11}")
    code = EXIT_OK
    for scheme, res in results.items():
        if isinstance(res, CrlbReport):
            for p, tau, nu, amp, ph in res.rows():
                print(f"{scheme.value:<15}{p:>5}{tau:>14.4e}{nu:>14.4e}{amp:>12.3e}{ph:>12.3e}{res.condition:>11.2e}")
        else:
            print(f"{scheme.value:<15}  error: {res}")
            is_numeric = isinstance(res, np.linalg.LinAlgError)
            code = max(code, EXIT_NUMERIC if is_numeric else EXIT_INVALID)
    return code


def cmd_sweep(args) -> int:
    spec = _load(args)
    if spec.axis is None:
        print("scenario has no sweep axis; use 'ddsense crlb' for a single point", file=sys.stderr)
        return EXIT_INVALID
    rows = run_sweep(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = spec.output or Path(args.scenario).stem
    csv_path = emit_csv(rows, out / f"{stem}.csv")
    print(f"wrote {csv_path} ({len(rows)} rows)")
    if args.plot:
        for column in args.plot:
            svg = emit_plot(rows, out / f"{stem}_{column}.svg", column)
            print(f"wrote {svg}")
    failed = sum(1 for r in rows if r.error)
    if failed:
        print(f"{failed} row(s) carry errors", file=sys.stderr)
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_selfcheck

    return EXIT_OK if run_selfcheck() else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ddsense", description="Delay/Doppler CRLBs for OFDM and OTFS.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crlb", help="evaluate one scenario point and print a table")
    p.add_argument("scenario", help="scenario JSON file, or fig1/fig2/fig3")
    p.add_argument("--seed", type=_u64)
    p.set_defaults(func=cmd_crlb)

    p = sub.add_parser("sweep", help="run a sweep and write CSV (and SVG) output")
    p.add_argument("scenario", help="scenario JSON file, or fig1/fig2/fig3")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--plot", nargs="*", choices=PLOT_COLUMNS, default=None,
                   help="also draw SVG charts (default columns: crlb_tau_s2 crlb_nu_hz2)")
    p.add_argument("--seed", type=_u64)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selfcheck", help="oracle equivalence and finite-difference checks")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    if getattr(args, "plot", None) == []:
        args.plot = ["crlb_tau_s2", "crlb_nu_hz2"]
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
