"""Command-line front end: figure sweeps and the acceptance suite."""

import argparse
import sys

from .errors import AccuracyError, ParameterError
from .sweeps import SweepSpec, emit_outputs, run_sweep


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}") from None


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}") from None


def _common(sp, default_paths):
    sp.add_argument("--paths", default=default_paths,
                    help="comma list of analytic,quadrature,asymptotic,mc,printed,oracle")
    sp.add_argument("--mc", action="store_true", help="add the Monte-Carlo path")
    sp.add_argument("--mc-samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=".", help="output directory")
    sp.add_argument("--stem", default=None, help="output file stem (default: command name)")
    sp.add_argument("--format", default="csv,json", help="comma list of csv,json")
    sp.add_argument("--no-plot", action="store_true", help="skip the gnuplot script")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="flucnak",
        description="Effective capacity and Laplacian-noise SER over fluctuating Nakagami-m fading",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ec-vs-snr", help="EC against mean SNR")
    sp.add_argument("--m", type=_floats, default=[2.0, 4.0])
    sp.add_argument("--ms", type=_floats, default=[4.0, 6.0])
    sp.add_argument("--A", type=_floats, default=[1.0])
    sp.add_argument("--snr-db", default="0:30:2")
    _common(sp, "analytic,asymptotic")

    sp = sub.add_parser("ec-vs-delay", help="EC against the delay exponent A")
    sp.add_argument("--m", type=_floats, default=[2.0, 4.0])
    sp.add_argument("--ms", type=_floats, default=[4.0, 6.0])
    sp.add_argument("--A-range", default="0.5:10:0.5")
    sp.add_argument("--snr-db", type=float, default=10.0)
    _common(sp, "analytic")

    sp = sub.add_parser("ec-vs-theta", help="EC against the QoS exponent theta")
    sp.add_argument("--m", type=float, default=2.0)
    sp.add_argument("--ms", type=float, default=4.0)
    sp.add_argument("--theta-log10", default="-3:0:0.25", help="range of log10(theta)")
    sp.add_argument("--TB", type=float, default=1.0, help="frame time x bandwidth")
    sp.add_argument("--snr-db", type=_floats, default=[5.0, 10.0, 15.0])
    _common(sp, "analytic")

    sp = sub.add_parser("ec-low-snr", help="low-SNR EC against Eb/N0")
    sp.add_argument("--m", type=float, default=2.0)
    sp.add_argument("--ms", type=float, default=3.0)
    sp.add_argument("--A", type=_floats, default=[1.0, 5.0])
    sp.add_argument("--ebn0-db", default="-1.5:6:0.5")
    _common(sp, "analytic")

    sp = sub.add_parser("ser-mpsk", help="average M-PSK SER against mean SNR")
    sp.add_argument("--m", type=float, default=2.5)
    sp.add_argument("--ms", type=float, default=2.5)
    sp.add_argument("--M", type=_ints, default=[8, 16, 32])
    sp.add_argument("--snr-db", default="0:30:2")
    _common(sp, "analytic,asymptotic")

    sp = sub.add_parser("ser-bpsk-compare", help="BPSK SER, Laplacian against Gaussian noise")
    sp.add_argument("--m", type=float, default=0.75)
    sp.add_argument("--ms", type=float, default=2.5)
    sp.add_argument("--snr-db", default="0:30:2")
    _common(sp, "analytic,asymptotic")

    sp = sub.add_parser("verify", help="run the acceptance criteria")
    sp.add_argument("--quick", action="store_true", help="reduced grids and sample counts")
    sp.add_argument("--criteria", type=_ints, default=None, help="comma list of criterion numbers")
    return ap


def _spec(args):
    c = args.command
    if c == "ec-vs-snr":
        params = {"m": args.m, "m_s": args.ms, "A": args.A, "snr_db": args.snr_db}
    elif c == "ec-vs-delay":
        params = {"m": args.m, "m_s": args.ms, "A_range": args.A_range, "snr_db": args.snr_db}
    elif c == "ec-vs-theta":
        params = {"m": args.m, "m_s": args.ms, "theta": args.theta_log10, "theta_log": True,
                  "TB": args.TB, "snr_db_list": args.snr_db}
    elif c == "ec-low-snr":
        params = {"m": args.m, "m_s": args.ms, "A": args.A, "ebn0_db": args.ebn0_db}
    elif c == "ser-mpsk":
        params = {"m": args.m, "m_s": args.ms, "M": args.M, "snr_db": args.snr_db}
    else:
        params = {"m": args.m, "m_s": args.ms, "snr_db": args.snr_db}
    paths = [p.strip() for p in args.paths.split(",") if p.strip()]
    if args.mc and "mc" not in paths:
        paths.append("mc")
    return SweepSpec(c, params, tuple(paths), args.seed, args.mc_samples)


def _verify(args):
    from .acceptance import format_result, run_criteria

    ok = True
    for res in run_criteria(quick=args.quick, which=args.criteria):
        print(format_result(res), flush=True)
        ok &= res.passed
    return 0 if ok else 1


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        spec = _spec(args)
        result = run_sweep(spec)
        formats = [f.strip() for f in args.format.split(",") if f.strip()]
        bad = [f for f in formats if f not in ("csv", "json")]
        if bad:
            raise ParameterError(f"unknown output format(s) {bad}")
        files = emit_outputs(result, args.out, args.stem or args.command, formats, not args.no_plot)
    except ParameterError as exc:
        ap.print_usage(sys.stderr)
        print(f"flucnak: error: {exc}", file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print(f"flucnak: accuracy failure: {exc}", file=sys.stderr)
        return 1
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
