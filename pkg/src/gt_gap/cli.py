"""Command-line front end.

Exit codes: 0 all checks passed, 1 a verification failed, 2 usage or input
error, 3 a resource limit was hit.
"""

from __future__ import annotations

import argparse
import sys

from . import certificates as cert
from .errors import GapError, InternalError, InvalidArgumentError, ParseError, ResourceLimitError
from .gowers import (
    DERIVATIVE_ORDER,
    MatrixFunction,
    constant_function,
    matrix_gowers_norm,
    random_sign_function,
    scalar_gowers_norm,
    weil_cubic_function,
)
from .groups import FiniteAbelianGroup, is_prime, make_cyclic
from .io import RecordReport, read_function, read_tensor, write_report, write_tensor
from .trilinear import ap_form, delta, embed, is_symmetric, l2_norm_sq, symmetrize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
FUNCTIONS = ("weil-cubic", "random-sign", "constant")


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return value


def _p_range(text):
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _sizes(text):
    try:
        return [int(s) for s in text.split(",") if s]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _group(text):
    try:
        return FiniteAbelianGroup.parse(text)
    except InvalidArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _common(parser):
    parser.add_argument("--seed", type=int, default=0, help="base random seed (default 0)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None, help="report path (default stdout)")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit timestamp and timings for byte-stable output")
    parser.add_argument("--tol", type=_positive_float, default=None,
                        help="override the inequality tolerance")


def _function_args(parser, default="weil-cubic"):
    parser.add_argument("--group", type=_group, default=None, help='e.g. "Z5" or "Z2xZ4"')
    parser.add_argument("--p", type=int, default=None, help="shorthand for --group Z<p>")
    parser.add_argument("--f", choices=FUNCTIONS, default=default)
    parser.add_argument("--f-file", default=None, help="scalar function JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gt-gap",
        description="Certified gaps between the jcb and symmetrized cb norms of trilinear forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", help="gap certificate for the cubic AP form on Z_p")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--p", type=int)
    which.add_argument("--p-range", type=_p_range, help="LO:HI, primes >= 5 only")
    p.add_argument("--figure", default=None, help="also render gap ratios to this image file")
    _common(p)

    p = sub.add_parser("gowers", help="Gowers U^k norm of a function")
    _function_args(p)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--d", type=int, default=1, help="evaluate as the matrix norm of f * I_d")
    _common(p)

    p = sub.add_parser("tensor", help="build or inspect an AP form tensor")
    _function_args(p)
    p.add_argument("--in", dest="infile", default=None, help="read a tensor JSON file instead")
    p.add_argument("--symmetrize", action="store_true")
    p.add_argument("--embed", type=int, default=None, help="zero-pad to this size")
    p.add_argument("--tensor-out", default=None, help="write the tensor JSON here")
    _common(p)

    p = sub.add_parser("varopoulos", help="commuting-contraction witness for a symmetric form")
    p.add_argument("--p", type=int, default=None, help="use the symmetrized cubic AP form on Z_p")
    p.add_argument("--in", dest="infile", default=None, help="symmetric tensor JSON file")
    _common(p)

    p = sub.add_parser("verify-vdc", help="randomized check of the matrix van der Corput lemma")
    p.add_argument("--group", type=_group, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--mode", choices=("unitary", "scaled-gaussian"), default="unitary")
    _common(p)

    p = sub.add_parser("verify-gvn", help="randomized check of the non-commutative gvN inequality")
    _function_args(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--mode", choices=("unitary", "scaled-gaussian"), default="unitary")
    _common(p)

    p = sub.add_parser("random-signs", help="U^k statistics of random sign functions")
    p.add_argument("--sizes", type=_sizes, default=[16, 32, 64])
    p.add_argument("--k", type=int, choices=(2, 3), default=3)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--figure", default=None, help="also render the survey to this image file")
    _common(p)
    return parser


def _resolve_function(args):
    if args.f_file:
        f = read_function(args.f_file)
        return f.group, f
    if args.group is None and args.p is None:
        raise InvalidArgumentError("give --group, --p or --f-file")
    g = args.group if args.group is not None else make_cyclic(args.p)
    if args.f == "weil-cubic":
        if g.rank != 1:
            raise InvalidArgumentError("weil-cubic needs a cyclic group Z_p")
        return g, weil_cubic_function(g.order)
    if args.f == "random-sign":
        return g, random_sign_function(g, args.seed)
    return g, constant_function(g)


def _cmd_gap(args):
    if args.p is not None:
        primes = [args.p]
    else:
        lo, hi = args.p_range
        primes = [q for q in range(max(lo, 5), hi + 1) if is_prime(q)]
        if not primes:
            raise InvalidArgumentError(f"no primes >= 5 in {lo}:{hi}")
    reports = [cert.gap_certificate(q) for q in primes]
    payload = reports[0] if args.p is not None else reports
    write_report(payload, args.format, args.out, timestamp=not args.no_timestamp)
    if args.figure:
        from .plotting import plot_gap_ratios

        plot_gap_ratios(reports, args.figure)
    return all(r.certified for r in reports)


def _cmd_gowers(args):
    g, f = _resolve_function(args)
    if args.d > 1:
        value = matrix_gowers_norm(MatrixFunction.from_scalar(f, args.d), args.k)
    else:
        value = scalar_gowers_norm(f, args.k)
    record = {"group": g.descriptor, "function": args.f_file or args.f, "k": args.k,
              "d": args.d, "derivative_order": DERIVATIVE_ORDER, "value": value}
    write_report(RecordReport(record), args.format, args.out, timestamp=not args.no_timestamp)
    return True


def _cmd_tensor(args):
    if args.infile:
        T = read_tensor(args.infile)
        source = args.infile
    else:
        g, f = _resolve_function(args)
        T = ap_form(f, g)
        source = f"ap-form({args.f}, {g.descriptor})"
    if args.symmetrize:
        T = symmetrize(T)
    if args.embed is not None:
        T = embed(T, args.embed)
    if args.tensor_out:
        write_tensor(T, args.tensor_out)
    record = {"source": source, "n": T.n, "symmetrized": args.symmetrize,
              "delta": delta(T), "l2_norm_sq": l2_norm_sq(T), "symmetric": is_symmetric(T)}
    write_report(RecordReport(record), args.format, args.out, timestamp=not args.no_timestamp)
    return True


def _cmd_varopoulos(args):
    if (args.p is None) == (args.infile is None):
        raise InvalidArgumentError("give exactly one of --p or --in")
    if args.infile:
        T = read_tensor(args.infile)
    else:
        if args.p < 5 or not is_prime(args.p):
            raise InvalidArgumentError(f"p must be a prime >= 5, got {args.p}")
        T = symmetrize(ap_form(weil_cubic_function(args.p), make_cyclic(args.p)))
    try:
        w = cert.varopoulos_witness(T)
    except InternalError as exc:
        print(f"witness check failed: {exc}", file=sys.stderr)
        return False
    passed = w.value >= w.bound - cert.WITNESS_TOL
    record = {"n": T.n, "matrix_size": w.matrices.shape[1], "delta": w.delta,
              "l2_norm_sq": l2_norm_sq(T), "bound": w.bound, "value": w.value,
              "max_norm": w.max_norm, "max_commutator": w.max_commutator, "pass": passed}
    write_report(RecordReport(record, passed), args.format, args.out,
                 timestamp=not args.no_timestamp)
    return passed


def _cmd_verify_vdc(args):
    report = cert.verify_vdc(args.group, args.d, args.s, args.trials, args.seed, args.mode,
                             tol=args.tol or cert.INEQUALITY_TOL)
    write_report(report, args.format, args.out, timestamp=not args.no_timestamp)
    return report.passed


def _cmd_verify_gvn(args):
    g, f = _resolve_function(args)
    report = cert.verify_gvn(f, g, args.d, args.trials, args.seed, args.mode,
                             tol=args.tol or cert.INEQUALITY_TOL)
    write_report(report, args.format, args.out, timestamp=not args.no_timestamp)
    return report.passed


def _cmd_random_signs(args):
    table = cert.random_sign_survey(args.sizes, args.k, args.trials, args.seed)
    write_report(table, args.format, args.out, timestamp=not args.no_timestamp)
    if args.figure:
        from .plotting import plot_survey

        plot_survey(table, args.figure)
    # the survey is exploratory: outliers are reported, not treated as failures
    return True


COMMANDS = {
    "gap": _cmd_gap,
    "gowers": _cmd_gowers,
    "tensor": _cmd_tensor,
    "varopoulos": _cmd_varopoulos,
    "verify-vdc": _cmd_verify_vdc,
    "verify-gvn": _cmd_verify_gvn,
    "random-signs": _cmd_random_signs,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        ok = COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidArgumentError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except InternalError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (GapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if ok else EXIT_FAIL


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
