"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

from . import __version__
from .analysis import (
    nonstationarity_report,
    second_order_gap,
    universality_curve,
    write_csv,
)
from .bench import METHODS, run_bench
from .container import MAX_K, compress, decompress, default_k
from .errors import UgcError
from .graph import read_edgelist, write_edgelist
from .probmodel import Mode
from .sbm import SbmParams, sample_sbm, scaled_params, symmetric_sbm

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _block_size(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid block size {text!r}") from None
    if not 1 <= k <= MAX_K:
        raise argparse.ArgumentTypeError(f"block size must be in 1..{MAX_K}, got {k}")
    return k


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _k_list(text: str) -> list[int]:
    ks = _int_list(text)
    for k in ks:
        _block_size(str(k))
    return ks


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _matrix(text: str) -> list[list[float]]:
    """Rows separated by ';', entries by ','."""
    return [_float_list(row) for row in text.split(";")]


def _mode_list(text: str) -> list[Mode]:
    try:
        return [Mode.parse(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _method_list(text: str) -> list[str]:
    methods = [t.strip() for t in text.split(",") if t.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s) {bad}; choose from {list(METHODS)}")
    return methods


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ugc", description="Universal graph compressor for stochastic block models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("compress", help="compress an edge list to a .ugc file")
    p.add_argument("input", help="edge-list file")
    p.add_argument("-o", "--output", required=True, help="output .ugc file")
    p.add_argument("--k", type=_block_size, default=None,
                   help=f"block size 1..{MAX_K} (default: max(1, floor(sqrt(0.5 log2 n))))")
    p.add_argument("--mode", type=Mode.parse, default=Mode.KT, choices=list(Mode),
                   metavar="{kt,laplace}", help="probability assignment (default: kt)")
    p.add_argument("--index-base", type=int, choices=(0, 1), default=None,
                   help="vertex id base of the input (default: 0 if any id is 0, else 1)")

    p = sub.add_parser("decompress", help="decompress a .ugc file to an edge list")
    p.add_argument("input", help=".ugc file")
    p.add_argument("-o", "--output", required=True, help="output edge-list file")

    p = sub.add_parser("gen", help="sample an SBM graph as an edge list")
    p.add_argument("--params", required=True, help='JSON file with keys "n", "L", "p", "W"')
    p.add_argument("--seed", type=int, required=True, help="random seed")
    p.add_argument("-o", "--output", required=True, help="output edge-list file")

    p = sub.add_parser("bench", help="benchmark UGC and baselines on datasets")
    p.add_argument("--datasets", nargs="+", required=True,
                   help="edge-list files or synthetic specs er:<n>:<p>[:<seed>]")
    p.add_argument("--ks", type=_k_list, default=[1, 2, 3, 4], help="block sizes (default: 1,2,3,4)")
    p.add_argument("--modes", type=_mode_list, default=[Mode.KT], help="kt and/or laplace (default: kt)")
    p.add_argument("--methods", type=_method_list, default=list(METHODS),
                   help="subset of ugc,csr,lz78 (default: all)")
    p.add_argument("--csv", default=None, help="also write the report as CSV to this file")

    p = sub.add_parser("analyze", help="theory checks: nonstationarity, universality, bc-gap")
    asub = p.add_subparsers(dest="analysis", metavar="ANALYSIS")
    asub.required = True

    a = asub.add_parser("nonstationarity", help="window-law gaps of row/column/diagonal listings")
    a.add_argument("--params", required=True, help="SBM JSON file (n <= 12)")
    a.add_argument("--window", type=int, default=3, help="window length (default: 3)")
    a.add_argument("-o", "--output", default=None, help="CSV output file (default: stdout)")

    a = asub.add_parser("universality", help="mean length over conditional entropy versus n")
    a.add_argument("--p", type=_float_list, required=True, help="community prior, e.g. 0.5,0.5")
    a.add_argument("--Q", type=_matrix, required=True, help="rows ';'-separated, e.g. '3,1;1,3'")
    a.add_argument("--scaling", choices=("const", "log_n_over_n", "one_over_n"),
                   default="log_n_over_n", help="W = f(n) Q with this f (default: log_n_over_n)")
    a.add_argument("--ns", type=_int_list, required=True, help="vertex counts, e.g. 128,256,512")
    a.add_argument("--k", type=_block_size, default=None, help="block size (default: per-n default)")
    a.add_argument("--mode", type=Mode.parse, default=Mode.KT, choices=list(Mode),
                   metavar="{kt,laplace}", help="probability assignment (default: kt)")
    a.add_argument("--trials", type=int, default=10, help="samples per n (default: 10)")
    a.add_argument("--seed", type=int, default=0, help="base seed; trial t uses seed+t (default: 0)")
    a.add_argument("-o", "--output", default=None, help="CSV output file (default: stdout)")

    a = asub.add_parser("bc-gap", help="second-order statistic against the GWT BC entropy")
    a.add_argument("--L", type=int, default=2, help="community count (default: 2)")
    a.add_argument("--a", type=float, default=3.0, help="within-community Q entry (default: 3)")
    a.add_argument("--b", type=float, default=1.0, help="cross-community Q entry (default: 1)")
    a.add_argument("--ns", type=_int_list, default=[1024, 2048, 4096],
                   help="vertex counts (default: 1024,2048,4096)")
    a.add_argument("--k", type=_block_size, default=3, help="block size (default: 3)")
    a.add_argument("--mode", type=Mode.parse, default=Mode.KT, choices=list(Mode),
                   metavar="{kt,laplace}", help="probability assignment (default: kt)")
    a.add_argument("--trials", type=int, default=10, help="samples per n (default: 10)")
    a.add_argument("--seed", type=int, default=0, help="base seed; trial t uses seed+t (default: 0)")
    a.add_argument("-o", "--output", default=None, help="CSV output file (default: stdout)")
    return parser


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p


def _emit_csv(rows, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)


def _cmd_compress(args) -> None:
    g = read_edgelist(_require_file(args.input), index_base=args.index_base)
    k = args.k if args.k is not None else default_k(g.n)
    blob = compress(g, k, args.mode)
    Path(args.output).write_bytes(blob)
    logging.getLogger(__name__).info("n=%d k=%d mode=%s -> %d bytes", g.n, k, args.mode.value, len(blob))


def _cmd_decompress(args) -> None:
    g = decompress(_require_file(args.input).read_bytes())
    Path(args.output).write_text(write_edgelist(g))


def _cmd_gen(args) -> None:
    params = SbmParams.load(_require_file(args.params))
    g, _ = sample_sbm(params, args.seed)
    Path(args.output).write_text(write_edgelist(g))


def _cmd_bench(args) -> None:
    for d in args.datasets:
        if not d.startswith("er:"):
            _require_file(d)
    report = run_bench(args.datasets, args.ks, args.modes, args.methods)
    print(report.format_table())
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            report.to_csv(fh)


def _positive(name: str, value: int) -> None:
    if value < 1:
        raise UsageError(f"{name} must be at least 1")


def _run_analysis(args) -> None:
    if args.analysis == "nonstationarity":
        params = SbmParams.load(_require_file(args.params))
        _positive("--window", args.window)
        _emit_csv(nonstationarity_report(params, args.window), args.output)
    elif args.analysis == "universality":
        _positive("--trials", args.trials)
        if len(args.p) != len(args.Q) or any(len(r) != len(args.p) for r in args.Q):
            raise UsageError("--Q must be an L x L matrix matching --p")
        plist = [scaled_params(n, args.p, args.Q, args.scaling) for n in args.ns]
        _emit_csv(universality_curve(plist, args.k, args.mode, args.trials, args.seed), args.output)
    else:
        _positive("--trials", args.trials)
        _positive("--L", args.L)
        rows = [second_order_gap(symmetric_sbm(n, args.L, args.a, args.b), args.k, args.mode,
                                 args.trials, args.seed) for n in args.ns]
        _emit_csv(rows, args.output)


_COMMANDS = {
    "compress": _cmd_compress,
    "decompress": _cmd_decompress,
    "gen": _cmd_gen,
    "bench": _cmd_bench,
    "analyze": _run_analysis,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ugc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UgcError, ValueError, OSError) as exc:
        print(f"ugc: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
