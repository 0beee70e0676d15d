"""Command-line interface: align the first record of two FASTA files.

Exit codes: 0 success, 1 internal consistency failure (a bug), 2 usage
error, 3 unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import BUG_ERRORS, InputError
from .io import parse_fasta, parse_matrix, write_output
from .model import Alphabet, ScoringScheme, validate_scheme
from .pipeline import AlignConfig, align

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="wavealign",
        description="Exact pairwise local alignment of two FASTA sequences.",
    )
    p.add_argument("target", help="FASTA file with the target sequence")
    p.add_argument("query", help="FASTA file with the query sequence")
    scheme = p.add_argument_group("scoring scheme")
    scheme.add_argument("--match", type=int, default=None,
                        help="match score for DNA mode (default 1)")
    scheme.add_argument("--mismatch", type=int, default=None,
                        help="mismatch score for DNA mode (default -3)")
    scheme.add_argument("--matrix", metavar="FILE", default=None,
                        help="substitution matrix file (protein mode)")
    scheme.add_argument("--gap-open", type=int, default=5,
                        help="gap opening penalty (default 5)")
    scheme.add_argument("--gap-extend", type=int, default=2,
                        help="gap extension penalty per residue (default 2)")
    scheme.add_argument("--strict", action="store_true",
                        help="reject the 'N' wildcard in DNA sequences")
    run = p.add_argument_group("execution")
    run.add_argument("--workers", type=int, default=1,
                     help="worker threads for the wavefront engine")
    run.add_argument("--block-rows", type=int, default=512)
    run.add_argument("--block-cols", type=int, default=512)
    run.add_argument("--leaf-limit", type=int, default=128 * 128,
                     help="max cells solved by direct traceback")
    run.add_argument("--no-prune", action="store_true",
                     help="disable block pruning in the scoring pass")
    run.add_argument("--no-band", action="store_true",
                     help="disable banded location and reconstruction")
    run.add_argument("--split", type=int, choices=(1, 2), default=1,
                     help="number of concurrent matrix parts (1 or 2)")
    out = p.add_argument_group("output")
    out.add_argument("--out", choices=("stat", "cigar", "pair"),
                     default="stat", help="output format (default stat)")
    out.add_argument("--output", metavar="FILE", default=None,
                     help="write results here instead of standard output")
    p.add_argument("--verbose", action="store_true",
                   help="log diagnostics to standard error")
    return p


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    if args.matrix is not None and (args.match is not None
                                    or args.mismatch is not None):
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: --matrix conflicts with "
              "--match/--mismatch", file=sys.stderr)
        return 2
    if args.workers < 1 or args.leaf_limit < 1 or args.block_rows < 1 \
            or args.block_cols < 1:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: counts must be positive",
              file=sys.stderr)
        return 2

    try:
        if args.matrix is not None:
            with open(args.matrix, "rb") as fh:
                symbols, table = parse_matrix(fh.read())
            alphabet = Alphabet("protein", symbols)
            scheme = ScoringScheme.from_table(
                alphabet, table, args.gap_open, args.gap_extend
            )
        else:
            alphabet = Alphabet.dna(wildcard=not args.strict)
            scheme = ScoringScheme.match_mismatch(
                alphabet,
                args.match if args.match is not None else 1,
                args.mismatch if args.mismatch is not None else -3,
                args.gap_open,
                args.gap_extend,
            )
        scheme = validate_scheme(scheme)

        with open(args.target, "rb") as fh:
            target = parse_fasta(fh.read(), alphabet)[0]
        with open(args.query, "rb") as fh:
            query = parse_fasta(fh.read(), alphabet)[0]
        if len(target) < 1 or len(query) < 1:
            raise InputError("sequences must be non-empty")
    except OSError as exc:
        print(f"{parser.prog}: cannot read input: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return 3

    config = AlignConfig(
        workers=args.workers,
        block_rows=args.block_rows,
        block_cols=args.block_cols,
        leaf_limit=args.leaf_limit,
        prune=not args.no_prune,
        band=not args.no_band,
        split=args.split,
    )
    try:
        summary, path = align(target, query, scheme, config)
    except BUG_ERRORS as exc:
        print(
            f"{parser.prog}: internal error: {exc}\n"
            "This is a bug in wavealign, not a problem with your input; "
            "please file a report with the exact command and inputs.",
            file=sys.stderr,
        )
        return 1

    data = write_output(summary, path, args.out, target, query)
    if args.output is None:
        sys.stdout.write(data.decode("ascii"))
        sys.stdout.flush()
    else:
        with open(args.output, "wb") as fh:
            fh.write(data)
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
