"""Command line front end.

Subcommands:

* build    read a text, build a wavelet tree or matrix, write the index
* query    run access/rank/select against a written index
* convert  rewrite a wavelet tree index as the equivalent wavelet matrix
* verify   rebuild with a chosen algorithm and compare against the
           brute-force reference layouts (or against a written index)
* bench    time construction and report a CSV row per configuration

Exit codes: 0 success, 1 usage errors, 2 verification mismatch, 3 I/O
problems (unreadable input, unwritable output, malformed index).
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from .construct import ALGORITHMS, KINDS, build_structure, track_allocations
from .oracle import MAX_ORACLE_N, MAX_ORACLE_SIGMA, naive_structure
from .bitvec import AbsentOccurrenceError
from .structures import dump_structure, load_structure
from .wt2wm import convert_wt_to_wm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_IO = 3

ALPHABET_MODES = ("byte", "byte-effective", "words")
CSV_HEADER = (
    "input,kind,algo,threads,runs,median_seconds,"
    "aux_bytes_per_input_byte,total_bytes_per_input_byte"
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _min_dtype(sigma: int):
    if sigma <= 1 << 8:
        return np.uint8
    if sigma <= 1 << 16:
        return np.uint16
    if sigma <= 1 << 32:
        return np.uint32
    return np.uint64


def ingest(path: str, mode: str) -> tuple[np.ndarray, int]:
    """Read a file as a symbol sequence: (symbols, alphabet size).

    byte: raw bytes over the fixed alphabet [0, 256).
    byte-effective: raw bytes remapped to [0, d) for d distinct values,
    in order of first occurrence.
    words: whitespace-separated tokens, numbered by first occurrence.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc
    if mode == "byte":
        return np.frombuffer(data, dtype=np.uint8), 256
    if mode == "byte-effective":
        raw = np.frombuffer(data, dtype=np.uint8)
        if raw.size == 0:
            return raw, 0
        uniq, first = np.unique(raw, return_index=True)
        ids = np.argsort(np.argsort(first))
        lut = np.zeros(256, dtype=_min_dtype(uniq.size))
        lut[uniq] = ids.astype(lut.dtype)
        return lut[raw], int(uniq.size)
    if mode == "words":
        tokens = data.split()
        ids: dict[bytes, int] = {}
        syms = [ids.setdefault(tok, len(ids)) for tok in tokens]
        sigma = len(ids)
        return np.array(syms, dtype=_min_dtype(max(sigma, 1))), sigma
    raise CliError(f"unknown alphabet mode {mode!r}", EXIT_USAGE)


def _build(symbols, sigma: int, kind: str, algo: str, threads: int):
    if algo == "oracle":
        return naive_structure(symbols, sigma, kind)
    return build_structure(symbols, sigma, kind, algo, threads)


def _read_index(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc
    try:
        return load_structure(data)
    except ValueError as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO) from exc


def _write_bytes(path: str, payload: bytes) -> None:
    try:
        Path(path).write_bytes(payload)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc


def _cmd_build(args) -> int:
    symbols, sigma = ingest(args.input, args.alphabet)
    structure = _build(symbols, sigma, args.structure, args.algo, args.threads)
    _write_bytes(args.output, dump_structure(structure))
    print(
        f"{args.structure} n={structure.n} sigma={structure.sigma} "
        f"levels={structure.width} algo={args.algo} threads={args.threads} -> {args.output}"
    )
    return EXIT_OK


def _cmd_query(args) -> int:
    structure = _read_index(args.index)
    try:
        if args.op == "access":
            print(structure.access(args.pos))
        elif args.op == "rank":
            print(structure.rank(args.symbol, args.pos))
        else:
            print(structure.select(args.symbol, args.ordinal))
    except AbsentOccurrenceError:
        print("absent")
    except (ValueError, IndexError) as exc:
        print(f"query error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _cmd_convert(args) -> int:
    structure = _read_index(args.input)
    if structure.kind != "wt":
        print("convert expects a wavelet tree index", file=sys.stderr)
        return EXIT_USAGE
    matrix = convert_wt_to_wm(structure)
    _write_bytes(args.output, dump_structure(matrix))
    print(f"wm n={matrix.n} sigma={matrix.sigma} levels={matrix.width} -> {args.output}")
    return EXIT_OK


def _first_divergence(a, b):
    """(field, detail) naming where two structures first disagree."""
    if a.n != b.n:
        return "length", f"{a.n} vs {b.n}"
    if a.sigma != b.sigma:
        return "alphabet", f"{a.sigma} vs {b.sigma}"
    if getattr(a, "zeros", None) != getattr(b, "zeros", None):
        za, zb = a.zeros, b.zeros
        ell = next(k for k in range(len(za)) if za[k] != zb[k])
        return "zeros", f"level {ell}: {za[ell]} vs {zb[ell]}"
    for ell, (va, vb) in enumerate(zip(a.levels, b.levels)):
        if va != vb:
            diff = va.words ^ vb.words
            wi = int(np.flatnonzero(diff)[0])
            word = int(diff[wi])
            bit = wi * 64 + (word & -word).bit_length() - 1
            return "level bits", f"level {ell}, bit {bit}"
    return None, None


def _cmd_verify(args) -> int:
    symbols, sigma = ingest(args.input, args.alphabet)
    if symbols.size > MAX_ORACLE_N or max(sigma, 1) > MAX_ORACLE_SIGMA:
        print("input too large for the brute-force reference", file=sys.stderr)
        return EXIT_USAGE
    reference = naive_structure(symbols, sigma, args.structure)
    if args.index:
        candidate = _read_index(args.index)
        if candidate.kind != args.structure:
            print(
                f"mismatch: index holds {candidate.kind}, expected {args.structure}",
                file=sys.stderr,
            )
            return EXIT_MISMATCH
    else:
        candidate = _build(symbols, sigma, args.structure, args.algo, args.threads)
    if dump_structure(candidate) == dump_structure(reference):
        print(f"ok: {args.structure} matches reference (n={reference.n}, sigma={reference.sigma})")
        return EXIT_OK
    field, detail = _first_divergence(candidate, reference)
    print(f"mismatch in {field}: {detail}", file=sys.stderr)
    return EXIT_MISMATCH


def _cmd_bench(args) -> int:
    symbols, sigma = ingest(args.input, args.alphabet)
    if args.runs < 1 or args.runs % 2 == 0:
        print("runs must be a positive odd number", file=sys.stderr)
        return EXIT_USAGE
    kinds = [k.strip() for k in args.structure.split(",") if k.strip()]
    algos = [a.strip() for a in args.algo.split(",") if a.strip()]
    threads = [int(t) for t in str(args.threads).split(",") if t]
    for k in kinds:
        if k not in KINDS:
            print(f"unknown structure kind {k!r}", file=sys.stderr)
            return EXIT_USAGE
    for a in algos:
        if a not in ALGORITHMS and a != "oracle":
            print(f"unknown algorithm {a!r}", file=sys.stderr)
            return EXIT_USAGE
    input_bytes = max(symbols.nbytes, 1)
    rows = [CSV_HEADER]
    name = Path(args.input).name
    for kind in kinds:
        for algo in algos:
            for p in threads:
                times = []
                peak = 0
                output_bytes = 0
                for _ in range(args.runs):
                    with track_allocations() as log:
                        t0 = time.perf_counter()
                        built = _build(symbols, sigma, kind, algo, p)
                        times.append(time.perf_counter() - t0)
                    peak = log.peak_bytes
                    output_bytes = sum(v.words.nbytes for v in built.levels)
                    output_bytes += 8 * len(getattr(built, "zeros", ()))
                med = statistics.median(times)
                aux_ratio = peak / input_bytes
                total_ratio = (symbols.nbytes + output_bytes + peak) / input_bytes
                rows.append(
                    f"{name},{kind},{algo},{p},{args.runs},"
                    f"{med:.6f},{aux_ratio:.6f},{total_ratio:.6f}"
                )
    payload = "\n".join(rows) + "\n"
    if args.csv:
        _write_bytes(args.csv, payload.encode())
        print(f"wrote {len(rows) - 1} rows -> {args.csv}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _make_parser() -> _Parser:
    parser = _Parser(prog="wvlt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def common(p, with_algo=True):
        p.add_argument("--input", required=True, help="path of the text to read")
        p.add_argument(
            "--alphabet",
            choices=ALPHABET_MODES,
            default="byte",
            help="how to read symbols (default: byte)",
        )
        p.add_argument(
            "--structure",
            default="wt",
            help="wt or wm (default: wt)",
        )
        if with_algo:
            p.add_argument(
                "--algo",
                default="pc",
                help="pc, ps, levelpar, ddpc, ddps or oracle (default: pc)",
            )
            p.add_argument("--threads", type=int, default=1, help="worker count (default: 1)")

    b = sub.add_parser("build", help="build an index from a text", parents=[], add_help=True)
    common(b)
    b.add_argument("--output", required=True, help="where to write the index")
    b.set_defaults(func=_cmd_build)

    q = sub.add_parser("query", help="query a written index")
    q.add_argument("--index", required=True, help="index file to load")
    q.add_argument("--op", required=True, choices=("access", "rank", "select"))
    q.add_argument("--pos", type=int, default=0, help="position for access, prefix length for rank")
    q.add_argument("--symbol", type=int, default=0, help="symbol for rank/select")
    q.add_argument("--ordinal", type=int, default=1, help="1-based occurrence for select")
    q.set_defaults(func=_cmd_query)

    c = sub.add_parser("convert", help="rewrite a tree index as a matrix index")
    c.add_argument("--input", required=True, help="wavelet tree index file")
    c.add_argument("--output", required=True, help="where to write the matrix index")
    c.set_defaults(func=_cmd_convert)

    v = sub.add_parser("verify", help="compare against the brute-force reference")
    common(v)
    v.add_argument("--index", help="verify this index file instead of rebuilding")
    v.set_defaults(func=_cmd_verify)

    e = sub.add_parser("bench", help="time construction, emit CSV")
    e.add_argument("--input", required=True, help="path of the text to read")
    e.add_argument("--alphabet", choices=ALPHABET_MODES, default="byte")
    e.add_argument("--structure", default="wt", help="comma-separated kinds (default: wt)")
    e.add_argument("--algo", default="pc", help="comma-separated algorithms (default: pc)")
    e.add_argument("--threads", default="1", help="comma-separated worker counts (default: 1)")
    e.add_argument("--runs", type=int, default=3, help="odd repeat count, median wins (default: 3)")
    e.add_argument("--csv", help="write rows here instead of stdout")
    e.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse raises for -h (code 0) and for usage errors
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "structure", None) is not None and args.structure not in KINDS:
        if args.command != "bench":
            print(f"unknown structure kind {args.structure!r}", file=sys.stderr)
            return EXIT_USAGE
    if getattr(args, "algo", None) is not None and args.command not in ("bench",):
        if args.algo not in ALGORITHMS and args.algo != "oracle":
            print(f"unknown algorithm {args.algo!r}", file=sys.stderr)
            return EXIT_USAGE
    if getattr(args, "threads", None) is not None and args.command != "bench":
        if args.threads < 1:
            print("thread count must be at least 1", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
