"""Command-line front end.

Exit codes: 0 ok, 1 usage error, 2 data error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import DEFAULT_CODECS, make_codec, run_bench, sweep
from .codecs import CODECS, CompressedIndexPayload, decompress
from .errors import CodecError, ContractViolation, DomainError, FormatError
from .index import (
    apply_doc_permutation,
    ingest_corpus,
    load_raw,
    read_corpus,
    read_permutation,
    save_raw,
    sort_words_by_density,
)
from .synthetic import clustered_index, uniform_index

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 1, 2, 3
TRIT_CODECS = ("tc", "tca", "tc-quatrit", "tca-quatrit")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _add_reorder(p):
    p.add_argument("--perm", metavar="FILE", help="document permutation, one new ID per line")
    p.add_argument("--sort-words", action="store_true", help="order words by increasing density")


def _add_params(p, grid=False):
    kind = _int_list if grid else int
    p.add_argument("--k", type=kind, metavar="N", help="number of exact T/N flags")
    p.add_argument("--w", type=kind, metavar="N", help="window for counting 2s")
    p.add_argument("--kinit", type=kind, metavar="N", help="depth of initial contexts")
    p.add_argument("--norm-bits", type=kind, metavar="N", help="bits per stored probability")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catrit", description="Posting-list compression toolkit.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="build a raw index from a text corpus")
    p.add_argument("corpus", help="directory of text files, or one file")
    p.add_argument("output", help="raw index to write")
    p.add_argument("--lines", action="store_true",
                   help="treat a single file as one document per line (default for files)")
    _add_reorder(p)

    p = sub.add_parser("compress", help="compress a raw index")
    p.add_argument("index")
    p.add_argument("output")
    p.add_argument("--codec", default="tca", help="codec name, optionally name:key=value,...")
    p.add_argument("--batch", action="store_true",
                   help="density batches, best of interp/tc/tca per batch")
    p.add_argument("--verify", action="store_true", help="decompress and compare afterwards")
    _add_reorder(p)
    _add_params(p)

    p = sub.add_parser("decompress", help="restore a raw index from a payload")
    p.add_argument("payload")
    p.add_argument("output")

    p = sub.add_parser("verify", help="check that a payload decodes to an index")
    p.add_argument("index")
    p.add_argument("payload")
    _add_reorder(p)

    p = sub.add_parser("bench", help="compare codecs on one index")
    p.add_argument("index")
    p.add_argument("--codec", default=",".join(DEFAULT_CODECS),
                   help="semicolon or comma separated codec list")
    p.add_argument("--csv", metavar="PATH", help="also write the table as CSV")
    p.add_argument("--jobs", type=int, default=1, help="parallel rows")
    _add_reorder(p)

    p = sub.add_parser("sweep", help="grid search trit-codec parameters")
    p.add_argument("index")
    p.add_argument("--codec", default="tc", choices=TRIT_CODECS)
    _add_reorder(p)
    _add_params(p, grid=True)

    p = sub.add_parser("gen-synthetic", help="write a seeded synthetic raw index")
    p.add_argument("output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--docs", type=int, default=50_000)
    p.add_argument("--words", type=int, default=400)
    p.add_argument("--uniform", action="store_true", help="no clustering")
    return parser


def _reorder(index, args):
    if getattr(args, "perm", None):
        index = apply_doc_permutation(index, read_permutation(args.perm))
    if getattr(args, "sort_words", False):
        index = sort_words_by_density(index)
    return index


def _load(args):
    return _reorder(load_raw(args.index), args)


def _split_codecs(text: str) -> list[str]:
    # options use commas too, so "name:a=1,b=2" survives when ';' separates codecs
    if ";" in text:
        return [c.strip() for c in text.split(";") if c.strip()]
    out: list[str] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" in part and ":" not in part and out:
            out[-1] += "," + part
        else:
            out.append(part)
    return out


def _report_line(payload: CompressedIndexPayload) -> str:
    s = payload.section_bits
    parts = " ".join(f"{k}={v}" for k, v in s.items())
    return (f"{payload.codec}: {payload.total_bits} bits, "
            f"{payload.bits_per_pointer:.3f} bits/pointer ({parts})")


def _index_line(index) -> str:
    return (f"nbDocuments={index.nb_documents} nbWords={index.nb_words} "
            f"nbPointers={index.nb_pointers}")


def cmd_build(args) -> int:
    docs = read_corpus(args.corpus, one_per_line=True if args.lines else None)
    index = _reorder(ingest_corpus(docs), args)
    save_raw(index, args.output)
    print(_index_line(index))
    return EXIT_OK


def cmd_compress(args) -> int:
    index = _load(args)
    overrides = {"k": args.k, "w": args.w, "k_init": args.kinit, "norm_bits": args.norm_bits}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if args.batch:
        if overrides:
            raise UsageError("--batch picks its own parameters; drop --k/--w/--kinit/--norm-bits")
        spec = "batch"
    else:
        spec = args.codec
    if overrides and spec.partition(":")[0] not in TRIT_CODECS:
        raise UsageError(f"context parameters only apply to {', '.join(TRIT_CODECS)}")
    try:
        codec = make_codec(spec, **overrides)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    try:
        payload = codec.fit_transform(index)
    except ContractViolation as exc:
        raise UsageError(f"bad parameters: {exc}") from None
    Path(args.output).write_bytes(payload.data)
    print(_report_line(payload))
    if args.verify and decompress(payload.data) != index:
        print("verification FAILED: decoded index differs", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_decompress(args) -> int:
    index = decompress(Path(args.payload).read_bytes())
    save_raw(index, args.output)
    print(_index_line(index))
    return EXIT_OK


def cmd_verify(args) -> int:
    index = _load(args)
    try:
        decoded = decompress(Path(args.payload).read_bytes())
    except CodecError as exc:
        print(f"verification FAILED: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    if decoded != index:
        print("verification FAILED: decoded index differs", file=sys.stderr)
        return EXIT_VERIFY
    print(f"ok: {_index_line(index)}")
    return EXIT_OK


def cmd_bench(args) -> int:
    index = _load(args)
    codecs = _split_codecs(args.codec)
    if not codecs:
        raise UsageError("empty codec list")
    try:
        report = run_bench(index, codecs, dataset=Path(args.index).stem, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(_index_line(index))
    print(report.to_markdown())
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    return EXIT_VERIFY if report.failed else EXIT_OK


def cmd_sweep(args) -> int:
    index = _load(args)
    try:
        result = sweep(index, args.codec, k=args.k or (), w=args.w or (),
                       k_init=args.kinit or (), norm_bits=args.norm_bits or ())
    except ContractViolation as exc:
        raise UsageError(str(exc)) from None
    print(result.to_text())
    return EXIT_OK


def cmd_gen_synthetic(args) -> int:
    if args.docs < 1 or args.words < 1:
        raise UsageError("--docs and --words must be positive")
    make = uniform_index if args.uniform else clustered_index
    index = make(nb_documents=args.docs, nb_words=args.words, seed=args.seed)
    save_raw(index, args.output)
    print(_index_line(index))
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "compress": cmd_compress,
    "decompress": cmd_decompress,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "sweep": cmd_sweep,
    "gen-synthetic": cmd_gen_synthetic,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.verb](args)
    except UsageError as exc:
        print(f"catrit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CodecError, DomainError, FormatError, OSError, EOFError, ValueError) as exc:
        print(f"catrit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
