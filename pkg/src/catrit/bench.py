"""Benchmark harness: run codecs on an index, verify, tabulate bits/pointer."""
from __future__ import annotations

import csv
import io
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .codecs import CODECS, IndexCodec, codec_by_name, decompress
from .errors import ContractViolation
from .index import InvertedIndex

__all__ = [
    "DEFAULT_CODECS",
    "BenchRow",
    "BenchReport",
    "SweepResult",
    "make_codec",
    "run_codec",
    "run_bench",
    "sweep",
]

DEFAULT_CODECS = (
    "interp", "block-interp", "block-interp:padding=1", "tc", "tca",
    "tc-quatrit", "tca-quatrit", "batch", "gamma", "delta", "golomb", "vbyte",
)

SECTIONS = ("header", "lengths", "model", "payload", "batch")


def _parse_value(text: str):
    low = text.lower()
    if low in ("true", "yes"):
        return True
    if low in ("false", "no"):
        return False
    try:
        return int(text)
    except ValueError:
        return text


def make_codec(spec: str, **overrides) -> IndexCodec:
    """Build a codec from ``"name"`` or ``"name:key=value,key=value"``.

    >>> make_codec("block-interp:padding=1,block_size=64").get_params()["block_size"]
    64
    """
    name, _, args = spec.partition(":")
    params = {}
    for item in filter(None, args.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"malformed codec option {item!r} in {spec!r}")
        params[key.strip()] = _parse_value(value.strip())
    params.update({k: v for k, v in overrides.items() if v is not None})
    codec = codec_by_name(name)
    valid = codec.get_params()
    unknown = set(params) - set(valid)
    if unknown:
        raise ValueError(f"codec {name!r} has no parameter(s) {sorted(unknown)}")
    return codec.set_params(**params)


@dataclass
class BenchRow:
    dataset: str
    codec: str
    nb_pointers: int
    total_bits: int = 0
    sections: dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0
    verified: bool = False
    error: str = ""

    @property
    def bits_per_pointer(self) -> float:
        return self.total_bits / self.nb_pointers if self.nb_pointers else float("nan")

    @property
    def ok(self) -> bool:
        return self.verified and not self.error


def run_codec(index: InvertedIndex, spec: str, dataset: str = "index", **overrides) -> BenchRow:
    """Compress, decompress and compare; failures are recorded, not raised."""
    row = BenchRow(dataset, spec, index.nb_pointers)
    t0 = time.perf_counter()
    try:
        codec = make_codec(spec, **overrides)
        payload = codec.fit_transform(index)
        row.sections = dict(payload.section_bits)
        row.total_bits = payload.total_bits
        row.verified = decompress(payload.data) == index
        if not row.verified:
            row.error = "round trip mismatch"
    except Exception as exc:  # a broken codec marks its row, the bench goes on
        row.error = f"{type(exc).__name__}: {exc}"
    row.seconds = time.perf_counter() - t0
    return row


def _run_star(args):
    return run_codec(*args)


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def sorted_rows(self) -> list[BenchRow]:
        # failed rows go last
        return sorted(self.rows, key=lambda r: (not r.ok, r.bits_per_pointer, r.codec))

    @property
    def failed(self) -> list[BenchRow]:
        return [r for r in self.rows if not r.ok]

    def to_markdown(self) -> str:
        head = ["dataset", "codec", "bits/ptr", "total bits", *SECTIONS, "seconds", "status"]
        lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for r in self.sorted_rows():
            cells = [r.dataset, r.codec, f"{r.bits_per_pointer:.3f}", str(r.total_bits),
                     *(str(r.sections.get(s, 0)) for s in SECTIONS),
                     f"{r.seconds:.2f}", "ok" if r.ok else f"FAILED ({r.error})"]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["dataset", "codec", "nb_pointers", "total_bits", "bits_per_pointer",
                     *SECTIONS, "seconds", "verified", "error"])
        for r in self.sorted_rows():
            wr.writerow([r.dataset, r.codec, r.nb_pointers, r.total_bits,
                         f"{r.bits_per_pointer:.3f}",
                         *(r.sections.get(s, 0) for s in SECTIONS),
                         f"{r.seconds:.3f}", int(r.verified), r.error])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "BenchReport":
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            sections = {s: int(rec[s]) for s in SECTIONS if int(rec[s])}
            rows.append(BenchRow(rec["dataset"], rec["codec"], int(rec["nb_pointers"]),
                                 int(rec["total_bits"]), sections, float(rec["seconds"]),
                                 rec["verified"] == "1", rec["error"]))
        return cls(rows)


def run_bench(index: InvertedIndex, codecs=DEFAULT_CODECS, dataset: str = "index",
              jobs: int = 1) -> BenchReport:
    """One verified row per codec spec; ``jobs > 1`` runs rows in processes."""
    codecs = list(codecs)
    for spec in codecs:
        if spec.partition(":")[0] not in CODECS:
            raise ValueError(f"unknown codec {spec!r}; choose from {sorted(CODECS)}")
    if jobs > 1 and len(codecs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_star, [(index, c, dataset) for c in codecs]))
    else:
        rows = [run_codec(index, c, dataset) for c in codecs]
    return BenchReport(rows)


@dataclass
class SweepResult:
    codec: str
    auto_params: dict
    auto_bits: int
    best_params: dict
    best_bits: int
    grid: list[tuple[dict, int]]

    @property
    def auto_excess(self) -> float:
        """Relative size of the automatic choice over the grid best."""
        return self.auto_bits / self.best_bits - 1.0

    def to_text(self) -> str:
        lines = [f"{'k':>3} {'w':>3} {'kinit':>5} {'norm':>4} {'total bits':>12}"]
        for p, bits in sorted(self.grid, key=lambda t: t[1]):
            lines.append(f"{p['k']:>3} {p['w']:>3} {p['k_init']:>5} {p['norm_bits']:>4} "
                         f"{bits:>12}")
        a = self.auto_params
        b = self.best_params
        lines.append(f"automatic k={a['k']} w={a['w']} kinit={a['k_init']} "
                     f"norm={a['norm_bits']}: {self.auto_bits} bits")
        lines.append(f"grid best k={b['k']} w={b['w']} kinit={b['k_init']} "
                     f"norm={b['norm_bits']}: {self.best_bits} bits "
                     f"(automatic is {100 * self.auto_excess:+.2f}%)")
        return "\n".join(lines)


def _params_dict(codec) -> dict:
    p = codec.params_
    return {"k": p.k, "w": p.w, "k_init": p.k_init, "norm_bits": p.norm_bits}


def sweep(index: InvertedIndex, codec: str = "tc", k=(), w=(), k_init=(),
          norm_bits=()) -> SweepResult:
    """Grid search over context parameters of a trit codec.

    Empty axes fall back to the automatic value; axes given as ``None`` in
    ``w``/``k_init`` mean "automatic for this k".  At least one axis must be
    non-empty.
    """
    if not (k or w or k_init or norm_bits):
        raise ContractViolation("empty parameter grid")
    if codec not in ("tc", "tca", "tc-quatrit", "tca-quatrit"):
        raise ContractViolation(f"sweep needs a trit codec, not {codec!r}")
    auto = codec_by_name(codec)
    auto_bits = auto.fit_transform(index).total_bits
    auto_params = _params_dict(auto)
    grid = []
    for kk, ww, ki, nb in itertools.product(k or [None], w or [None], k_init or [None],
                                            norm_bits or [auto_params["norm_bits"]]):
        est = codec_by_name(codec, k=kk, w=ww, k_init=ki, norm_bits=nb)
        try:
            bits = est.fit_transform(index).total_bits
        except ContractViolation:
            continue  # e.g. k_init beyond what the table supports
        grid.append((_params_dict(est), bits))
    if not grid:
        raise ContractViolation("no grid point produced a valid codec")
    best_params, best_bits = min(grid, key=lambda t: t[1])
    return SweepResult(codec, auto_params, auto_bits, best_params, best_bits, grid)
