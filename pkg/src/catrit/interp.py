"""Binary interpolative coding, whole-list and blocked.

Each recursion step codes one element inside the range left feasible by its
neighbours' counts, using a centered minimal binary code (the shortest
codewords go to the middle of the range).  The split point follows a
complete-binary-tree shape, so that sub-lists have ``2^n - 1`` elements
whenever possible.  A sub-list that exactly fills its range costs nothing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bitio import BitReader, BitWriter
from .errors import DomainError, FormatError
from .universal import UniversalCode

__all__ = [
    "write_centered_binary",
    "read_centered_binary",
    "left_size",
    "interp_encode",
    "interp_decode",
    "InterpConfig",
    "BlockStats",
    "block_layout",
    "block_interp_encode",
    "block_interp_decode",
]

_VBYTE = UniversalCode("vbyte")


def write_centered_binary(w: BitWriter, x: int, r: int) -> None:
    """Code ``x`` in ``[0, r)``; the ``2^b - r`` central values get ``b - 1`` bits."""
    if r <= 1:
        return
    b = (r - 1).bit_length()
    short = (1 << b) - r
    # rotate so the central block of short codewords starts at 0
    x = (x - ((r - short) >> 1)) % r
    if x < short:
        w._write_unchecked(x, b - 1)
    else:
        w._write_unchecked(x + short, b)


def read_centered_binary(rd: BitReader, r: int) -> int:
    if r <= 1:
        return 0
    b = (r - 1).bit_length()
    short = (1 << b) - r
    v = rd.read_bits(b - 1)
    if v >= short:
        v = ((v << 1) | rd.read_bit()) - short
        if v >= r:
            raise FormatError("interpolative codeword out of range")
    return (v + ((r - short) >> 1)) % r


def left_size(n: int) -> int:
    """Size of the left subtree of a complete binary tree with ``n`` nodes."""
    h = (n + 1).bit_length() - 1          # number of full levels
    half = 1 << (h - 1) if h else 0
    extra = n - ((1 << h) - 1)            # nodes on the partial last level
    return (half - 1 if half else 0) + min(extra, half if h else 1)


def _encode(w: BitWriter, docs: Sequence[int], i: int, j: int, lo: int, hi: int) -> None:
    n = j - i
    if n == 0 or hi - lo + 1 == n:
        return
    m = i + left_size(n)
    x = docs[m]
    nl = m - i
    nr = j - m - 1
    write_centered_binary(w, x - lo - nl, hi - nr - lo - nl + 1)
    _encode(w, docs, i, m, lo, x - 1)
    _encode(w, docs, m + 1, j, x + 1, hi)


def _decode(rd: BitReader, out: list[int], i: int, j: int, lo: int, hi: int) -> None:
    n = j - i
    if n == 0:
        return
    if hi - lo + 1 == n:
        for t in range(n):
            out[i + t] = lo + t
        return
    m = i + left_size(n)
    nl = m - i
    nr = j - m - 1
    x = lo + nl + read_centered_binary(rd, hi - nr - lo - nl + 1)
    out[m] = x
    _decode(rd, out, i, m, lo, x - 1)
    _decode(rd, out, m + 1, j, x + 1, hi)


def _check(docs: Sequence[int], lo: int, hi: int) -> None:
    prev = lo - 1
    for d in docs:
        if d <= prev:
            raise DomainError("document IDs must be strictly increasing and >= lo")
        prev = d
    if prev > hi:
        raise DomainError(f"document ID {prev} above upper bound {hi}")


def interp_encode(docs: Sequence[int], lo: int, hi: int,
                  writer: BitWriter | None = None) -> BitWriter:
    """Code a strictly increasing list whose values lie in ``[lo, hi]``."""
    _check(docs, lo, hi)
    w = writer if writer is not None else BitWriter()
    _encode(w, docs, 0, len(docs), lo, hi)
    return w


def interp_decode(reader: BitReader, count: int, lo: int, hi: int) -> list[int]:
    if count > hi - lo + 1:
        raise FormatError("more elements than the range can hold")
    out = [0] * count
    _decode(reader, out, 0, count, lo, hi)
    return out


@dataclass(frozen=True)
class InterpConfig:
    blocked: bool = False
    block_size: int = 128
    padding: bool = False
    redundant_max: bool = False

    def __post_init__(self):
        if self.block_size < 1:
            raise DomainError("block_size must be positive")


@dataclass
class BlockStats:
    total_bits: int = 0
    max_bits: int = 0          # block maxima
    redundant_bits: int = 0    # in-block copies of the maxima
    padding_bits: int = 0
    blocks: int = 0


def block_layout(docs: Sequence[int], block_size: int = 128):
    """``(previous_max, block_max, rebased_ids)`` for every block."""
    out = []
    prev = 0
    for s in range(0, len(docs), block_size):
        block = docs[s : s + block_size]
        out.append((prev, block[-1], [d - prev for d in block]))
        prev = block[-1]
    return out


def block_interp_encode(docs: Sequence[int], config: InterpConfig = InterpConfig(blocked=True),
                        writer: BitWriter | None = None) -> tuple[BitWriter, BlockStats]:
    """Per block: the block maximum (VByte, minus the block size and the
    previous maximum), then Interp of the other IDs rebased by the previous
    maximum.  ``redundant_max`` repeats the maximum inside the block."""
    _check(docs, 1, docs[-1] if docs else 0)
    w = writer if writer is not None else BitWriter()
    stats = BlockStats()
    start = w.bit_count
    for prev, bmax, ids in block_layout(docs, config.block_size):
        s = len(ids)
        span = bmax - prev
        mark = w.bit_count
        _VBYTE.encode(w, span - s + 1)
        stats.max_bits += w.bit_count - mark
        if config.redundant_max:
            mark = w.bit_count
            _VBYTE.encode(w, span - s + 1)
            stats.redundant_bits += w.bit_count - mark
        _encode(w, ids, 0, s - 1, 1, span - 1)
        if config.padding:
            stats.padding_bits += w.pad_to_byte()
        stats.blocks += 1
    stats.total_bits = w.bit_count - start
    return w, stats


def block_interp_decode(reader: BitReader, count: int,
                        config: InterpConfig = InterpConfig(blocked=True)) -> list[int]:
    out: list[int] = []
    prev = 0
    bs = config.block_size
    for s0 in range(0, count, bs):
        s = min(bs, count - s0)
        span = _VBYTE.decode(reader) - 1 + s
        if config.redundant_max:
            if _VBYTE.decode(reader) - 1 + s != span:
                raise FormatError("redundant block maximum disagrees")
        ids = [0] * (s - 1)
        _decode(reader, ids, 0, s - 1, 1, span - 1)
        out.extend(prev + d for d in ids)
        prev += span
        out.append(prev)
        if config.padding:
            reader.align_to_byte()
    return out
