"""Classic integer codes for positive integers.

Definitions follow Managing Gigabytes: nothing here ever codes zero.  Unary
writes ``x - 1`` one bits and a terminating zero, so ``gamma(4) = 110 00``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .bitio import BitReader, BitWriter
from .errors import ContractViolation, DomainError, FormatError

__all__ = [
    "UniversalCode",
    "UNIVERSAL_KINDS",
    "write_truncated_binary",
    "read_truncated_binary",
    "golomb_parameter",
    "rice_parameter",
    "encode_universal",
    "decode_universal",
    "code_length",
]


def write_truncated_binary(w: BitWriter, x: int, r: int) -> None:
    """Minimal binary code of ``x`` in ``[0, r)``."""
    if r <= 1:
        return
    b = (r - 1).bit_length()
    short = (1 << b) - r
    if x < short:
        w._write_unchecked(x, b - 1)
    else:
        w._write_unchecked(x + short, b)


def read_truncated_binary(rd: BitReader, r: int) -> int:
    if r <= 1:
        return 0
    b = (r - 1).bit_length()
    short = (1 << b) - r
    v = rd.read_bits(b - 1)
    if v < short:
        return v
    v = (v << 1) | rd.read_bit()
    if v - short >= r:
        raise FormatError("truncated binary codeword out of range")
    return v - short


def _unary(w: BitWriter, x: int) -> None:
    w.write_unary(x - 1)


def _read_unary(rd: BitReader) -> int:
    return rd.read_unary() + 1


def _gamma(w: BitWriter, x: int) -> None:
    n = x.bit_length()
    w.write_unary(n - 1)
    w._write_unchecked(x & ((1 << (n - 1)) - 1), n - 1)


def _read_gamma(rd: BitReader) -> int:
    n = rd.read_unary()
    return (1 << n) | rd.read_bits(n)


def _delta(w: BitWriter, x: int) -> None:
    n = x.bit_length()
    _gamma(w, n)
    w._write_unchecked(x & ((1 << (n - 1)) - 1), n - 1)


def _read_delta(rd: BitReader) -> int:
    n = _read_gamma(rd)
    if n > 64:
        raise FormatError("delta codeword too long")
    return (1 << (n - 1)) | rd.read_bits(n - 1)


def _zeta(w: BitWriter, x: int, k: int) -> None:
    h = (x.bit_length() - 1) // k
    w.write_unary(h)
    lo = 1 << (h * k)
    write_truncated_binary(w, x - lo, (1 << ((h + 1) * k)) - lo)


def _read_zeta(rd: BitReader, k: int) -> int:
    h = rd.read_unary()
    if h * k > 64:
        raise FormatError("zeta codeword too long")
    lo = 1 << (h * k)
    return lo + read_truncated_binary(rd, (1 << ((h + 1) * k)) - lo)


def _golomb(w: BitWriter, x: int, b: int) -> None:
    q, r = divmod(x - 1, b)
    w.write_unary(q)
    write_truncated_binary(w, r, b)


def _read_golomb(rd: BitReader, b: int) -> int:
    q = rd.read_unary()
    return q * b + read_truncated_binary(rd, b) + 1


def _rice(w: BitWriter, x: int, r: int) -> None:
    v = x - 1
    w.write_unary(v >> r)
    w._write_unchecked(v & ((1 << r) - 1), r)


def _read_rice(rd: BitReader, r: int) -> int:
    q = rd.read_unary()
    return ((q << r) | rd.read_bits(r)) + 1


def _varint(w: BitWriter, x: int, group: int) -> None:
    # big-endian groups, leading flag 1 means "more groups follow"
    v = x - 1
    chunks = [v & ((1 << group) - 1)]
    v >>= group
    while v:
        chunks.append(v & ((1 << group) - 1))
        v >>= group
    for i in range(len(chunks) - 1, -1, -1):
        w._write_unchecked(((1 if i else 0) << group) | chunks[i], group + 1)


def _read_varint(rd: BitReader, group: int) -> int:
    v = 0
    for _ in range(80 // group + 1):
        unit = rd.read_bits(group + 1)
        v = (v << group) | (unit & ((1 << group) - 1))
        if not unit >> group:
            return v + 1
    raise FormatError("variable-length integer too long")


UNIVERSAL_KINDS = ("unary", "binary", "gamma", "delta", "zeta",
                   "golomb", "rice", "vbyte", "vnibble")


@dataclass(frozen=True)
class UniversalCode:
    """A code plus its parameter.

    ``param`` is the bit width for binary, the shrinking factor for zeta, the
    divisor for golomb and the exponent for rice; ignored otherwise.
    """

    kind: str
    param: int = 0

    def __post_init__(self):
        if self.kind not in UNIVERSAL_KINDS:
            raise ContractViolation(f"unknown code {self.kind!r}")
        if self.kind in ("zeta", "golomb") and self.param < 1:
            raise ContractViolation(f"{self.kind} parameter must be >= 1")
        if self.kind in ("binary", "rice") and self.param < 0:
            raise ContractViolation(f"{self.kind} parameter must be >= 0")

    @property
    def byte_aligned(self) -> bool:
        return self.kind == "vbyte"

    def encode(self, w: BitWriter, x: int) -> None:
        if x < 1:
            raise DomainError(f"cannot code {x}: only positive integers")
        kind = self.kind
        if kind == "gamma":
            _gamma(w, x)
        elif kind == "delta":
            _delta(w, x)
        elif kind == "unary":
            _unary(w, x)
        elif kind == "binary":
            if x - 1 >> self.param:
                raise DomainError(f"{x} does not fit binary width {self.param}")
            w._write_unchecked(x - 1, self.param)
        elif kind == "zeta":
            _zeta(w, x, self.param)
        elif kind == "golomb":
            _golomb(w, x, self.param)
        elif kind == "rice":
            _rice(w, x, self.param)
        elif kind == "vbyte":
            _varint(w, x, 7)
        else:
            _varint(w, x, 3)

    def decode(self, rd: BitReader) -> int:
        kind = self.kind
        if kind == "gamma":
            return _read_gamma(rd)
        if kind == "delta":
            return _read_delta(rd)
        if kind == "unary":
            return _read_unary(rd)
        if kind == "binary":
            return rd.read_bits(self.param) + 1
        if kind == "zeta":
            return _read_zeta(rd, self.param)
        if kind == "golomb":
            return _read_golomb(rd, self.param)
        if kind == "rice":
            return _read_rice(rd, self.param)
        if kind == "vbyte":
            return _read_varint(rd, 7)
        return _read_varint(rd, 3)


def encode_universal(code: UniversalCode, gaps: Sequence[int],
                     writer: BitWriter | None = None) -> BitWriter:
    w = writer if writer is not None else BitWriter()
    for g in gaps:
        code.encode(w, g)
    return w


def decode_universal(code: UniversalCode, reader: BitReader, count: int) -> list[int]:
    return [code.decode(reader) for _ in range(count)]


def code_length(code: UniversalCode, x: int) -> int:
    w = BitWriter()
    code.encode(w, x)
    return w.bit_count


def golomb_parameter(density: float) -> int:
    """Gallager-Van Voorhis divisor for a geometric source of parameter ``density``."""
    if not density > 0:
        raise DomainError("density must be positive")
    if density >= 1:
        return 1
    b = math.ceil(math.log(2 - density) / -math.log1p(-density))
    return max(1, b)


def rice_parameter(density: float) -> int:
    """Exponent of the power of two nearest to the Golomb divisor."""
    b = golomb_parameter(density)
    return max(0, round(math.log2(b)))
