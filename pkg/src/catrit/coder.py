"""Integer arithmetic coder with 32-bit low/high registers.

Classic shift-and-underflow scheme: whenever low and high share their top bit
it is emitted; when they straddle the middle quarters an underflow is
recorded and resolved by the next emitted bit. Frequency tables are plain
sequences of non-negative counts, one per symbol.

The decoder reads zero bits once its payload is exhausted, so the stopping
rule must come from the caller (symbol counts or an end symbol).
"""
from __future__ import annotations

import math
from typing import Sequence

from .bitio import BitReader, BitWriter
from .errors import ContractViolation, UnencodableSymbolError

__all__ = [
    "STATE_BITS",
    "MAX_TOTAL",
    "FrequencyTable",
    "ArithmeticEncoder",
    "ArithmeticDecoder",
    "ideal_bits",
]

STATE_BITS = 32
_FULL = 1 << STATE_BITS
_HALF = _FULL >> 1
_QUARTER = _HALF >> 1
_MASK = _FULL - 1
MAX_TOTAL = _QUARTER + 2


class FrequencyTable:
    """Counts for one coding step; ``total`` is their sum."""

    __slots__ = ("counts", "total")

    def __init__(self, counts: Sequence[int]):
        self.counts = [int(c) for c in counts]
        if any(c < 0 for c in self.counts):
            raise ContractViolation("negative frequency")
        self.total = sum(self.counts)

    def __len__(self):
        return len(self.counts)

    def __getitem__(self, i):
        return self.counts[i]

    def __iter__(self):
        return iter(self.counts)

    def probability(self, sym: int) -> float:
        return self.counts[sym] / self.total


def _as_counts(freqs):
    return freqs.counts if isinstance(freqs, FrequencyTable) else freqs


class ArithmeticEncoder:
    """Writes an arithmetic-coded bit stream into a :class:`BitWriter`."""

    def __init__(self, writer: BitWriter | None = None):
        self.writer = writer if writer is not None else BitWriter()
        self.low = 0
        self.high = _MASK
        self.pending = 0
        self.start_bit = self.writer.bit_count
        self.finished = False

    def encode_symbol(self, freqs, symbol: int) -> None:
        counts = _as_counts(freqs)
        c = counts[symbol]
        if c <= 0:
            raise UnencodableSymbolError(f"symbol {symbol} has zero frequency")
        symlow = 0
        for i in range(symbol):
            symlow += counts[i]
        total = symlow + c
        for i in range(symbol + 1, len(counts)):
            total += counts[i]
        if total > MAX_TOTAL:
            raise ContractViolation(f"frequency total {total} exceeds {MAX_TOTAL}")
        self._narrow(symlow, symlow + c, total)

    def _narrow(self, symlow: int, symhigh: int, total: int) -> None:
        low = self.low
        rng = self.high - low + 1
        high = low + symhigh * rng // total - 1
        low = low + symlow * rng // total
        writer = self.writer
        while not ((low ^ high) & _HALF):
            bit = low >> 31
            writer.write_bit(bit)
            if self.pending:
                writer.write_long(((1 << self.pending) - 1) if not bit else 0, self.pending)
                self.pending = 0
            low = (low << 1) & _MASK
            high = ((high << 1) & _MASK) | 1
        while low & ~high & _QUARTER:
            self.pending += 1
            low = (low << 1) ^ _HALF
            high = ((high ^ _HALF) << 1) | _HALF | 1
        self.low = low
        self.high = high

    def finish(self) -> int:
        """Flush the disambiguating tail; return payload size in bits."""
        if not self.finished:
            self.writer.write_bit(1)
            self.finished = True
        return self.writer.bit_count - self.start_bit

    @property
    def bits_written(self) -> int:
        return self.writer.bit_count - self.start_bit


class ArithmeticDecoder:
    """Decodes symbols from ``reader``; at most ``limit`` payload bits are
    consumed from the reader's current position, zeros afterwards."""

    def __init__(self, reader: BitReader, limit: int | None = None):
        self.reader = reader
        start = reader.position
        avail = reader.limit - start
        self._end = start + (avail if limit is None else min(limit, avail))
        self.low = 0
        self.high = _MASK
        code = 0
        for _ in range(STATE_BITS):
            code = (code << 1) | self._next_bit()
        self.code = code

    @classmethod
    def attach(cls, payload: bytes, nbits: int | None = None) -> "ArithmeticDecoder":
        return cls(BitReader(payload), nbits)

    def _next_bit(self) -> int:
        r = self.reader
        if r.position >= self._end:
            r.position += 1
            return 0
        return r.read_bit()

    def decode_symbol(self, freqs) -> int:
        counts = _as_counts(freqs)
        total = 0
        for c in counts:
            total += c
        low = self.low
        rng = self.high - low + 1
        value = ((self.code - low + 1) * total - 1) // rng
        symlow = 0
        symbol = 0
        last = len(counts) - 1
        while symbol < last:
            c = counts[symbol]
            if value < symlow + c:
                break
            symlow += c
            symbol += 1
        symhigh = symlow + counts[symbol]
        high = low + symhigh * rng // total - 1
        low = low + symlow * rng // total
        code = self.code
        while not ((low ^ high) & _HALF):
            low = (low << 1) & _MASK
            high = ((high << 1) & _MASK) | 1
            code = ((code << 1) & _MASK) | self._next_bit()
        while low & ~high & _QUARTER:
            low = (low << 1) ^ _HALF
            high = ((high ^ _HALF) << 1) | _HALF | 1
            code = (code & _HALF) | ((code << 1) & (_MASK >> 1)) | self._next_bit()
        self.low = low
        self.high = high
        self.code = code
        return symbol


def ideal_bits(counts: Sequence[int], probabilities: Sequence[float]) -> float:
    """Cost of a perfect arithmetic coder: sum of n_i * log2(1 / P(i))."""
    bits = 0.0
    for n, p in zip(counts, probabilities):
        if n:
            bits -= n * math.log2(p)
    return bits
