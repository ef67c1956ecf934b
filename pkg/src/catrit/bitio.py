"""Bit-granular writer and reader over byte buffers.

Bits are packed most-significant first inside each byte. The writer keeps an
exact count of the bits it accepted; the zero padding added when the last
byte is flushed never counts toward that total.
"""
from __future__ import annotations

from .errors import ContractViolation, OutOfDataError

__all__ = ["BitWriter", "BitReader"]


class BitWriter:
    """Append-only bit sink.

    >>> w = BitWriter()
    >>> w.write_bits(19, 5)
    >>> w.to_bitstring()
    '10011'
    """

    def __init__(self):
        self._buf = bytearray()
        self._acc = 0       # pending bits, not yet a full byte
        self._nacc = 0
        self.bit_count = 0

    def write_bit(self, bit: int) -> None:
        self._acc = (self._acc << 1) | (bit & 1)
        self._nacc += 1
        self.bit_count += 1
        if self._nacc == 8:
            self._buf.append(self._acc)
            self._acc = 0
            self._nacc = 0

    def write_bits(self, value: int, width: int) -> None:
        if not 0 <= width <= 64:
            raise ContractViolation(f"width must be in 0..64, got {width}")
        if value < 0 or value >> width:
            raise ContractViolation(f"value {value} does not fit in {width} bits")
        self._write_unchecked(value, width)

    def write_long(self, value: int, width: int) -> None:
        """Like :meth:`write_bits` but without the 64-bit width limit."""
        if width < 0 or value < 0 or value >> width:
            raise ContractViolation(f"value {value} does not fit in {width} bits")
        self._write_unchecked(value, width)

    def _write_unchecked(self, value: int, width: int) -> None:
        if width == 0:
            return
        acc = (self._acc << width) | value
        n = self._nacc + width
        self.bit_count += width
        if n >= 8:
            full = n >> 3
            rem = n & 7
            self._buf += (acc >> rem).to_bytes(full, "big")
            acc &= (1 << rem) - 1
            n = rem
        self._acc = acc
        self._nacc = n

    def write_unary(self, count: int) -> None:
        """Write ``count`` one bits followed by a zero bit."""
        self._write_unchecked(((1 << count) - 1) << 1, count + 1)

    def pad_to_byte(self) -> int:
        """Write zero bits up to the next byte boundary; return how many."""
        pad = (-self.bit_count) & 7
        self._write_unchecked(0, pad)
        return pad

    def extend(self, other: "BitWriter") -> None:
        """Append every bit accepted by ``other``."""
        data = other.getvalue()
        nbits = other.bit_count
        full = nbits >> 3
        if self._nacc == 0:
            self._buf += data[:full]
            self.bit_count += full * 8
        else:
            for b in data[:full]:
                self._write_unchecked(b, 8)
        rem = nbits & 7
        if rem:
            self._write_unchecked(data[full] >> (8 - rem), rem)

    def getvalue(self) -> bytes:
        """Bytes written so far, the last one zero padded."""
        if self._nacc:
            return bytes(self._buf) + bytes([self._acc << (8 - self._nacc)])
        return bytes(self._buf)

    def to_bitstring(self) -> str:
        s = "".join(format(b, "08b") for b in self.getvalue())
        return s[: self.bit_count]

    def __len__(self) -> int:
        return self.bit_count


class BitReader:
    """Sequential bit source over ``data``.

    ``limit`` caps the number of readable bits (defaults to ``8 * len(data)``).
    Reading past it raises :class:`OutOfDataError`.
    """

    def __init__(self, data: bytes, limit: int | None = None, position: int = 0):
        self._data = bytes(data)
        total = len(self._data) * 8
        if limit is None:
            limit = total
        if not 0 <= limit <= total:
            raise ContractViolation(f"limit {limit} outside 0..{total}")
        self.limit = limit
        self.position = position

    @property
    def remaining(self) -> int:
        return self.limit - self.position

    def read_bit(self) -> int:
        pos = self.position
        if pos >= self.limit:
            raise OutOfDataError("read past end of bit stream")
        self.position = pos + 1
        return (self._data[pos >> 3] >> (7 - (pos & 7))) & 1

    def read_bit_or_zero(self) -> int:
        """Arithmetic-decoder tail read: zero once the stream is exhausted."""
        pos = self.position
        if pos >= self.limit:
            self.position = pos + 1
            return 0
        self.position = pos + 1
        return (self._data[pos >> 3] >> (7 - (pos & 7))) & 1

    def read_bits(self, width: int) -> int:
        if width < 0:
            raise ContractViolation(f"negative width {width}")
        if width == 0:
            return 0
        pos = self.position
        end = pos + width
        if end > self.limit:
            raise OutOfDataError(f"need {width} bits, {self.limit - pos} left")
        first = pos >> 3
        last = (end + 7) >> 3
        chunk = int.from_bytes(self._data[first:last], "big")
        chunk >>= (last << 3) - end
        self.position = end
        return chunk & ((1 << width) - 1)

    def read_unary(self) -> int:
        """Count one bits up to (and consuming) the terminating zero bit."""
        n = 0
        pos = self.position
        data = self._data
        limit = self.limit
        while True:
            if pos >= limit:
                self.position = pos
                raise OutOfDataError("unterminated unary code")
            off = pos & 7
            avail = min(8 - off, limit - pos)
            b = (data[pos >> 3] << off) & 0xFF
            ones = 8 - ((~b) & 0xFF).bit_length()   # leading one bits
            if ones < avail:
                self.position = pos + ones + 1
                return n + ones
            n += avail
            pos += avail

    def sub_reader(self, nbits: int) -> "BitReader":
        """Reader over the next ``nbits`` bits; this reader skips past them."""
        if nbits < 0 or self.position + nbits > self.limit:
            raise OutOfDataError(f"need {nbits} bits, {self.remaining} left")
        sub = BitReader.__new__(BitReader)
        sub._data = self._data
        sub.limit = self.position + nbits
        sub.position = self.position
        self.position += nbits
        return sub

    def align_to_byte(self) -> None:
        pad = (-self.position) & 7
        if pad:
            self.read_bits(pad)
