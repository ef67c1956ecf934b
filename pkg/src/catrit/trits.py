"""Gap lists to trit / quatrit lists, and the B2/B01 and TL/B01 splits.

A trit list is a ``bytes`` object whose items are symbols in {0, 1, 2}; each
gap contributes its binary digits without the leading one, then a closing 2.
Quatrit lists append a single end-of-list symbol 3.  Bit sequences (B2, B01)
are ``bytes`` over {0, 1}.

>>> trits_to_str(gaps_to_trits([4, 1, 1, 3, 5, 2]))
'002221201202'
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DomainError, InconsistencyError, TruncatedStreamError

__all__ = [
    "gap_to_trits",
    "gaps_to_trits",
    "trits_to_gaps",
    "gaps_to_quatrits",
    "quatrits_to_gaps",
    "split_b2b01",
    "merge_b2b01",
    "split_tlb01",
    "merge_tlb01",
    "trits_to_str",
    "str_to_trits",
    "trit_count",
    "MAX_GAP",
]

MAX_GAP = (1 << 32) - 1

_TO_SYMBOLS = bytes.maketrans(b"0123", b"\x00\x01\x02\x03")
_TO_DIGITS = bytes.maketrans(b"\x00\x01\x02\x03", b"0123")


def trits_to_str(symbols: bytes) -> str:
    return bytes(symbols).translate(_TO_DIGITS).decode("ascii")


def str_to_trits(digits: str) -> bytes:
    return digits.encode("ascii").translate(_TO_SYMBOLS)


def _check_gap(g: int) -> None:
    if not 1 <= g <= MAX_GAP:
        raise DomainError(f"gap must be in 1..2^32-1, got {g}")


def gap_to_trits(gap: int) -> bytes:
    _check_gap(gap)
    return str_to_trits(bin(gap)[3:] + "2")


def _digits(gaps: Iterable[int]) -> str:
    parts = []
    for g in gaps:
        _check_gap(g)
        parts.append(bin(g)[3:])
    parts.append("")
    return "2".join(parts)


def gaps_to_trits(gaps: Iterable[int]) -> bytes:
    return str_to_trits(_digits(gaps))


def trit_count(gaps: Iterable[int]) -> int:
    """Length of the trit list of ``gaps`` without building it."""
    return sum(int(g).bit_length() for g in gaps)


def _parse_body(body: str) -> list[int]:
    # body holds complete gap encodings, each terminated by '2'
    return [int("1" + part, 2) for part in body.split("2")[:-1]]


def trits_to_gaps(symbols: bytes, count: int) -> list[int]:
    """Decode the first ``count`` gaps of a trit list."""
    if count < 0:
        raise DomainError("count must be non-negative")
    if count == 0:
        return []
    digits = trits_to_str(symbols)
    end = -1
    for _ in range(count):
        end = digits.find("2", end + 1)
        if end < 0:
            raise TruncatedStreamError(f"trit list holds fewer than {count} gaps")
    body = digits[: end + 1]
    if "3" in body or not set(body) <= set("012"):
        raise DomainError("trit list contains a symbol outside {0,1,2}")
    return _parse_body(body)


def gaps_to_quatrits(gaps: Sequence[int]) -> bytes:
    return gaps_to_trits(gaps) + b"\x03"


def quatrits_to_gaps(symbols: bytes) -> list[int]:
    """Decode a quatrit list, stopping at the end symbol."""
    symbols = bytes(symbols)
    end = symbols.find(3)
    if end < 0:
        raise TruncatedStreamError("quatrit list has no end symbol")
    body = trits_to_str(symbols[:end])
    if body and not body.endswith("2"):
        raise InconsistencyError("end symbol does not follow a complete gap")
    return _parse_body(body)


def split_b2b01(symbols: bytes) -> tuple[bytes, bytes]:
    """Split a trit list into its 2-indicator vector and its 0/1 residue."""
    symbols = bytes(symbols)
    if symbols.translate(None, b"\x00\x01\x02"):
        raise DomainError("not a trit list")
    b2 = symbols.translate(bytes.maketrans(b"\x00\x01\x02", b"\x00\x00\x01"))
    b01 = symbols.replace(b"\x02", b"")
    return b2, b01


def merge_b2b01(b2: bytes, b01: bytes) -> bytes:
    b2 = bytes(b2)
    b01 = bytes(b01)
    if b2.count(0) != len(b01):
        raise InconsistencyError(
            f"B2 has {b2.count(0)} non-2 slots but B01 holds {len(b01)} bits"
        )
    out = bytearray(len(b2))
    j = 0
    for i, flag in enumerate(b2):
        if flag:
            out[i] = 2
        else:
            out[i] = b01[j]
            j += 1
    return bytes(out)


def split_tlb01(gaps: Sequence[int]) -> tuple[bytes, bytes]:
    """Split a gap list into the trit list of its bit lengths and the 0/1 residue."""
    lengths = [int(g).bit_length() for g in gaps]
    for g in gaps:
        _check_gap(g)
    tl = gaps_to_trits(lengths)
    b01 = gaps_to_trits(gaps).replace(b"\x02", b"")
    return tl, b01


def merge_tlb01(tl: bytes, b01: bytes) -> list[int]:
    lengths = trits_to_gaps(tl, bytes(tl).count(2))
    if sum(lengths) - len(lengths) != len(b01):
        raise InconsistencyError("bit lengths do not match the B01 residue size")
    digits = trits_to_str(b01)
    out = []
    pos = 0
    for n in lengths:
        out.append(int("1" + digits[pos : pos + n - 1], 2))
        pos += n - 1
    return out
