"""Hybrid trit contexts, occurrence tables and automatic parameter choice.

A general context is the two/not-two flags of the last ``k`` symbols plus the
number of twos among the ``w`` symbols before them.  The first ``k + w``
symbols of each list use initial contexts made of the flags of the last
``min(seen, k_init)`` symbols.  Zeros and ones are never distinguished.

All contexts live in one flat table: initial contexts first (depth
ascending, flag value ascending), then general contexts (window count
ascending, flag value ascending).  Flag values read oldest to newest as a
binary number with T=1, so ``NTN`` is 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .bitio import BitReader, BitWriter
from .errors import ContractViolation, FormatError

__all__ = [
    "ContextParams",
    "ContextState",
    "OccurrenceTable",
    "normalize",
    "halve",
    "forced2_cap",
    "select_static_params",
    "select_adaptive_params",
    "static_model_bits",
    "initial_id",
    "general_id",
]


def forced2_cap(nb_documents: int) -> int:
    """Longest possible run of non-2 trits when no gap exceeds ``nb_documents``."""
    if nb_documents < 1:
        raise ContractViolation("nb_documents must be >= 1")
    return nb_documents.bit_length() - 1


@dataclass(frozen=True)
class ContextParams:
    k: int
    w: int
    k_init: int
    norm_bits: int = 8
    # forced-2 shortcut is active when k + w equals this cap
    cap: int | None = None

    def __post_init__(self):
        if min(self.k, self.w, self.k_init) < 0:
            raise ContractViolation("k, w and k_init must be non-negative")
        if self.k_init > self.k + self.w:
            raise ContractViolation("k_init must not exceed k + w")
        if not 2 <= self.norm_bits <= 16:
            raise ContractViolation("norm_bits must be in 2..16")
        if self.k > 24 or self.w > 255:
            raise ContractViolation("context too large")

    @property
    def gamma(self) -> int:
        return self.k + self.w

    @property
    def halving_period(self) -> int:
        return 1 << self.k

    @property
    def n_initial(self) -> int:
        return (1 << (self.k_init + 1)) - 1

    @property
    def n_general(self) -> int:
        return (self.w + 1) << self.k

    @property
    def n_contexts(self) -> int:
        return self.n_initial + self.n_general

    @property
    def forced(self) -> bool:
        return self.cap is not None and self.k + self.w == self.cap

    def with_cap(self, nb_documents: int) -> "ContextParams":
        """Shrink ``w`` (then ``k``) so that ``k + w`` fits the forced-2 cap."""
        cap = forced2_cap(nb_documents)
        k, w = self.k, self.w
        if k + w > cap:
            w = max(0, cap - k)
            k = min(k, cap - w)
        return replace(self, k=k, w=w, k_init=min(self.k_init, k + w), cap=cap)


def initial_id(depth: int, flags: int) -> int:
    return (1 << depth) - 1 + flags


def general_id(params: ContextParams, window_count: int, flags: int) -> int:
    return params.n_initial + (window_count << params.k) + flags


class ContextState:
    """Per-list context tracker.

    ``history`` holds the last ``k + w`` flags, most recent in bit 0, so the
    k-suffix flags are ``history & (2^k - 1)``.
    """

    __slots__ = ("k", "w", "k_init", "gamma", "_kmask", "_hmask", "_base",
                 "history", "window_count", "seen")

    def __init__(self, params: ContextParams):
        self.k = params.k
        self.w = params.w
        self.k_init = params.k_init
        self.gamma = params.k + params.w
        self._kmask = (1 << params.k) - 1
        self._hmask = (1 << self.gamma) - 1
        self._base = params.n_initial
        self.reset()

    def reset(self) -> None:
        self.history = 0
        self.window_count = 0
        self.seen = 0

    @property
    def recent_flags(self) -> int:
        return self.history & self._kmask

    @property
    def initial(self) -> bool:
        return self.seen < self.gamma

    def context_id(self) -> int:
        if self.seen < self.gamma:
            d = self.seen if self.seen < self.k_init else self.k_init
            return (1 << d) - 1 + (self.history & ((1 << d) - 1))
        return self._base + (self.window_count << self.k) + (self.history & self._kmask)

    def is_forced(self) -> bool:
        """True when the last k + w flags are all N (meaningful only if the
        params have the forced-2 shortcut active)."""
        return self.seen >= self.gamma and not self.history

    def update(self, symbol: int) -> None:
        flag = 1 if symbol >= 2 else 0
        h = self.history
        if self.gamma:
            if self.k:
                entering = (h >> (self.k - 1)) & 1
            else:
                entering = flag
            if self.w:
                self.window_count += entering - ((h >> (self.gamma - 1)) & 1)
            self.history = ((h << 1) | flag) & self._hmask
        self.seen += 1


def _largest_remainder(raw: Sequence[int], total: int) -> list[int]:
    s = sum(raw)
    n = len(raw)
    if s == 0:
        base = [total // n] * n
        for i in range(total - sum(base)):
            base[i] += 1
        return base
    scaled = [c * total for c in raw]
    out = [x // s for x in scaled]
    for i, c in enumerate(raw):
        if c and not out[i]:
            out[i] = 1
    diff = total - sum(out)
    if diff > 0:
        order = sorted((i for i in range(n) if raw[i]),
                       key=lambda i: (-(scaled[i] % s), -raw[i], i))
        j = 0
        while diff:
            out[order[j % len(order)]] += 1
            diff -= 1
            j += 1
    elif diff < 0:
        # only reachable through the >=1 floor; take from the biggest shares
        while diff:
            i = max(range(n), key=lambda i: (out[i], -i))
            out[i] -= 1
            diff += 1
    return out


def normalize(counts: Sequence[int], norm_bits: int = 8) -> list[int]:
    """Scale raw counts to integers summing to ``2**norm_bits - 1``.

    Largest-remainder rounding; a nonzero raw count never maps to zero and an
    all-zero row becomes a uniform split.

    >>> normalize([1, 0, 10**6])
    [1, 0, 254]
    >>> normalize([0, 0, 0])
    [85, 85, 85]
    """
    if norm_bits < 2:
        raise ContractViolation("norm_bits must be >= 2")
    return _largest_remainder(counts, (1 << norm_bits) - 1)


def halve(counts: list[int]) -> None:
    """In-place ``c <- max(1, ceil(c / 2))``."""
    for i, c in enumerate(counts):
        counts[i] = (c + 1) >> 1 or 1


class OccurrenceTable:
    """One row of ``n_symbols`` counters per context of ``params``."""

    def __init__(self, params: ContextParams, n_symbols: int = 3, initial: int = 0):
        self.params = params
        self.n_symbols = n_symbols
        self.rows = [[initial] * n_symbols for _ in range(params.n_contexts)]

    @classmethod
    def count(cls, symbol_lists: Iterable[bytes], params: ContextParams,
              n_symbols: int = 3) -> "OccurrenceTable":
        """First pass of the static method: count (context, symbol) pairs."""
        table = cls(params, n_symbols)
        rows = table.rows
        state = ContextState(params)
        for symbols in symbol_lists:
            state.reset()
            for s in symbols:
                rows[state.context_id()][s] += 1
                state.update(s)
        return table

    def merge(self, other: "OccurrenceTable") -> "OccurrenceTable":
        if other.params != self.params or other.n_symbols != self.n_symbols:
            raise ContractViolation("cannot merge tables with different shapes")
        for a, b in zip(self.rows, other.rows):
            for i, c in enumerate(b):
                a[i] += c
        return self

    def normalized(self) -> "OccurrenceTable":
        out = OccurrenceTable(self.params, self.n_symbols)
        out.rows = [normalize(r, self.params.norm_bits) for r in self.rows]
        return out

    def halve_all(self) -> None:
        for r in self.rows:
            halve(r)

    @property
    def stored_symbols(self) -> tuple[int, ...]:
        # symbol 1 is implied by the row sum
        return (0,) + tuple(range(2, self.n_symbols))

    def serialize(self, writer: BitWriter) -> int:
        """Write normalized rows; return number of bits written."""
        nb = self.params.norm_bits
        start = writer.bit_count
        for r in self.rows:
            for s in self.stored_symbols:
                writer.write_bits(r[s], nb)
        return writer.bit_count - start

    @classmethod
    def deserialize(cls, reader: BitReader, params: ContextParams,
                    n_symbols: int = 3) -> "OccurrenceTable":
        table = cls(params, n_symbols)
        nb = params.norm_bits
        total = (1 << nb) - 1
        stored = table.stored_symbols
        for r in table.rows:
            for s in stored:
                r[s] = reader.read_bits(nb)
            rest = total - sum(r)
            if rest < 0:
                raise FormatError("normalized model row exceeds its total")
            r[1] = rest
        return table

    def model_bits(self) -> int:
        return len(self.rows) * len(self.stored_symbols) * self.params.norm_bits

    def __eq__(self, other):
        return (isinstance(other, OccurrenceTable) and self.params == other.params
                and self.rows == other.rows)


def static_model_bits(k: int, norm_bits: int = 8) -> int:
    """Serialized size of the default static model for a given ``k``."""
    w = k + 1
    k_init = -(-k // 3)
    return 2 * norm_bits * (((w + 1) << k) + (1 << (k_init + 1)) - 1)


def select_static_params(nb_pointers: int, nb_documents: int,
                         norm_bits: int = 8, budget: float = 0.02) -> ContextParams:
    """Largest ``k`` whose stored model fits ``budget * nb_pointers`` bits,
    with ``w = k + 1`` and ``k_init = ceil(k / 3)``."""
    if nb_pointers < 1:
        raise ContractViolation("nb_pointers must be >= 1")
    k = 1
    while k < 24 and static_model_bits(k + 1, norm_bits) <= budget * nb_pointers:
        k += 1
    params = ContextParams(k=k, w=k + 1, k_init=-(-k // 3), norm_bits=norm_bits)
    return params.with_cap(nb_documents)


ADAPTIVE_SLOPE = 1.67264
ADAPTIVE_OFFSET = -2.24758


def adaptive_k(nb_pointers: int) -> int:
    return max(1, math.floor(math.log(nb_pointers) / ADAPTIVE_SLOPE + ADAPTIVE_OFFSET + 0.5))


def select_adaptive_params(nb_pointers: int, nb_documents: int,
                           norm_bits: int = 8) -> ContextParams:
    """``k = w`` from a log fit on the pointer count, ``k_init = min(2k - 1, 16)``."""
    if nb_pointers < 1:
        raise ContractViolation("nb_pointers must be >= 1")
    k = adaptive_k(nb_pointers)
    params = ContextParams(k=k, w=k, k_init=min(2 * k - 1, 16), norm_bits=norm_bits)
    return params.with_cap(nb_documents)
