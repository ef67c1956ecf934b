"""Inverted index model, corpus ingestion, raw persistence and reorderings."""
from __future__ import annotations

import io
import os
import re
import struct
from fractions import Fraction
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence

from .errors import DomainError, FormatError

__all__ = [
    "InvertedIndex",
    "BatchPartition",
    "BATCH_DELIMITERS",
    "docs_to_gaps",
    "gaps_to_docs",
    "check_index",
    "ingest_corpus",
    "read_corpus",
    "apply_doc_permutation",
    "read_permutation",
    "sort_words_by_density",
    "partition_batches",
    "save_raw",
    "load_raw",
]


def docs_to_gaps(docs: Sequence[int]) -> list[int]:
    prev = 0
    out = []
    for d in docs:
        out.append(d - prev)
        prev = d
    return out


def gaps_to_docs(gaps: Iterable[int]) -> list[int]:
    acc = 0
    out = []
    for g in gaps:
        acc += g
        out.append(acc)
    return out


@dataclass
class InvertedIndex:
    """Posting lists over documents ``1..nb_documents``.

    ``postings[i]`` is the strictly increasing list of document IDs of word
    ``i``; ``terms`` optionally names the words.
    """

    nb_documents: int
    postings: list[list[int]]
    terms: list[str] | None = field(default=None)

    @property
    def nb_words(self) -> int:
        return len(self.postings)

    @property
    def nb_pointers(self) -> int:
        return sum(len(p) for p in self.postings)

    @property
    def lengths(self) -> list[int]:
        return [len(p) for p in self.postings]

    def gap_lists(self) -> list[list[int]]:
        return [docs_to_gaps(p) for p in self.postings]

    @classmethod
    def from_gap_lists(cls, nb_documents: int, gap_lists: Iterable[Sequence[int]],
                       terms: list[str] | None = None) -> "InvertedIndex":
        return cls(nb_documents, [gaps_to_docs(g) for g in gap_lists], terms)

    def densities(self) -> list[float]:
        return [len(p) / self.nb_documents for p in self.postings]

    def __eq__(self, other):
        if not isinstance(other, InvertedIndex):
            return NotImplemented
        return (self.nb_documents == other.nb_documents
                and [list(p) for p in self.postings] == [list(p) for p in other.postings])

    def __repr__(self):
        return (f"InvertedIndex(nb_documents={self.nb_documents}, "
                f"nb_words={self.nb_words}, nb_pointers={self.nb_pointers})")


def check_index(index: InvertedIndex, allow_empty_lists: bool = False) -> InvertedIndex:
    """Validate an index the way codecs expect it; return it unchanged."""
    if not isinstance(index, InvertedIndex):
        raise DomainError(f"expected an InvertedIndex, got {type(index).__name__}")
    n = index.nb_documents
    if not 1 <= n < 1 << 32:
        raise DomainError(f"nb_documents must be in 1..2^32-1, got {n}")
    for i, docs in enumerate(index.postings):
        if not docs:
            if allow_empty_lists:
                continue
            raise DomainError(f"posting list {i} is empty")
        prev = 0
        for d in docs:
            if d <= prev:
                raise DomainError(f"posting list {i} is not strictly increasing")
            prev = d
        if prev > n:
            raise DomainError(f"posting list {i} references document {prev} > {n}")
    return index


_TOKEN = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    """Case-folded maximal alphanumeric runs."""
    return _TOKEN.findall(text.casefold())


def ingest_corpus(documents: Iterable[str]) -> InvertedIndex:
    """Build an index; document IDs follow input order starting at 1.

    Words are numbered by first appearance.
    """
    postings: dict[str, list[int]] = {}
    n = 0
    for n, text in enumerate(documents, start=1):
        for tok in dict.fromkeys(tokenize(text)):
            postings.setdefault(tok, []).append(n)
    if n == 0:
        raise DomainError("empty corpus")
    terms = list(postings)
    return InvertedIndex(n, [postings[t] for t in terms], terms)


def read_corpus(path: str | os.PathLike, one_per_line: bool | None = None) -> list[str]:
    """Directory of text files in filename order, or one document per line."""
    p = Path(path)
    if p.is_dir():
        if one_per_line:
            raise DomainError("--lines requires a file, not a directory")
        return [f.read_text(encoding="utf-8", errors="replace")
                for f in sorted(p.iterdir()) if f.is_file()]
    text = p.read_text(encoding="utf-8", errors="replace")
    return text.splitlines()


def apply_doc_permutation(index: InvertedIndex, perm: Sequence[int]) -> InvertedIndex:
    """Rename document ``i`` to ``perm[i - 1]`` and re-sort every list."""
    n = index.nb_documents
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise DomainError("permutation is not a bijection on 1..nb_documents")
    postings = [sorted(perm[d - 1] for d in docs) for docs in index.postings]
    return InvertedIndex(n, postings, index.terms)


def read_permutation(path: str | os.PathLike) -> list[int]:
    with open(path, encoding="ascii") as fh:
        try:
            return [int(line) for line in fh if line.strip()]
        except ValueError as exc:
            raise FormatError(f"bad permutation file: {exc}") from None


def sort_words_by_density(index: InvertedIndex) -> InvertedIndex:
    order = sorted(range(index.nb_words), key=lambda i: len(index.postings[i]))
    terms = [index.terms[i] for i in order] if index.terms is not None else None
    return InvertedIndex(index.nb_documents, [index.postings[i] for i in order], terms)


BATCH_DELIMITERS = (0.0, 0.0002, 0.001, 0.01, 0.03, 0.1, 0.2, 1.0)


@dataclass
class BatchPartition:
    delimiters: tuple[float, ...]
    batches: list[list[int]]

    def sub_index(self, index: InvertedIndex, b: int) -> InvertedIndex:
        ids = self.batches[b]
        terms = [index.terms[i] for i in ids] if index.terms is not None else None
        return InvertedIndex(index.nb_documents, [index.postings[i] for i in ids], terms)


def batch_of(length: int, nb_documents: int,
             delimiters: Sequence[float] = BATCH_DELIMITERS) -> int:
    """Batch number (0-based) whose interval (d_i, d_{i+1}] holds the density."""
    for b in range(len(delimiters) - 1):
        # exact rational comparison: length / n <= d  <=>  length <= d * n
        if length <= Fraction(str(delimiters[b + 1])) * nb_documents:
            return b
    return len(delimiters) - 2


def partition_batches(index: InvertedIndex,
                      delimiters: Sequence[float] = BATCH_DELIMITERS) -> BatchPartition:
    batches: list[list[int]] = [[] for _ in range(len(delimiters) - 1)]
    for i, docs in enumerate(index.postings):
        batches[batch_of(len(docs), index.nb_documents, delimiters)].append(i)
    return BatchPartition(tuple(delimiters), batches)


def save_raw(index: InvertedIndex, sink: BinaryIO | str | os.PathLike) -> int:
    """Write the flat raw format; return the number of bytes written."""
    buf = io.BytesIO()
    buf.write(struct.pack("<QQ", index.nb_documents, index.nb_words))
    for docs in index.postings:
        buf.write(struct.pack(f"<I{len(docs)}I", len(docs), *docs))
    data = buf.getvalue()
    if isinstance(sink, (str, os.PathLike)):
        Path(sink).write_bytes(data)
    else:
        sink.write(data)
    return len(data)


def load_raw(source: BinaryIO | bytes | str | os.PathLike) -> InvertedIndex:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, (str, os.PathLike)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
    if len(data) < 16:
        raise FormatError("raw index shorter than its header")
    nb_documents, nb_words = struct.unpack_from("<QQ", data, 0)
    pos = 16
    postings = []
    for i in range(nb_words):
        if pos + 4 > len(data):
            raise FormatError("raw index truncated")
        (length,) = struct.unpack_from("<I", data, pos)
        pos += 4
        if pos + 4 * length > len(data):
            raise FormatError("raw index truncated")
        docs = list(struct.unpack_from(f"<{length}I", data, pos))
        pos += 4 * length
        prev = 0
        for d in docs:
            if d <= prev or d > nb_documents:
                raise FormatError(f"word {i}: document IDs not increasing within 1..{nb_documents}")
            prev = d
        postings.append(docs)
    if pos != len(data):
        raise FormatError("trailing bytes after raw index")
    return InvertedIndex(nb_documents, postings)
