"""Container format and the estimator-style base class shared by all codecs.

On-disk layout (all sections are contiguous in one bit stream)::

    header   magic "CATR", version, codec id,
             nb_documents, nb_words, nb_pointers, total_bits  (u64 little endian)
             four parameter bytes (k, w, k_init, norm_bits for static trit
             codecs; k, w, k_init, halving policy for adaptive ones)
    lengths  Elias delta code of every list length, in word order
    model    codec specific (static trit model only)
    payload  codec specific

``total_bits`` counts every bit above; the zero padding of the last byte is
not part of it.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ..bitio import BitReader, BitWriter
from ..errors import FormatError, TruncatedStreamError
from ..index import InvertedIndex, check_index
from ..universal import UniversalCode

__all__ = [
    "MAGIC",
    "VERSION",
    "HEADER_BITS",
    "Header",
    "CompressedIndexPayload",
    "IndexCodec",
    "register",
    "codec_by_name",
    "codec_by_id",
    "CODECS",
    "decompress",
    "write_lengths",
    "read_lengths",
]

MAGIC = b"CATR"
VERSION = 1
_HEADER = struct.Struct("<4sBBQQQQ4B")
HEADER_BITS = _HEADER.size * 8
_TOTAL_OFFSET = 4 + 1 + 1 + 8 * 3

DELTA = UniversalCode("delta")


@dataclass
class Header:
    codec_id: int
    nb_documents: int
    nb_words: int
    nb_pointers: int
    params: tuple[int, int, int, int] = (0, 0, 0, 0)
    total_bits: int = 0
    version: int = VERSION

    def pack(self) -> bytes:
        return _HEADER.pack(MAGIC, self.version, self.codec_id, self.nb_documents,
                            self.nb_words, self.nb_pointers, self.total_bits, *self.params)

    @classmethod
    def unpack(cls, data: bytes) -> "Header":
        if len(data) < _HEADER.size:
            raise TruncatedStreamError("payload shorter than its header")
        magic, version, codec_id, nd, nw, npt, total, *params = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise FormatError("bad magic bytes")
        if version != VERSION:
            raise FormatError(f"unsupported format version {version}")
        return cls(codec_id, nd, nw, npt, tuple(params), total, version)


@dataclass
class CompressedIndexPayload:
    """Serialized index plus its exact per-section bit accounting."""

    data: bytes
    codec: str
    nb_pointers: int
    section_bits: dict[str, int] = field(default_factory=dict)

    @property
    def total_bits(self) -> int:
        return sum(self.section_bits.values())

    @property
    def bits_per_pointer(self) -> float:
        return self.total_bits / self.nb_pointers

    def __len__(self) -> int:
        return len(self.data)

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompressedIndexPayload":
        """Wrap stored bytes; only the header and total sizes are known."""
        h = Header.unpack(data)
        name = codec_by_id(h.codec_id).name
        return cls(bytes(data), name, h.nb_pointers,
                   {"header": HEADER_BITS, "body": h.total_bits - HEADER_BITS})


def write_lengths(w: BitWriter, lengths) -> int:
    start = w.bit_count
    for n in lengths:
        DELTA.encode(w, n)
    return w.bit_count - start


def read_lengths(rd: BitReader, nb_words: int) -> list[int]:
    return [DELTA.decode(rd) for _ in range(nb_words)]


CODECS: dict[str, type] = {}
_BY_ID: dict[int, type] = {}


def register(cls):
    CODECS[cls.name] = cls
    _BY_ID[cls.codec_id] = cls
    return cls


def codec_by_name(name: str, **params) -> "IndexCodec":
    try:
        cls = CODECS[name]
    except KeyError:
        raise ValueError(f"unknown codec {name!r}; choose from {sorted(CODECS)}") from None
    return cls(**params)


def codec_by_id(codec_id: int) -> type:
    try:
        return _BY_ID[codec_id]
    except KeyError:
        raise FormatError(f"unknown codec id {codec_id}") from None


class IndexCodec(TransformerMixin, BaseEstimator):
    """Base class: ``fit`` chooses parameters (and a model, when the codec
    stores one), ``transform`` compresses, ``inverse_transform`` restores.

    Subclasses implement ``_fit``, ``_param_bytes``, ``_set_param_bytes``,
    ``_encode_body`` and ``_decode_body``.
    """

    name = "abstract"
    codec_id = -1
    stores_lengths = True

    # -- estimator API -------------------------------------------------

    def fit(self, index: InvertedIndex, y=None):
        check_index(index)
        self._fit(index)
        self.n_documents_ = index.nb_documents
        return self

    def transform(self, index: InvertedIndex) -> CompressedIndexPayload:
        self._check_fitted()
        check_index(index)
        w = BitWriter()
        header = Header(self.codec_id, index.nb_documents, index.nb_words,
                        index.nb_pointers, self._param_bytes())
        w.write_long(0, HEADER_BITS)  # placeholder, patched below
        sections = {"header": HEADER_BITS, "lengths": 0}
        if self.stores_lengths:
            sections["lengths"] = write_lengths(w, index.lengths)
        sections.update(self._encode_body(w, index))
        header.total_bits = w.bit_count
        if sum(sections.values()) != w.bit_count:
            raise AssertionError("section accounting does not match the writer")
        data = bytearray(w.getvalue())
        data[: _HEADER.size] = header.pack()
        return CompressedIndexPayload(bytes(data), self.name, index.nb_pointers, sections)

    def inverse_transform(self, payload) -> InvertedIndex:
        data = payload.data if isinstance(payload, CompressedIndexPayload) else bytes(payload)
        header = Header.unpack(data)
        if header.codec_id != self.codec_id:
            raise FormatError(f"payload was written by codec id {header.codec_id}, "
                              f"not {self.name}")
        if header.total_bits > len(data) * 8:
            raise TruncatedStreamError(
                f"payload declares {header.total_bits} bits, holds {len(data) * 8}")
        if header.total_bits < HEADER_BITS or len(data) != (header.total_bits + 7) // 8:
            raise FormatError("payload size disagrees with its header")
        if header.nb_documents < 1:
            raise FormatError("nb_documents must be positive")
        self._set_param_bytes(header.params, header.nb_documents)
        rd = BitReader(data, header.total_bits, HEADER_BITS)
        lengths = None
        if self.stores_lengths:
            lengths = read_lengths(rd, header.nb_words)
            if sum(lengths) != header.nb_pointers:
                raise FormatError("list lengths do not add up to nb_pointers")
            if any(n > header.nb_documents for n in lengths):
                raise FormatError("list longer than the document universe")
        postings = self._decode_body(rd, header.nb_documents, header.nb_words, lengths)
        if len(postings) != header.nb_words:
            raise FormatError("decoded word count disagrees with header")
        index = InvertedIndex(header.nb_documents, postings)
        if index.nb_pointers != header.nb_pointers:
            raise FormatError("decoded pointer count disagrees with header")
        try:
            check_index(index)
        except ValueError as exc:
            raise FormatError(f"decoded index is invalid: {exc}") from None
        return index

    # aliases matching the rest of the toolkit
    def compress(self, index: InvertedIndex) -> CompressedIndexPayload:
        return self.fit_transform(index)

    def decompress(self, payload) -> InvertedIndex:
        return self.inverse_transform(payload)

    def _check_fitted(self) -> None:
        if not hasattr(self, "n_documents_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit first")

    # -- hooks ----------------------------------------------------------

    def _fit(self, index: InvertedIndex) -> None:
        pass

    def _param_bytes(self) -> tuple[int, int, int, int]:
        return (0, 0, 0, 0)

    def _set_param_bytes(self, params, nb_documents: int) -> None:
        pass

    def _encode_body(self, w: BitWriter, index: InvertedIndex) -> dict[str, int]:
        raise NotImplementedError

    def _decode_body(self, rd: BitReader, nb_documents: int, nb_words: int,
                     lengths: list[int] | None) -> list[list[int]]:
        raise NotImplementedError


def decompress(payload) -> InvertedIndex:
    """Decode any payload, dispatching on the codec id stored in its header."""
    data = payload.data if isinstance(payload, CompressedIndexPayload) else bytes(payload)
    header = Header.unpack(data)
    return codec_by_id(header.codec_id)().inverse_transform(data)
