"""Reference codecs sharing the container format: universal codes and Interp."""
from __future__ import annotations

from ..bitio import BitReader, BitWriter
from ..errors import ContractViolation, FormatError
from ..index import InvertedIndex, docs_to_gaps, gaps_to_docs
from ..interp import (
    InterpConfig,
    block_interp_decode,
    block_interp_encode,
    interp_decode,
    interp_encode,
)
from ..universal import UniversalCode, golomb_parameter, rice_parameter
from .base import IndexCodec, register

__all__ = ["UniversalCodec", "InterpCodec", "BlockInterpCodec", "make_universal_codec"]


class UniversalCodec(IndexCodec):
    """Gap lists coded one integer at a time with a fixed universal code.

    Golomb and Rice pick their divisor per list from its density; binary
    uses the width of ``nb_documents``.
    """

    kind = "gamma"

    def __init__(self, param=None):
        self.param = param

    def _fit(self, index):
        if self.kind == "zeta":
            p = 2 if self.param is None else self.param
            if not 1 <= p <= 255:
                raise ContractViolation("zeta shrinking factor must be in 1..255")
            self.param_ = p
        else:
            self.param_ = 0

    def _param_bytes(self):
        return (self.param_, 0, 0, 0)

    def _set_param_bytes(self, params, nb_documents):
        self.param_ = params[0]
        if self.kind == "zeta" and self.param_ < 1:
            raise FormatError("zeta shrinking factor must be positive")
        self.n_documents_ = nb_documents

    def _code_for(self, length: int, nb_documents: int) -> UniversalCode:
        if self.kind == "golomb":
            return UniversalCode("golomb", golomb_parameter(length / nb_documents))
        if self.kind == "rice":
            return UniversalCode("rice", rice_parameter(length / nb_documents))
        if self.kind == "binary":
            return UniversalCode("binary", (nb_documents - 1).bit_length())
        if self.kind == "zeta":
            return UniversalCode("zeta", self.param_)
        return UniversalCode(self.kind)

    def _encode_body(self, w, index):
        start = w.bit_count
        if self.kind == "vbyte":
            w.pad_to_byte()
        n = index.nb_documents
        for docs in index.postings:
            code = self._code_for(len(docs), n)
            encode = code.encode
            for g in docs_to_gaps(docs):
                encode(w, g)
        return {"model": 0, "payload": w.bit_count - start}

    def _decode_body(self, rd, nb_documents, nb_words, lengths):
        if self.kind == "vbyte":
            rd.align_to_byte()
        out = []
        for n in lengths:
            code = self._code_for(n, nb_documents)
            decode = code.decode
            out.append(gaps_to_docs(decode(rd) for _ in range(n)))
        return out


_UNIVERSAL_IDS = {"unary": 10, "binary": 11, "gamma": 12, "delta": 13, "zeta": 14,
                  "golomb": 15, "rice": 16, "vbyte": 17, "vnibble": 18}


def make_universal_codec(kind: str) -> type:
    cls = type(f"{kind.capitalize()}Codec", (UniversalCodec,),
               {"kind": kind, "name": kind, "codec_id": _UNIVERSAL_IDS[kind],
                "__module__": __name__,
                "__doc__": f"Every gap coded with the {kind} code."})
    return register(cls)


for _kind in _UNIVERSAL_IDS:
    globals()[f"{_kind.capitalize()}Codec"] = make_universal_codec(_kind)
    __all__.append(f"{_kind.capitalize()}Codec")


@register
class InterpCodec(IndexCodec):
    """Whole-list binary interpolative coding over ``[1, nb_documents]``."""

    name = "interp"
    codec_id = 20

    def _encode_body(self, w, index):
        start = w.bit_count
        n = index.nb_documents
        for docs in index.postings:
            interp_encode(docs, 1, n, w)
        return {"model": 0, "payload": w.bit_count - start}

    def _decode_body(self, rd, nb_documents, nb_words, lengths):
        return [interp_decode(rd, n, 1, nb_documents) for n in lengths]


@register
class BlockInterpCodec(IndexCodec):
    """Interp over fixed-size blocks with per-block maxima.

    ``redundant_max`` reproduces the layout that stores each maximum twice;
    ``padding`` byte-aligns every block.
    """

    name = "block-interp"
    codec_id = 21

    def __init__(self, block_size=128, padding=False, redundant_max=False):
        self.block_size = block_size
        self.padding = padding
        self.redundant_max = redundant_max

    def _fit(self, index):
        if not 1 <= self.block_size < 1 << 16:
            raise ContractViolation("block_size must be in 1..65535")
        self.config_ = InterpConfig(True, self.block_size, bool(self.padding),
                                    bool(self.redundant_max))

    def _param_bytes(self):
        c = self.config_
        flags = int(c.padding) | int(c.redundant_max) << 1
        return (flags, c.block_size & 0xFF, c.block_size >> 8, 0)

    def _set_param_bytes(self, params, nb_documents):
        flags, lo, hi, _ = params
        size = lo | hi << 8
        if size < 1 or flags > 3:
            raise FormatError("bad block-interp parameters")
        self.config_ = InterpConfig(True, size, bool(flags & 1), bool(flags & 2))
        self.n_documents_ = nb_documents

    def _encode_body(self, w, index):
        start = w.bit_count
        self.redundant_bits_ = 0
        for docs in index.postings:
            _, stats = block_interp_encode(docs, self.config_, w)
            self.redundant_bits_ += stats.redundant_bits
        return {"model": 0, "payload": w.bit_count - start}

    def _decode_body(self, rd, nb_documents, nb_words, lengths):
        return [block_interp_decode(rd, n, self.config_) for n in lengths]
