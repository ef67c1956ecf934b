"""Density batching: split words into density bands, pick the best codec per band."""
from __future__ import annotations

from ..bitio import BitWriter
from ..errors import ContractViolation, FormatError
from ..index import BATCH_DELIMITERS, batch_of, partition_batches
from ..universal import UniversalCode
from .base import IndexCodec, codec_by_id, codec_by_name, register

__all__ = ["BatchedCodec"]

_DELTA = UniversalCode("delta")


def _nestable(codec) -> bool:
    # a nested body starts at an arbitrary bit, so byte alignment would not survive
    return (codec.stores_lengths and not isinstance(codec, BatchedCodec)
            and getattr(codec, "kind", None) != "vbyte")


@register
class BatchedCodec(IndexCodec):
    """Seven density batches, each coded with whichever candidate is smallest.

    Batch membership is not stored: the decoder recomputes it from the list
    lengths.  Every non-empty batch costs an 8-bit selector, a delta-coded
    body size and the chosen codec's four parameter bytes.
    """

    name = "batch"
    codec_id = 30

    def __init__(self, candidates=("interp", "tc", "tca")):
        self.candidates = candidates

    def _fit(self, index):
        if not self.candidates:
            raise ContractViolation("need at least one candidate codec")
        for name in self.candidates:
            if not _nestable(codec_by_name(name)):
                raise ContractViolation(f"codec {name!r} cannot be used inside a batch")
        self.partition_ = partition_batches(index, BATCH_DELIMITERS)
        self.choices_ = []
        for b, ids in enumerate(self.partition_.batches):
            if not ids:
                self.choices_.append(None)
                continue
            sub = self.partition_.sub_index(index, b)
            best = None
            for name in self.candidates:
                codec = codec_by_name(name).fit(sub)
                w = BitWriter()
                codec._encode_body(w, sub)
                if best is None or w.bit_count < best[0]:
                    best = (w.bit_count, codec)
            self.choices_.append(best[1])

    def _encode_body(self, w, index):
        partition = partition_batches(index, BATCH_DELIMITERS)
        sections = {"batch": 0, "model": 0, "payload": 0}
        for b, ids in enumerate(partition.batches):
            if not ids:
                continue
            codec = self.choices_[b]
            if codec is None:
                raise FormatError("index has a batch that was empty at fit time")
            sub = partition.sub_index(index, b)
            body = BitWriter()
            for p in codec._param_bytes():
                body.write_bits(p, 8)
            parts = codec._encode_body(body, sub)
            mark = w.bit_count
            w.write_bits(codec.codec_id, 8)
            _DELTA.encode(w, body.bit_count + 1)
            sections["batch"] += w.bit_count - mark + 32
            sections["model"] += parts.get("model", 0)
            sections["payload"] += parts.get("payload", 0)
            w.extend(body)
        return sections

    def _decode_body(self, rd, nb_documents, nb_words, lengths):
        groups: list[list[int]] = [[] for _ in range(len(BATCH_DELIMITERS) - 1)]
        for i, n in enumerate(lengths):
            groups[batch_of(n, nb_documents)].append(i)
        postings: list = [None] * nb_words
        for ids in groups:
            if not ids:
                continue
            codec = codec_by_id(rd.read_bits(8))()
            if not _nestable(codec):
                raise FormatError("codec not allowed inside a batch")
            sub = rd.sub_reader(_DELTA.decode(rd) - 1)
            codec._set_param_bytes(tuple(sub.read_bits(8) for _ in range(4)), nb_documents)
            decoded = codec._decode_body(sub, nb_documents, len(ids), [lengths[i] for i in ids])
            for i, docs in zip(ids, decoded):
                postings[i] = docs
        return postings
