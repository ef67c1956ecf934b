"""Posting-list compression with contextual arithmetic coding of trits."""
from .codecs import (
    BlockInterpCodec,
    CompressedIndexPayload,
    InterpCodec,
    TritContextAdaptiveCodec,
    TritContextAdaptiveQuatritCodec,
    TritContextCodec,
    TritContextQuatritCodec,
    codec_by_name,
    decompress,
)
from .index import InvertedIndex, ingest_corpus, load_raw, save_raw

__version__ = "0.1.0"
