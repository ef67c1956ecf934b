from .base import (
    CODECS,
    CompressedIndexPayload,
    Header,
    IndexCodec,
    codec_by_id,
    codec_by_name,
    decompress,
)
from .baselines import BlockInterpCodec, InterpCodec, UniversalCodec
from .tritctx import (
    TritContextAdaptiveCodec,
    TritContextAdaptiveQuatritCodec,
    TritContextCodec,
    TritContextQuatritCodec,
)

__all__ = [
    "CODECS",
    "CompressedIndexPayload",
    "Header",
    "IndexCodec",
    "codec_by_id",
    "codec_by_name",
    "decompress",
    "BlockInterpCodec",
    "InterpCodec",
    "UniversalCodec",
    "TritContextAdaptiveCodec",
    "TritContextAdaptiveQuatritCodec",
    "TritContextCodec",
    "TritContextQuatritCodec",
]

from .batch import BatchedCodec  # noqa: E402

__all__.append("BatchedCodec")
