"""Contextual arithmetic coding of trit lists: static (TC) and adaptive (TCA).

Every gap list becomes a trit list (quatrit list in the ``quatrit``
variants).  All lists share one arithmetic-coded stream and one probability
model; the context state restarts at the beginning of each list.
"""
from __future__ import annotations

from ..bitio import BitReader, BitWriter
from ..coder import ArithmeticDecoder, ArithmeticEncoder
from ..context import (
    ContextParams,
    ContextState,
    OccurrenceTable,
    forced2_cap,
    select_adaptive_params,
    select_static_params,
)
from ..errors import ContractViolation, FormatError
from ..index import InvertedIndex, gaps_to_docs
from ..trits import gaps_to_quatrits, gaps_to_trits
from .base import IndexCodec, register

__all__ = [
    "TritContextCodec",
    "TritContextAdaptiveCodec",
    "TritContextQuatritCodec",
    "TritContextAdaptiveQuatritCodec",
]


class _TritCodecBase(IndexCodec):
    quatrit = False

    def __init__(self, k=None, w=None, k_init=None, norm_bits=8):
        self.k = k
        self.w = w
        self.k_init = k_init
        self.norm_bits = norm_bits

    @property
    def stores_lengths(self):
        return not self.quatrit

    @property
    def n_symbols(self) -> int:
        return 4 if self.quatrit else 3

    def _select(self, nb_pointers: int, nb_documents: int) -> ContextParams:
        raise NotImplementedError

    def _resolve_params(self, index: InvertedIndex) -> ContextParams:
        auto = self._select(index.nb_pointers, index.nb_documents)
        if self.k is None and self.w is None and self.k_init is None:
            return auto
        k = auto.k if self.k is None else self.k
        w = auto.w if self.w is None else self.w
        k_init = min(auto.k_init, k + w) if self.k_init is None else self.k_init
        # explicit overrides are kept as given; only the forced-2 cap is recorded
        return ContextParams(k, w, k_init, self.norm_bits, forced2_cap(index.nb_documents))

    def _symbol_lists(self, index: InvertedIndex):
        convert = gaps_to_quatrits if self.quatrit else gaps_to_trits
        return [convert(g) for g in index.gap_lists()]

    def _param_bytes(self):
        p = self.params_
        return (p.k, p.w, p.k_init, p.norm_bits)

    def _set_param_bytes(self, params, nb_documents):
        k, w, k_init, norm_bits = params
        try:
            self.params_ = ContextParams(k, w, k_init, norm_bits, forced2_cap(nb_documents))
        except ContractViolation as exc:
            raise FormatError(f"bad context parameters in header: {exc}") from None
        if self.params_.n_contexts > 1 << 26:
            raise FormatError("context table too large")
        self.n_documents_ = nb_documents

    # shared payload loops; ``learn`` runs after each coded symbol (adaptive only)

    def _encode_symbols(self, enc: ArithmeticEncoder, symbol_lists, rows, learn=None,
                        on_list_end=None) -> None:
        params = self.params_
        state = ContextState(params)
        forced = params.forced
        quatrit = self.quatrit
        for symbols in symbol_lists:
            state.reset()
            last = 0
            for s in symbols:
                # in quatrit mode an end symbol may follow a 2, so never force there
                if forced and state.is_forced() and not (quatrit and last == 2):
                    if s != 2:
                        raise ContractViolation("gap larger than nb_documents")
                    state.update(s)
                    last = s
                    continue
                cid = state.context_id()
                row = rows[cid]
                # the end symbol can only follow a 2
                enc.encode_symbol(row if not quatrit or last == 2 else row[:3], s)
                if learn is not None:
                    learn(cid, s)
                state.update(s)
                last = s
            if on_list_end is not None:
                on_list_end()

    def _decode_symbols(self, dec: ArithmeticDecoder, nb_words: int, lengths, rows,
                        nb_documents: int, learn=None, on_list_end=None):
        params = self.params_
        state = ContextState(params)
        forced = params.forced
        quatrit = self.quatrit
        cap = forced2_cap(nb_documents)
        postings = []
        for i in range(nb_words):
            state.reset()
            want = lengths[i] if lengths is not None else -1
            gaps = []
            acc = 1
            run = 0
            last = 0
            while len(gaps) != want:
                if forced and state.is_forced() and not (quatrit and last == 2):
                    s = 2
                else:
                    cid = state.context_id()
                    row = rows[cid]
                    s = dec.decode_symbol(row if not quatrit or last == 2 else row[:3])
                    if learn is not None:
                        learn(cid, s)
                if s < 2:
                    run += 1
                    if run > cap:
                        raise FormatError("decoded gap exceeds nb_documents")
                    acc = (acc << 1) | s
                elif s == 2:
                    gaps.append(acc)
                    acc = 1
                    run = 0
                else:
                    if run or not gaps:
                        raise FormatError("end symbol in the middle of a gap")
                    state.update(s)
                    break
                state.update(s)
                last = s
            docs = gaps_to_docs(gaps)
            if docs and docs[-1] > nb_documents:
                raise FormatError("decoded document ID exceeds nb_documents")
            postings.append(docs)
            if on_list_end is not None:
                on_list_end()
        return postings


class TritContextCodec(_TritCodecBase):
    """Static two-pass codec: count contexts, store a normalized model,
    then code every trit with it.

    Parameters left to ``None`` are chosen from the index size so that the
    stored model stays under 2% of the pointer count.
    """

    name = "tc"
    codec_id = 1

    def _select(self, nb_pointers, nb_documents):
        return select_static_params(nb_pointers, nb_documents, self.norm_bits)

    def _fit(self, index):
        self.params_ = self._resolve_params(index)
        counts = OccurrenceTable.count(self._symbol_lists(index), self.params_, self.n_symbols)
        self.counts_ = counts
        self.model_ = counts.normalized()

    def _encode_body(self, w, index):
        mark = w.bit_count
        self.model_.serialize(w)
        model_bits = w.bit_count - mark
        enc = ArithmeticEncoder(w)
        self._encode_symbols(enc, self._symbol_lists(index), self.model_.rows)
        return {"model": model_bits, "payload": enc.finish()}

    def _decode_body(self, rd, nb_documents, nb_words, lengths):
        self.model_ = OccurrenceTable.deserialize(rd, self.params_, self.n_symbols)
        dec = ArithmeticDecoder(rd)
        return self._decode_symbols(dec, nb_words, lengths, self.model_.rows, nb_documents)


class TritContextAdaptiveCodec(_TritCodecBase):
    """One-pass adaptive codec; the decoder rebuilds the model as it goes.

    Every counter starts at 1.  ``halving="global"`` halves all counters
    every ``2**k`` coded symbols; ``halving="context"`` halves a single
    context's counters once their sum exceeds ``2**k``.
    ``record_tables=True`` keeps a copy of the counters after every list
    (``encode_trace_`` / ``decode_trace_``) for replay checks.
    """

    name = "tca"
    codec_id = 2

    def __init__(self, k=None, w=None, k_init=None, norm_bits=8, halving="context",
                 record_tables=False):
        super().__init__(k, w, k_init, norm_bits)
        self.halving = halving
        self.record_tables = record_tables

    def _select(self, nb_pointers, nb_documents):
        return select_adaptive_params(nb_pointers, nb_documents, self.norm_bits)

    _POLICIES = ("context", "global")

    def _fit(self, index):
        if self.halving not in self._POLICIES:
            raise ContractViolation(f"unknown halving policy {self.halving!r}")
        self.params_ = self._resolve_params(index)
        self.halving_ = self.halving

    # no stored model, so the last header byte carries the halving policy
    def _param_bytes(self):
        p = self.params_
        return (p.k, p.w, p.k_init, self._POLICIES.index(self.halving_))

    def _set_param_bytes(self, params, nb_documents):
        k, w, k_init, policy = params
        if policy >= len(self._POLICIES):
            raise FormatError(f"unknown halving policy id {policy}")
        self.halving_ = self._POLICIES[policy]
        super()._set_param_bytes((k, w, k_init, 8), nb_documents)

    def _learner(self, table: OccurrenceTable):
        rows = table.rows
        limit = self.params_.halving_period
        if self.halving_ == "context":
            def learn(cid, s):
                row = rows[cid]
                row[s] += 1
                if sum(row) > limit:
                    for i, c in enumerate(row):
                        row[i] = (c + 1) >> 1
        else:
            steps = [0]

            def learn(cid, s):
                rows[cid][s] += 1
                steps[0] += 1
                if steps[0] == limit:
                    steps[0] = 0
                    table.halve_all()
        return learn

    def _tracer(self, table: OccurrenceTable, trace: list):
        if not self.record_tables:
            return None
        return lambda: trace.append(tuple(tuple(r) for r in table.rows))

    def _encode_body(self, w, index):
        table = OccurrenceTable(self.params_, self.n_symbols, initial=1)
        self.encode_trace_ = []
        enc = ArithmeticEncoder(w)
        self._encode_symbols(enc, self._symbol_lists(index), table.rows,
                             self._learner(table), self._tracer(table, self.encode_trace_))
        self.table_ = table
        return {"model": 0, "payload": enc.finish()}

    def _decode_body(self, rd, nb_documents, nb_words, lengths):
        table = OccurrenceTable(self.params_, self.n_symbols, initial=1)
        self.decode_trace_ = []
        dec = ArithmeticDecoder(rd)
        postings = self._decode_symbols(dec, nb_words, lengths, table.rows, nb_documents,
                                        self._learner(table),
                                        self._tracer(table, self.decode_trace_))
        self.table_ = table
        return postings


@register
class TritContextQuatritCodec(TritContextCodec):
    """Static codec over quatrits: an end symbol replaces stored lengths."""

    name = "tc-quatrit"
    codec_id = 3
    quatrit = True


@register
class TritContextAdaptiveQuatritCodec(TritContextAdaptiveCodec):
    name = "tca-quatrit"
    codec_id = 4
    quatrit = True


register(TritContextCodec)
register(TritContextAdaptiveCodec)
