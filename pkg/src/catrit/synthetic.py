"""Seeded synthetic indexes.

Clustered words alternate between an "in-cluster" regime of high density
and a sparse background regime (a two-state Markov chain over document
IDs), which is the locality that real posting lists show after document
reordering.  Uniform words draw every document independently.
"""
from __future__ import annotations

import numpy as np

from .index import InvertedIndex

__all__ = ["clustered_index", "uniform_index", "random_index"]


def _markov_docs(rng: np.random.Generator, n: int, density: float,
                 contrast: float, mean_run: float) -> np.ndarray:
    p_in = min(0.9, density * contrast)
    p_out = density / contrast
    # stationary share of the in-cluster state that yields ``density``
    share = (density - p_out) / (p_in - p_out) if p_in > p_out else 1.0
    share = min(max(share, 1e-6), 1.0)
    run_in = max(1.0, mean_run)
    run_out = max(1.0, run_in * (1 - share) / share)
    lengths = []
    states = []
    total = 0
    state = rng.random() < share
    while total < n:
        mean = run_in if state else run_out
        ln = int(rng.geometric(1.0 / mean))
        lengths.append(ln)
        states.append(state)
        total += ln
        state = not state
    probs = np.repeat(np.where(states, p_in, p_out), lengths)[:n]
    hits = rng.random(n) < probs
    return np.flatnonzero(hits) + 1


def clustered_index(nb_documents: int = 50_000, nb_words: int = 400, seed: int = 0,
                    min_density: float = 1e-4, max_density: float = 0.2,
                    contrast: float = 8.0, mean_run: float = 200.0) -> InvertedIndex:
    """Words with log-uniform densities, each following a two-state chain."""
    rng = np.random.default_rng(seed)
    lo, hi = np.log10(min_density), np.log10(max_density)
    postings = []
    for _ in range(nb_words):
        d = 10 ** rng.uniform(lo, hi)
        run = mean_run * 10 ** rng.uniform(-0.5, 0.5)
        docs = _markov_docs(rng, nb_documents, d, contrast, run)
        if len(docs):
            postings.append(docs.tolist())
    return InvertedIndex(nb_documents, postings)


def uniform_index(nb_documents: int = 50_000, nb_words: int = 400, seed: int = 0,
                  min_density: float = 1e-4, max_density: float = 0.2) -> InvertedIndex:
    """Same density profile as :func:`clustered_index`, no clustering."""
    rng = np.random.default_rng(seed)
    lo, hi = np.log10(min_density), np.log10(max_density)
    postings = []
    for _ in range(nb_words):
        d = 10 ** rng.uniform(lo, hi)
        docs = np.flatnonzero(rng.random(nb_documents) < d) + 1
        if len(docs):
            postings.append(docs.tolist())
    return InvertedIndex(nb_documents, postings)


def random_index(rng: np.random.Generator, max_documents: int = 100_000,
                 max_words: int = 20, min_density: float = 1e-4,
                 max_density: float = 0.5) -> InvertedIndex:
    """Small random index for round-trip fuzzing (never has empty lists).

    The document count is log-uniform in ``[1, max_documents]`` so tiny
    universes, where most trits are forced, show up as often as large ones.
    """
    n = int(round(10 ** rng.uniform(0, np.log10(max_documents))))
    words = int(rng.integers(1, max_words + 1))
    postings = []
    for _ in range(words):
        d = 10 ** rng.uniform(np.log10(min_density), np.log10(max_density))
        k = max(1, min(n, int(rng.binomial(n, d))))
        docs = np.sort(rng.choice(n, size=k, replace=False)) + 1
        postings.append(docs.tolist())
    return InvertedIndex(n, postings)
