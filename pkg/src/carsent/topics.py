"""Latent Dirichlet Allocation fit by collapsed Gibbs sampling.

The sampler keeps integer count matrices (topic-word, doc-topic, topic
totals) and resamples every token's topic assignment from

    P(z = k) ~ (n_dk[d,k] + alpha) * (n_kw[k,w] + beta) / (n_k[k] + V*beta)

with the current token excluded from all counts.  The fit is a pure
function of (docs, K, alpha, beta, iters, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, EmptyCorpusError


@dataclass(frozen=True)
class Vocabulary:
    index: dict[str, int]
    terms: list[str]

    @property
    def size(self) -> int:
        return len(self.terms)

    @classmethod
    def from_docs(cls, docs) -> "Vocabulary":
        index: dict[str, int] = {}
        for doc in docs:
            for term in doc:
                if term not in index:
                    index[term] = len(index)
        terms = [""] * len(index)
        for term, i in index.items():
            terms[i] = term
        return cls(index, terms)


@dataclass
class LdaModel:
    n_topics: int
    alpha: float
    beta: float
    vocab: Vocabulary
    n_kw: np.ndarray          # K x V topic-word counts
    n_dk: np.ndarray          # D x K doc-topic counts
    n_k: np.ndarray           # K topic totals
    assignments: list[np.ndarray]
    doc_tokens: list[np.ndarray]
    iters: int
    seed: int


def _validate_counts(model: LdaModel) -> None:
    if not np.array_equal(model.n_kw.sum(axis=1), model.n_k):
        raise AssertionError("topic-word counts disagree with topic totals")
    doc_lengths = np.array([len(d) for d in model.doc_tokens])
    if not np.array_equal(model.n_dk.sum(axis=1), doc_lengths):
        raise AssertionError("doc-topic counts disagree with doc lengths")
    if model.n_k.sum() != doc_lengths.sum():
        raise AssertionError("topic totals disagree with corpus size")
    for z in model.assignments:
        if z.size and (z.min() < 0 or z.max() >= model.n_topics):
            raise AssertionError("topic assignment out of range")


def fit(docs, n_topics: int, alpha: float, beta: float, iters: int,
        seed: int, validate: bool = False) -> LdaModel:
    """Run `iters` full collapsed-Gibbs sweeps over the token stream.

    Empty documents are dropped.  With validate=True the count
    invariants are re-checked after every sweep.
    """
    if n_topics < 1:
        raise ConfigError(f"n_topics must be >= 1, got {n_topics}")
    if iters < 1:
        raise ConfigError(f"iters must be >= 1, got {iters}")
    if alpha <= 0 or beta <= 0:
        raise ConfigError("alpha and beta must be positive")
    kept = [doc for doc in docs if doc]
    if not kept:
        raise EmptyCorpusError("no non-empty documents to fit")

    vocab = Vocabulary.from_docs(kept)
    doc_tokens = [np.array([vocab.index[t] for t in doc], dtype=np.int64)
                  for doc in kept]
    n_docs = len(doc_tokens)
    v_size = vocab.size

    rng = np.random.default_rng(seed)
    n_kw = np.zeros((n_topics, v_size), dtype=np.int64)
    n_dk = np.zeros((n_docs, n_topics), dtype=np.int64)
    n_k = np.zeros(n_topics, dtype=np.int64)
    assignments = []
    for d, words in enumerate(doc_tokens):
        z = rng.integers(0, n_topics, size=len(words))
        assignments.append(z)
        np.add.at(n_kw, (z, words), 1)
        np.add.at(n_dk[d], z, 1)
        np.add.at(n_k, z, 1)

    model = LdaModel(n_topics, alpha, beta, vocab, n_kw, n_dk, n_k,
                     assignments, doc_tokens, iters, seed)
    vbeta = v_size * beta
    for _ in range(iters):
        for d in range(n_docs):
            words = doc_tokens[d]
            z = assignments[d]
            row = n_dk[d]
            for i in range(len(words)):
                w = words[i]
                k = z[i]
                row[k] -= 1
                n_kw[k, w] -= 1
                n_k[k] -= 1
                weights = (row + alpha) * (n_kw[:, w] + beta) / (n_k + vbeta)
                cum = np.cumsum(weights)
                k = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
                if k >= n_topics:  # guard against float round-up
                    k = n_topics - 1
                z[i] = k
                row[k] += 1
                n_kw[k, w] += 1
                n_k[k] += 1
        if validate:
            _validate_counts(model)
    return model


def phi(model: LdaModel) -> np.ndarray:
    """K x V smoothed topic-word distributions; rows sum to one."""
    return (model.n_kw + model.beta) / (
        model.n_k[:, None] + model.vocab.size * model.beta)


def theta(model: LdaModel) -> np.ndarray:
    """D x K smoothed doc-topic distributions; rows sum to one."""
    lengths = model.n_dk.sum(axis=1, keepdims=True)
    return (model.n_dk + model.alpha) / (lengths + model.n_topics * model.alpha)


def top_words(model: LdaModel, topic: int, n: int) -> list[tuple[str, float]]:
    """Best-n terms of a topic by smoothed weight, ties lexicographic."""
    if not 0 <= topic < model.n_topics:
        raise IndexError(f"topic {topic} out of range 0..{model.n_topics - 1}")
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    weights = phi(model)[topic]
    order = sorted(range(model.vocab.size),
                   key=lambda i: (-weights[i], model.vocab.terms[i]))
    return [(model.vocab.terms[i], float(weights[i])) for i in order[:n]]


def export_dict(model: LdaModel, words_per_topic: int = 10) -> dict:
    """JSON-ready summary of a fitted model."""
    return {
        "K": model.n_topics,
        "alpha": model.alpha,
        "beta": model.beta,
        "topics": [
            {
                "id": k,
                "words": [
                    {"term": term, "weight": weight}
                    for term, weight in top_words(model, k, words_per_topic)
                ],
            }
            for k in range(model.n_topics)
        ],
    }
