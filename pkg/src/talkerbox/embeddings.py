"""Dense word vectors, log-tf bag-of-words sentence embeddings, sparse tf-idf
vectors, mixed dense/sparse similarity, and a from-scratch skip-gram trainer
with negative sampling for article-title link embeddings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .text import TermStats, Token, idf_weight

__all__ = [
    "EmbeddingTable",
    "embed_bow",
    "embed_sparse",
    "tfidf_average",
    "cosine",
    "sparse_cosine",
    "mixed_similarity",
    "SkipGramConfig",
    "train_link_embeddings",
    "sgns_loss_and_grads",
]

MAX_PHRASE_LEN = 4


class EmbeddingTable:
    """token -> dense vector map plus a reference to corpus term statistics.

    Unknown tokens are absent, never defaulted.
    """

    def __init__(self, dim: int, term_stats: TermStats | None = None):
        self.dim = dim
        self.vectors: dict[str, np.ndarray] = {}
        self.term_stats = term_stats or TermStats()

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)

    def add(self, token: str, vector) -> None:
        vec = np.asarray(vector, dtype=np.float64)
        if vec.shape != (self.dim,):
            raise ValueError(f"vector for {token!r} has shape {vec.shape}, want ({self.dim},)")
        self.vectors[token] = vec

    def save(self, path) -> None:
        """One entry per line: token then dim whitespace-separated floats."""
        with open(path, "w", encoding="utf-8") as fh:
            for token in sorted(self.vectors):
                values = " ".join(repr(float(v)) for v in self.vectors[token])
                fh.write(f"{token} {values}\n")

    @classmethod
    def load(cls, path, term_stats: TermStats | None = None) -> "EmbeddingTable":
        table: EmbeddingTable | None = None
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                token, values = parts[0], parts[1:]
                if table is None:
                    table = cls(dim=len(values), term_stats=term_stats)
                try:
                    table.add(token, [float(v) for v in values])
                except ValueError as exc:
                    raise ValueError(f"{path} line {line_no}: {exc}") from exc
        if table is None:
            raise ValueError(f"{path}: empty embedding file")
        return table


def _couple_phrases(words: Sequence[str], table: EmbeddingTable) -> list[str]:
    """Greedy left-to-right, longest-match merge of underscore-joined phrases."""
    out: list[str] = []
    i = 0
    while i < len(words):
        merged = None
        for k in range(min(MAX_PHRASE_LEN, len(words) - i), 1, -1):
            key = "_".join(words[i : i + k])
            if key in table:
                merged = key
                i += k
                break
        if merged is None:
            out.append(words[i])
            i += 1
        else:
            out.append(merged)
    return out


def _bow_weight(key: str, stats: TermStats, weighting: str) -> float:
    # Phrase stats are kept under the space-joined key, same as index bigrams.
    stats_key = key.replace("_", " ")
    if weighting == "idf":
        return idf_weight(stats_key, stats) if stats.total_docs > 0 else 1.0
    tf = stats.tf(stats_key)
    return math.log(tf) if tf >= 1 else 0.0


def embed_bow(
    tokens: Sequence[Token],
    table: EmbeddingTable,
    weighting: str = "log_tf",
) -> np.ndarray | None:
    """Bag-of-words sentence embedding: normalized sum of log(tf)-weighted
    word vectors over the in-vocabulary tokens, with greedy phrase coupling.

    Returns None when the weighted sum vanishes (all tokens out of vocabulary
    or all weights zero).
    """
    words = [t.normalized for t in tokens if t.is_word]
    keys = _couple_phrases(words, table)
    # Sorting the bag makes the summation order canonical, so permutations of
    # the input produce bit-identical vectors.
    effective = sorted(k for k in keys if k in table)
    if not effective:
        return None
    total = np.zeros(table.dim, dtype=np.float64)
    for key in effective:
        w = _bow_weight(key, table.term_stats, weighting)
        if w != 0.0:
            total += w * table.vectors[key]
    norm = float(np.linalg.norm(total))
    if norm < 1e-12:
        return None
    return total / norm


def embed_sparse(tokens: Sequence[Token], stats: TermStats) -> dict[str, float]:
    """Sparse tf-idf vector: term -> (count in utterance) * idf. Zero weights
    (terms present in every document) are omitted."""
    counts: dict[str, int] = {}
    for tok in tokens:
        if tok.is_word:
            counts[tok.normalized] = counts.get(tok.normalized, 0) + 1
    weights: dict[str, float] = {}
    for term, count in counts.items():
        w = count * idf_weight(term, stats)
        if w > 0.0:
            weights[term] = w
    return weights


def tfidf_average(
    tokens: Sequence[Token], table: EmbeddingTable, stats: TermStats
) -> np.ndarray | None:
    """tf-idf weighted average of word vectors, unit-normalized (trivia/QA style)."""
    counts: dict[str, int] = {}
    for tok in tokens:
        if tok.is_word and tok.normalized in table:
            counts[tok.normalized] = counts.get(tok.normalized, 0) + 1
    if not counts:
        return None
    total = np.zeros(table.dim, dtype=np.float64)
    weight_sum = 0.0
    for term in sorted(counts):
        w = counts[term] * idf_weight(term, stats)
        total += w * table.vectors[term]
        weight_sum += w
    if weight_sum <= 0.0:
        return None
    avg = total / weight_sum
    norm = float(np.linalg.norm(avg))
    if norm < 1e-12:
        return None
    return avg / norm


def cosine(a, b) -> float:
    """Standard cosine similarity; 0 when either vector has zero norm."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise ValueError(f"length mismatch: {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(va, vb) / (na * nb))


def sparse_cosine(a: dict[str, float], b: dict[str, float]) -> float:
    if not a or not b:
        return 0.0
    dot = sum(w * b[t] for t, w in a.items() if t in b)
    na = math.sqrt(sum(w * w for w in a.values()))
    nb = math.sqrt(sum(w * w for w in b.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def mixed_similarity(a, b, alpha: float) -> float:
    """alpha * dense cosine + (1-alpha) * sparse cosine, for (dense, sparse) pairs.

    A missing dense half (None) behaves as the zero vector, cosine 0.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    dense_a, sparse_a = a
    dense_b, sparse_b = b
    if dense_a is None or dense_b is None:
        dense_sim = 0.0
    else:
        dense_sim = cosine(dense_a, dense_b)
    return alpha * dense_sim + (1.0 - alpha) * sparse_cosine(sparse_a, sparse_b)


# --- skip-gram with negative sampling over (title, linked_title) pairs -------


@dataclass
class SkipGramConfig:
    dim: int = 32
    epochs: int = 10
    negatives: int = 5
    learning_rate: float = 0.025
    seed: int = 0


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def sgns_loss_and_grads(center: np.ndarray, context: np.ndarray, negatives: np.ndarray):
    """Negative-sampling loss for one (center, context) update and its exact
    gradients w.r.t. the center vector, context output vector, and each
    negative output vector.

    loss = -log s(c.v) - sum_k log s(-n_k.v)
    """
    pos = _sigmoid(float(np.dot(context, center)))
    loss = -math.log(max(pos, 1e-12))
    grad_center = (pos - 1.0) * context
    grad_context = (pos - 1.0) * center
    grad_negatives = np.zeros_like(negatives)
    for k in range(negatives.shape[0]):
        neg = _sigmoid(float(np.dot(negatives[k], center)))
        loss += -math.log(max(1.0 - neg, 1e-12))
        grad_center = grad_center + neg * negatives[k]
        grad_negatives[k] = neg * center
    return loss, grad_center, grad_context, grad_negatives


def train_link_embeddings(
    pairs: Sequence[tuple[str, str]],
    config: SkipGramConfig,
) -> EmbeddingTable:
    """Skip-gram with negative sampling over a corpus of (title, linked_title)
    tuples; each pair is a 2-token context window, trained in both directions.
    Deterministic given config.seed. Returns the input-side title vectors.

    The per-epoch mean loss trace is attached as ``table.loss_trace``.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("empty link corpus")
    counts: dict[str, int] = {}
    for a, b in pairs:
        counts[a] = counts.get(a, 0) + 1
        counts[b] = counts.get(b, 0) + 1
    vocab = sorted(counts)
    index = {t: i for i, t in enumerate(vocab)}
    v = len(vocab)

    rng = np.random.default_rng(config.seed)
    vec_in = (rng.random((v, config.dim)) - 0.5) / config.dim
    vec_out = np.zeros((v, config.dim))

    # Unigram^0.75 noise distribution, the word2vec default.
    noise = np.array([counts[t] for t in vocab], dtype=np.float64) ** 0.75
    noise /= noise.sum()

    samples = [(index[a], index[b]) for a, b in pairs]
    total_updates = max(1, 2 * len(samples) * config.epochs)
    loss_trace: list[float] = []
    step = 0
    for _ in range(config.epochs):
        epoch_loss = 0.0
        n_updates = 0
        for a, b in samples:
            for center_i, context_i in ((a, b), (b, a)):
                lr = config.learning_rate * max(1e-4, 1.0 - step / total_updates)
                neg_idx = rng.choice(v, size=config.negatives, p=noise)
                loss, g_center, g_context, g_negs = sgns_loss_and_grads(
                    vec_in[center_i], vec_out[context_i], vec_out[neg_idx]
                )
                vec_in[center_i] -= lr * g_center
                vec_out[context_i] -= lr * g_context
                for k, ni in enumerate(neg_idx):
                    vec_out[ni] -= lr * g_negs[k]
                epoch_loss += loss
                n_updates += 1
                step += 1
        loss_trace.append(epoch_loss / max(1, n_updates))

    table = EmbeddingTable(config.dim)
    for title, i in index.items():
        table.add(title, vec_in[i])
    table.loss_trace = loss_trace
    return table
