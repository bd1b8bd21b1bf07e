"""Reply censorship: a term blacklist softened by the user's own vocabulary,
and a small toxicity classifier that gates dialogue-pair ingestion.

The classifier is logistic regression over the concatenated sentence
embeddings of both halves of a pair (a one-hidden-layer variant is available
through the config). Training labels come from the blacklist itself: pairs
containing forbidden terms are positive, scrubbed copies of those pairs are
positive too, and clean pairs are sampled as negatives.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingTable, embed_bow
from .text import Token, tokenize

ADMIT_BELOW = 0.4
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class BlacklistDecision:
    ok: bool
    terms: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def blacklist_check(
    text: str | list[Token], blacklist: set[str], user_vocabulary: set[str] = frozenset()
) -> BlacklistDecision:
    """Reject text containing any blacklisted word the user has not used."""
    tokens = tokenize(text) if isinstance(text, str) else text
    hits = tuple(
        dict.fromkeys(
            t.normalized
            for t in tokens
            if t.is_word and t.normalized in blacklist and t.normalized not in user_vocabulary
        )
    )
    return BlacklistDecision(ok=not hits, terms=hits)


def scrub(text: str, blacklist: set[str]) -> str:
    kept = [t.surface for t in tokenize(text) if t.normalized not in blacklist]
    return " ".join(kept)


def label_pairs(
    pairs: list[tuple[str, str]], blacklist: set[str], seed: int = 0
) -> list[tuple[tuple[str, str], int]]:
    """Semi-supervised labeling: forbidden-term pairs are positive, their
    scrubbed copies are positive as well, and clean pairs are drawn at random
    as negatives to balance the classes 1:1.
    """
    positives: list[tuple[str, str]] = []
    clean: list[tuple[str, str]] = []
    for a, b in pairs:
        if not blacklist_check(a, blacklist) or not blacklist_check(b, blacklist):
            positives.append((a, b))
            positives.append((scrub(a, blacklist), scrub(b, blacklist)))
        else:
            clean.append((a, b))
    rng = random.Random(seed)
    n_neg = min(len(clean), len(positives))
    negatives = rng.sample(clean, n_neg)
    return [(p, 1) for p in positives] + [(n, 0) for n in negatives]


# --- classifier -------------------------------------------------------------


@dataclass
class ToxicityConfig:
    epochs: int = 300
    learning_rate: float = 0.5
    seed: int = 0
    hidden: int = 0


class ToxicityModel:
    """predict() maps a pair-feature vector to a probability in [0, 1]."""

    def __init__(self, params: dict[str, np.ndarray], hidden: int = 0):
        self.params = params
        self.hidden = hidden

    @property
    def dim(self) -> int:
        if self.hidden:
            return self.params["w1"].shape[0]
        return self.params["w"].shape[0]

    def predict(self, features: np.ndarray) -> float:
        x = np.asarray(features, dtype=np.float64)
        if self.hidden:
            h = np.tanh(x @ self.params["w1"] + self.params["b1"])
            z = float(h @ self.params["w2"] + self.params["b2"])
        else:
            z = float(x @ self.params["w"] + self.params["b"])
        return float(_sigmoid(z))


def _sigmoid(z):
    return np.where(z >= 0, 1.0 / (1.0 + np.exp(-z)), np.exp(z) / (1.0 + np.exp(z)))


def pair_features(a_text: str, b_text: str, table: EmbeddingTable) -> np.ndarray:
    """Concatenated sentence embeddings; a missing half contributes zeros."""
    out = np.zeros(2 * table.dim)
    va = embed_bow(tokenize(a_text), table)
    vb = embed_bow(tokenize(b_text), table)
    if va is not None:
        out[: table.dim] = va
    if vb is not None:
        out[table.dim :] = vb
    return out


def toxicity_loss_and_grads(weights: np.ndarray, bias: float, x: np.ndarray, y: int):
    """Single-example logistic negative log-likelihood with analytic gradients."""
    z = float(np.dot(weights, x)) + bias
    p = float(_sigmoid(z))
    eps = 1e-12
    loss = -(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
    dz = p - y
    return float(loss), dz * x, float(dz)


def train_toxicity(
    labeled: list[tuple[tuple[str, str], int]],
    table: EmbeddingTable,
    config: ToxicityConfig | None = None,
) -> ToxicityModel:
    config = config or ToxicityConfig()
    labels = {y for _, y in labeled}
    if labels != {0, 1}:
        raise ValueError("training data must contain both classes")
    X = np.stack([pair_features(a, b, table) for (a, b), _ in labeled])
    y = np.array([lab for _, lab in labeled], dtype=np.float64)
    n, d = X.shape
    rng = np.random.default_rng(config.seed)

    if config.hidden:
        h = config.hidden
        w1 = rng.normal(scale=0.1, size=(d, h))
        b1 = np.zeros(h)
        w2 = rng.normal(scale=0.1, size=h)
        b2 = 0.0
        for _ in range(config.epochs):
            hid = np.tanh(X @ w1 + b1)
            p = _sigmoid(hid @ w2 + b2)
            dz = (p - y) / n
            gw2 = hid.T @ dz
            gb2 = float(dz.sum())
            dhid = np.outer(dz, w2) * (1 - hid**2)
            gw1 = X.T @ dhid
            gb1 = dhid.sum(axis=0)
            w1 -= config.learning_rate * gw1
            b1 -= config.learning_rate * gb1
            w2 -= config.learning_rate * gw2
            b2 -= config.learning_rate * gb2
        return ToxicityModel({"w1": w1, "b1": b1, "w2": w2, "b2": np.float64(b2)}, hidden=h)

    w = np.zeros(d)
    b = 0.0
    for _ in range(config.epochs):
        p = _sigmoid(X @ w + b)
        dz = (p - y) / n
        w -= config.learning_rate * (X.T @ dz)
        b -= config.learning_rate * float(dz.sum())
    return ToxicityModel({"w": w, "b": np.float64(b)})


def predict_pair(model: ToxicityModel, a_text: str, b_text: str, table: EmbeddingTable) -> float:
    return model.predict(pair_features(a_text, b_text, table))


def admit_pair(
    model: ToxicityModel,
    a_text: str,
    b_text: str,
    table: EmbeddingTable,
    threshold: float = ADMIT_BELOW,
) -> bool:
    """True iff the predicted toxicity probability is strictly below threshold."""
    return predict_pair(model, a_text, b_text, table) < threshold


def save_model(model: ToxicityModel, path) -> None:
    np.savez(
        path,
        version=np.int64(CHECKPOINT_VERSION),
        hidden=np.int64(model.hidden),
        **model.params,
    )


def load_model(path) -> ToxicityModel:
    with np.load(path) as data:
        version = int(data["version"])
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version: {version}")
        hidden = int(data["hidden"])
        keys = ("w1", "b1", "w2", "b2") if hidden else ("w", "b")
        params = {k: data[k] for k in keys}
    return ToxicityModel(params, hidden=hidden)
