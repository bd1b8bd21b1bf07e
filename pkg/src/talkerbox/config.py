"""Engine configuration: a flat dataclass, loadable from JSON with
environment-variable overrides (TALKERBOX_<KEY>).
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields

DEFAULT_PRIORITY = [
    "wiki_qa",
    "definitions",
    "facts",
    "abacus",
    "dbpedia",
    "topic",
    "knn_forum",
    "knn_chat",
    "quotes",
    "alice",
    "trivia",
    "gimmick",
]

DEFAULT_GIMMICK_RESPONSES = {
    "url": [
        "I can't open links, but tell me what's there.",
        "That link is beyond my reach. What does it say?",
    ],
    "email": [
        "I don't send mail, I only chat.",
        "An address! I'll stick to talking here, though.",
    ],
    "emoji": [
        "Nice emoji.",
        "I wish my keyboard had those.",
    ],
}


@dataclass
class EngineConfig:
    """Every tunable the engine and talkers read.

    budget_seconds: hard wall-clock ceiling for one reply.
    talker_timeout_seconds: per-talker ceiling per round, must stay below budget.
    seed: master seed; each talker derives its own stream from it.
    alpha: dense/sparse blend for mixed similarity.
    bowe_weighting: "log_tf" (literal formula) or "idf".
    fallback_reply: served when every talker fails or scores zero.
    priority_order: tie-break order for equal confidences.
    calibration_profile: optional path to stored per-talker scales.
    enabled_talkers: names to activate; None means all wired talkers.
    parallel: run talker rounds in threads (False = inline, test-friendly).
    idf_floor: below this idf a query word counts as common.
    excerpt_similarity_threshold: min cosine for pulling article excerpts.
    qa_passages: passages fetched from the index per question.
    qa_total_cap: ceiling on passages + excerpts processed per question.
    neighborhood_threshold: min cosine for attribute neighborhood matches.
    topic_match_threshold: min cosine for the topic-question bank.
    quote_context_decay: per-turn decay of the quote talker's context vectors.
    quote_weights: blend weights (query, context, article) for quote scoring.
    resources: name -> path overrides for bundled data files.
    gimmick_responses: response lists per gimmick category.
    """

    budget_seconds: float = 3.0
    talker_timeout_seconds: float = 1.0
    seed: int = 0
    alpha: float = 0.5
    bowe_weighting: str = "log_tf"
    fallback_reply: str = "Tell me more about that."
    priority_order: list[str] = field(default_factory=lambda: list(DEFAULT_PRIORITY))
    calibration_profile: str | None = None
    enabled_talkers: list[str] | None = None
    parallel: bool = True
    idf_floor: float = 1.0
    excerpt_similarity_threshold: float = 0.3
    qa_passages: int = 30
    qa_total_cap: int = 40
    neighborhood_threshold: float = 0.55
    topic_match_threshold: float = 0.75
    quote_context_decay: float = 0.7
    quote_weights: tuple[float, float, float] = (1.0, 0.5, 0.3)
    resources: dict[str, str] = field(default_factory=dict)
    gimmick_responses: dict[str, list[str]] = field(
        default_factory=lambda: {k: list(v) for k, v in DEFAULT_GIMMICK_RESPONSES.items()}
    )

    def __post_init__(self):
        if self.talker_timeout_seconds >= self.budget_seconds:
            raise ValueError("talker timeout must be below the global budget")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.bowe_weighting not in ("log_tf", "idf"):
            raise ValueError(f"unknown bowe_weighting: {self.bowe_weighting!r}")
        self.quote_weights = tuple(self.quote_weights)

    @classmethod
    def from_file(cls, path, environ=None) -> "EngineConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls.from_dict(data, environ=environ)

    @classmethod
    def from_dict(cls, data: dict, environ=None) -> "EngineConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged = dict(data)
        environ = os.environ if environ is None else environ
        for name, f in known.items():
            env_key = f"TALKERBOX_{name.upper()}"
            if env_key in environ:
                merged[name] = _coerce(environ[env_key], f.type)
        return cls(**merged)


def _coerce(raw: str, type_hint: str):
    hint = str(type_hint)
    if "bool" in hint:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if "int" in hint and "float" not in hint:
        return int(raw)
    if "float" in hint:
        return float(raw)
    if any(t in hint for t in ("list", "dict", "tuple")):
        return json.loads(raw)
    if "None" in hint and raw == "":
        return None
    return raw
