"""General-conversation talkers: nearest-neighbour pairs, quotes, patterns, trivia.

Four generators that keep a dialogue moving when no specialist has a strong
answer: a k-NN lookup over stored (utterance, response) pairs, a quote picker
that blends the current sentence with conversation context, a wildcard
pattern engine with a per-conversation persona, and a trivia prompter.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from ..embeddings import (
    EmbeddingTable,
    cosine,
    embed_bow,
    embed_sparse,
    mixed_similarity,
    tfidf_average,
)
from ..knowledge import DialoguePair, QuoteEntry, TriviaItem
from ..state import DialogueState
from ..text import STOPWORDS, Token, idf_weight, tokenize, word_tokens
from .base import Talker

__all__ = [
    "KnnTalker",
    "QuoteContext",
    "QuoteTalker",
    "PatternRule",
    "parse_pattern_rules",
    "match_pattern",
    "PatternTalker",
    "TriviaTalker",
]

KNN_BASE_CONFIDENCE = 0.4
QUOTE_ECHO_THRESHOLD = 0.9
QUOTE_ECHO_PENALTY = 0.2
QUOTE_COMMON_PENALTY = 0.3
QUOTE_OOV_PENALTY = 0.5
QUOTE_OOV_FRACTION = 0.5
QUOTE_POOL_SIZE = 5
RARE_WORD_IDF = 4.0
PATTERN_BASE_CONFIDENCE = 0.3
TRIVIA_RECENT_TURNS = 3
TRIVIA_TEMPLATE = "I know the answer, do you: {}"


class KnnTalker(Talker):
    """Reply with the stored response whose prompt best matches the user.

    The bank is a list of (A, B) utterance pairs with precomputed A-side
    embeddings.  The reply is always some stored B, never synthesized text.
    """

    def __init__(
        self,
        bank: list[DialoguePair],
        table: EmbeddingTable,
        talker_id: str = "knn",
        base_confidence: float = KNN_BASE_CONFIDENCE,
    ):
        super().__init__(talker_id)
        self.bank = bank
        self.table = table
        self.base_confidence = base_confidence

    def propose(self, state: DialogueState, query: list[Token]):
        if not self.bank:
            return self.nothing()
        query_vec = embed_bow(query, self.table)
        if query_vec is None:
            return self.nothing()
        best_pair = None
        best_sim = -2.0
        for pair in self.bank:
            if pair.a_embedding is None:
                continue
            sim = cosine(query_vec, pair.a_embedding)
            if sim > best_sim:
                best_sim = sim
                best_pair = pair
        if best_pair is None or best_sim <= 0.0:
            return self.nothing()
        return self.candidate(best_pair.b_text, self.base_confidence * best_sim)


@dataclass
class QuoteContext:
    """Running conversation representation for the quote talker.

    Dense and sparse context accumulate every user sentence and chosen reply
    with exponential decay, so earlier turns fade but are not forgotten.
    """

    dense_context: np.ndarray | None = None
    sparse_context: dict[str, float] = field(default_factory=dict)
    article_dense: np.ndarray | None = None
    article_sparse: dict[str, float] = field(default_factory=dict)
    rare_words: set[str] = field(default_factory=set)


def _decay_sparse(vec: dict[str, float], decay: float) -> dict[str, float]:
    return {term: weight * decay for term, weight in vec.items()}


def _add_sparse(target: dict[str, float], source: dict[str, float]) -> None:
    for term, weight in source.items():
        target[term] = target.get(term, 0.0) + weight


class QuoteTalker(Talker):
    """Answer with a famous quote related to the blended conversation topic."""

    def __init__(self, bank: list[QuoteEntry], table: EmbeddingTable, config, talker_id: str = "quotes"):
        super().__init__(talker_id)
        self.bank = bank
        self.table = table
        self.config = config
        self._oov_fraction = [self._compute_oov(entry) for entry in bank]
        # Most recent scored ranking, for inspection: (score, quote text) rows.
        self.last_ranking: list[tuple[float, str]] = []

    def _compute_oov(self, entry: QuoteEntry) -> float:
        words = [t for t in tokenize(entry.text) if t.is_word]
        if not words:
            return 1.0
        oov = sum(1 for t in words if t.normalized not in self.table)
        return oov / len(words)

    def _context(self, state: DialogueState) -> QuoteContext:
        slot = state.slot(self.talker_id)
        if "ctx" not in slot:
            ctx = QuoteContext()
            if state.article:
                article_tokens = tokenize(state.article)
                ctx.article_dense = embed_bow(
                    article_tokens, self.table, weighting=self.config.bowe_weighting
                )
                ctx.article_sparse = embed_sparse(article_tokens, self.table.term_stats)
            slot["ctx"] = ctx
        return slot["ctx"]

    def _blend(self, query_dense, query_sparse, ctx: QuoteContext):
        w_query, w_ctx, w_article = self.config.quote_weights
        dense = np.zeros(self.table.dim, dtype=np.float64)
        populated = False
        for weight, vec in (
            (w_query, query_dense),
            (w_ctx, ctx.dense_context),
            (w_article, ctx.article_dense),
        ):
            if vec is not None:
                dense += weight * vec
                populated = True
        sparse: dict[str, float] = {}
        for weight, vec in (
            (w_query, query_sparse),
            (w_ctx, ctx.sparse_context),
            (w_article, ctx.article_sparse),
        ):
            for term, value in vec.items():
                sparse[term] = sparse.get(term, 0.0) + weight * value
        for term in ctx.rare_words:
            if term in sparse:
                sparse[term] *= 2.0
        return (dense if populated else None), sparse

    def propose(self, state: DialogueState, query: list[Token]):
        if not self.bank:
            return self.nothing()
        ctx = self._context(state)
        query_dense = embed_bow(query, self.table, weighting=self.config.bowe_weighting)
        query_sparse = embed_sparse(query, self.table.term_stats)
        blend_dense, blend_sparse = self._blend(query_dense, query_sparse, ctx)
        query_repr = (query_dense, query_sparse)
        blend_repr = (blend_dense, blend_sparse)

        content = [
            t.normalized for t in query if t.is_word and t.normalized not in STOPWORDS
        ]
        all_common = all(
            idf_weight(w, self.table.term_stats) < self.config.idf_floor for w in content
        )
        query_text = " ".join(t.normalized for t in word_tokens(query))

        scored: list[tuple[float, str, QuoteEntry]] = []
        echoes: list[tuple[float, str, QuoteEntry]] = []
        for entry, oov_frac in zip(self.bank, self._oov_fraction):
            score = mixed_similarity(
                blend_repr, (entry.dense, entry.sparse), self.config.alpha
            )
            if mixed_similarity(query_repr, (entry.dense, entry.sparse), self.config.alpha) > QUOTE_ECHO_THRESHOLD:
                score *= QUOTE_ECHO_PENALTY
            if all_common:
                score *= QUOTE_COMMON_PENALTY
            if oov_frac > QUOTE_OOV_FRACTION:
                score *= QUOTE_OOV_PENALTY
            if score <= 0.0:
                continue
            entry_text = " ".join(t.normalized for t in word_tokens(tokenize(entry.text)))
            row = (score, entry.text, entry)
            if entry_text == query_text:
                echoes.append(row)
            else:
                scored.append(row)
        # A quote that merely parrots the user only survives when nothing
        # else scored at all.
        if not scored:
            scored = echoes
        if not scored:
            self.last_ranking = []
            return self.nothing()
        scored.sort(key=lambda row: (-row[0], row[1]))
        self.last_ranking = [(row[0], row[1]) for row in scored]
        pool = scored[:QUOTE_POOL_SIZE]
        score, _, chosen = pool[self.rng.randrange(len(pool))]

        self._update_context(ctx, query_dense, query_sparse, query, chosen)
        return self.candidate(chosen.text, min(1.0, score))

    def _update_context(self, ctx, query_dense, query_sparse, query, chosen: QuoteEntry):
        decay = self.config.quote_context_decay
        if ctx.dense_context is None:
            ctx.dense_context = np.zeros(self.table.dim, dtype=np.float64)
        ctx.dense_context = ctx.dense_context * decay
        if query_dense is not None:
            ctx.dense_context = ctx.dense_context + query_dense
        if chosen.dense is not None:
            ctx.dense_context = ctx.dense_context + chosen.dense
        ctx.sparse_context = _decay_sparse(ctx.sparse_context, decay)
        _add_sparse(ctx.sparse_context, query_sparse)
        _add_sparse(ctx.sparse_context, chosen.sparse)
        for tok in query:
            if not tok.is_word or tok.normalized in STOPWORDS:
                continue
            if idf_weight(tok.normalized, self.table.term_stats) >= RARE_WORD_IDF:
                ctx.rare_words.add(tok.normalized)


@dataclass(frozen=True)
class PatternRule:
    """A wildcard pattern with a response template.

    ``*`` in the pattern consumes one or more word tokens.  The template may
    reference wildcard captures as ``{0}``, ``{1}``, ... and persona
    predicates as ``{name}``, ``{hobby}``, and so on.
    """

    pattern: tuple[str, ...]
    template: str

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("pattern must be non-empty")

    @property
    def wildcard_free(self) -> bool:
        return "*" not in self.pattern


def parse_pattern_rules(rows: list[dict]) -> list[PatternRule]:
    """Build rules from {pattern, template} dicts (file order preserved)."""
    rules = []
    for row in rows:
        words = [w.lower() for w in row["pattern"].split() if w]
        rules.append(PatternRule(pattern=tuple(words), template=row["template"]))
    return rules


def match_pattern(pattern: tuple[str, ...], words: list[str]) -> list[str] | None:
    """Match a wildcard pattern against word tokens.

    Returns the list of wildcard captures (each a space-joined token run) or
    None if the pattern does not match.  Wildcards are greedy from the left
    but backtrack, so every consistent split is considered.
    """

    def walk(pi: int, wi: int) -> list[list[str]] | None:
        if pi == len(pattern):
            return [] if wi == len(words) else None
        if pattern[pi] == "*":
            # Try the longest capture first.
            for end in range(len(words), wi, -1):
                rest = walk(pi + 1, end)
                if rest is not None:
                    return [words[wi:end]] + rest
            return None
        if wi < len(words) and words[wi] == pattern[pi]:
            return walk(pi + 1, wi + 1)
        return None

    captures = walk(0, 0)
    if captures is None:
        return None
    return [" ".join(group) for group in captures]


def wildcard_cost(pattern: tuple[str, ...], words: list[str]) -> int:
    """Number of word tokens consumed by wildcards for a matching rule."""
    return len(words) - sum(1 for p in pattern if p != "*")


_SLOT_RE = re.compile(r"\{([A-Za-z0-9_]+)\}")


def fill_template(template: str, captures: list[str], persona: dict[str, str]) -> str:
    def replace(match: re.Match) -> str:
        key = match.group(1)
        if key.isdigit():
            idx = int(key)
            return captures[idx] if idx < len(captures) else ""
        return persona.get(key, match.group(0))

    return _SLOT_RE.sub(replace, template)


class PatternTalker(Talker):
    """Scripted small talk: wildcard rules, a persona, and novelty scoring."""

    def __init__(
        self,
        rules: list[PatternRule],
        persona_choices: dict[str, list[str]],
        wordlog: dict[str, int],
        talker_id: str = "alice",
    ):
        super().__init__(talker_id)
        if not rules:
            raise ValueError("rule list must be non-empty")
        self.rules = rules
        self.persona_choices = persona_choices
        self.wordlog = wordlog

    def _persona(self, state: DialogueState) -> dict[str, str]:
        slot = state.slot(self.talker_id)
        if "persona" not in slot:
            slot["persona"] = {
                key: self.rng.choice(values)
                for key, values in sorted(self.persona_choices.items())
                if values
            }
        return slot["persona"]

    def _originality(self, response: str, query_words: set[str]) -> float:
        introduced = [
            t.normalized
            for t in tokenize(response)
            if t.is_word and t.normalized not in query_words
        ]
        if not introduced:
            return 1.0
        least = min(self.wordlog.get(term, 0) for term in introduced)
        return 1.0 + 1.0 / (1.0 + math.log(1.0 + least))

    def propose(self, state: DialogueState, query: list[Token]):
        words = [t.normalized for t in word_tokens(query)]
        if not words:
            return self.nothing()
        best: tuple[int, int, list[str], PatternRule] | None = None
        for order, rule in enumerate(self.rules):
            captures = match_pattern(rule.pattern, words)
            if captures is None:
                continue
            cost = wildcard_cost(rule.pattern, words)
            if best is None or (cost, order) < (best[0], best[1]):
                best = (cost, order, captures, rule)
        if best is None:
            return self.nothing()
        _, _, captures, rule = best
        persona = self._persona(state)
        response = fill_template(rule.template, captures, persona)

        slot = state.slot(self.talker_id)
        used: set[str] = slot.setdefault("used", set())
        novelty = 0.0 if response in used else 1.0
        used.add(response)

        length = len(word_tokens(tokenize(response)))
        shortness = 1.0 / (1.0 + length / 20.0)
        originality = self._originality(response, set(words))
        confidence = PATTERN_BASE_CONFIDENCE * shortness * novelty * originality
        return self.candidate(response, confidence)


class TriviaTalker(Talker):
    """Offer a trivia question matching the recent conversation topic."""

    def __init__(self, bank: list[TriviaItem], table: EmbeddingTable, talker_id: str = "trivia"):
        super().__init__(talker_id)
        self.bank = bank
        self.table = table

    def propose(self, state: DialogueState, query: list[Token]):
        if not self.bank:
            return self.nothing()
        recent: list[Token] = []
        user_turns = [t for t in state.history if t.speaker == "user"]
        for turn in user_turns[-TRIVIA_RECENT_TURNS:]:
            recent.extend(turn.processed)
        if not recent:
            recent = list(query)
        topic_vec = tfidf_average(recent, self.table, self.table.term_stats)
        if topic_vec is None:
            return self.nothing()
        best_item = None
        best_sim = -2.0
        for item in self.bank:
            if item.qa_embedding is None:
                continue
            sim = cosine(topic_vec, item.qa_embedding)
            if sim > best_sim:
                best_sim = sim
                best_item = item
        if best_item is None:
            return self.nothing()
        quality = max(0.0, best_sim)
        confidence = self.rng.uniform(0.0, quality)
        return self.candidate(TRIVIA_TEMPLATE.format(best_item.question), confidence)
