"""Tokenization, n-grams, term statistics, edit distance and the small
self-contained stand-ins for external spell-check / coreference tools.

Everything here is pure and deterministic; loaded resources (lexicons,
stats) are treated as immutable.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Token",
    "TermStats",
    "tokenize",
    "ngrams",
    "idf_weight",
    "levenshtein",
    "SpellCorrector",
    "resolve_references",
    "join_tokens",
    "STOPWORDS",
    "THIRD_PERSON_PRONOUNS",
]

# Closed stopword list shipped with the artifact (used for index weight caps,
# noun-phrase chunking and entity heuristics).
STOPWORDS = frozenset(
    """a an the this that these those and or but of to in on at by for with from
    as is are was were be been being am do does did have has had will would can
    could shall should may might must not no nor so if then than too very just
    about into over under again further once here there when where why how all
    any both each few more most other some such only own same s t don now he
    she it they him her them his hers its their theirs i you we me my your our
    us what which who whom whose""".split()
)

THIRD_PERSON_PRONOUNS = frozenset(
    ["he", "she", "it", "they", "him", "her", "them"]
)

_CLITICS = ("'d", "'s", "'re", "'ve", "'ll", "'m")

# Letters (any script, no digits/underscore), digit runs, clitic-ish
# apostrophe words, or any single non-space character.
_TOKEN_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*|\d+|\S", re.UNICODE)


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    is_word: bool

    @staticmethod
    def from_surface(surface: str) -> "Token":
        return Token(
            surface=surface,
            normalized=surface.lower(),
            is_word=any(ch.isalnum() for ch in surface),
        )


def _split_clitics(piece: str) -> list[str]:
    low = piece.lower()
    if low.endswith("n't") and len(piece) > 3:
        return [piece[:-3], piece[-3:]]
    for clitic in _CLITICS:
        if low.endswith(clitic) and len(piece) > len(clitic):
            cut = len(piece) - len(clitic)
            return [piece[:cut], piece[cut:]]
    return [piece]


def tokenize(text: str) -> list[Token]:
    """Split text into word, number and punctuation tokens.

    Clitics ('d, 's, n't, ...) become separate tokens, which keeps n-gram
    statistics stable across contracted and expanded forms.
    """
    tokens: list[Token] = []
    for match in _TOKEN_RE.finditer(text):
        for piece in _split_clitics(match.group()):
            if piece:
                tokens.append(Token.from_surface(piece))
    return tokens


def join_tokens(tokens: Iterable[Token]) -> str:
    """Render tokens back to readable text (single spaces, punctuation attached)."""
    out: list[str] = []
    for tok in tokens:
        if out and (not tok.is_word or tok.surface.startswith("'")) and len(tok.surface) <= 3 and not tok.surface[0].isalnum():
            out[-1] = out[-1] + tok.surface
        elif out and tok.surface.startswith("'"):
            out[-1] = out[-1] + tok.surface
        else:
            out.append(tok.surface)
    return " ".join(out)


def word_tokens(tokens: Iterable[Token]) -> list[Token]:
    return [t for t in tokens if t.is_word]


def ngrams(tokens: Sequence[Token], n: int) -> list[str]:
    """Contiguous normalized n-grams over the word tokens, punctuation excluded."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    words = [t.normalized for t in tokens if t.is_word]
    if len(words) < n:
        return []
    if n == 1:
        return words
    return [f"{a} {b}" for a, b in zip(words, words[1:])]


class TermStats:
    """Per-corpus term table: document counts, corpus frequencies, corpus size."""

    def __init__(
        self,
        doc_count: dict[str, int] | None = None,
        corpus_freq: dict[str, int] | None = None,
        total_docs: int = 0,
    ):
        self.doc_count: dict[str, int] = doc_count or {}
        self.corpus_freq: dict[str, int] = corpus_freq or {}
        self.total_docs = total_docs

    def add_document(self, terms: Iterable[str]) -> None:
        counts: dict[str, int] = {}
        for term in terms:
            counts[term] = counts.get(term, 0) + 1
        for term, c in counts.items():
            self.doc_count[term] = self.doc_count.get(term, 0) + 1
            self.corpus_freq[term] = self.corpus_freq.get(term, 0) + c
        self.total_docs += 1

    def tf(self, term: str) -> int:
        return self.corpus_freq.get(term, 0)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "total_docs": self.total_docs,
                    "doc_count": self.doc_count,
                    "corpus_freq": self.corpus_freq,
                },
                fh,
                ensure_ascii=False,
                sort_keys=True,
            )

    @classmethod
    def load(cls, path) -> "TermStats":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(raw["doc_count"], raw["corpus_freq"], raw["total_docs"])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TermStats)
            and self.total_docs == other.total_docs
            and self.doc_count == other.doc_count
            and self.corpus_freq == other.corpus_freq
        )


def idf_weight(term: str, stats: TermStats) -> float:
    """Inverse document frequency, log(N/df); unseen terms use df=0.5."""
    if stats.total_docs <= 0:
        raise ValueError("total_docs must be positive")
    df = stats.doc_count.get(term, 0)
    if df <= 0:
        return math.log(stats.total_docs / 0.5)
    return math.log(stats.total_docs / df)


def levenshtein(a: str, b: str) -> int:
    """Minimal insert/delete/substitute edit count."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def _distance_one_edits(word: str) -> set[str]:
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = {left + right[1:] for left, right in splits if right}
    substitutes = {
        left + ch + right[1:] for left, right in splits if right for ch in _ALPHABET
    }
    inserts = {left + ch + right for left, right in splits for ch in _ALPHABET}
    return deletes | substitutes | inserts


class SpellCorrector:
    """Replaces out-of-lexicon words by the unique lexicon word one edit away."""

    def __init__(self, lexicon: Iterable[str]):
        self.lexicon = {w.strip().lower() for w in lexicon if w.strip()}

    @classmethod
    def from_file(cls, path) -> "SpellCorrector":
        with open(path, encoding="utf-8") as fh:
            return cls(fh)

    def correct(self, tokens: Sequence[Token], protected: set[str] | frozenset[str] = frozenset()) -> list[Token]:
        out: list[Token] = []
        for tok in tokens:
            if (
                not tok.is_word
                or tok.normalized in protected
                or tok.normalized in self.lexicon
                or any(ch.isdigit() for ch in tok.surface)
            ):
                out.append(tok)
                continue
            candidates = {
                edit for edit in _distance_one_edits(tok.normalized) if edit in self.lexicon
            }
            if len(candidates) != 1:
                out.append(tok)
                continue
            fixed = candidates.pop()
            if tok.surface[:1].isupper():
                fixed = fixed[:1].upper() + fixed[1:]
            out.append(Token.from_surface(fixed))
        return out


def _entities_in(text: str) -> list[list[str]]:
    """Maximal spans of capitalized words; a lone leading stopword is noise."""
    tokens = tokenize(text)
    spans: list[list[str]] = []
    current: list[str] = []
    for i, tok in enumerate(tokens):
        capitalized = tok.is_word and tok.surface[:1].isupper()
        sentence_initial = i == 0 or (not tokens[i - 1].is_word and tokens[i - 1].surface in ".!?")
        if capitalized and not (sentence_initial and tok.normalized in STOPWORDS and not current):
            current.append(tok.surface)
        else:
            if current:
                spans.append(current)
            current = []
    if current:
        spans.append(current)
    # Drop spans that are nothing but capitalized stopwords ("The", "His").
    return [s for s in spans if any(w.lower() not in STOPWORDS for w in s)]


def resolve_references(tokens: Sequence[Token], state) -> list[Token]:
    """Substitute third-person pronouns with the most recent capitalized entity
    mentioned within the last 4 turns of the dialogue; no entity, no change.
    """
    if not any(t.normalized in THIRD_PERSON_PRONOUNS for t in tokens):
        return list(tokens)
    entity: list[str] | None = None
    for turn in reversed(state.history[-4:]):
        spans = _entities_in(turn.raw)
        if spans:
            entity = spans[-1]
            break
    if entity is None:
        return list(tokens)
    out: list[Token] = []
    for tok in tokens:
        if tok.normalized in THIRD_PERSON_PRONOUNS:
            out.extend(Token.from_surface(w) for w in entity)
        else:
            out.append(tok)
    return out


_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])\s+(?=[A-Z0-9\"'])")


def split_sentences(text: str) -> list[str]:
    """Split prose into sentences on terminal punctuation followed by an
    upper-case or numeric start; good enough for encyclopedic text.
    """
    parts = _SENTENCE_BOUNDARY.split(text.strip())
    return [p.strip() for p in parts if p.strip()]
