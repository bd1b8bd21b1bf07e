"""Auxiliary talkers: article facts, arithmetic, greetings, and gimmicks.

Small single-purpose behaviors: surfacing interesting sentences from
encyclopedia pages related to the article, evaluating arithmetic embedded in
an utterance, returning foreign-language salutations, and reacting to URLs,
e-mail addresses, and emoji.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from ..knowledge import DefinitionStore
from ..state import DialogueState
from ..text import STOPWORDS, Token, tokenize, word_tokens
from .base import Talker

__all__ = [
    "extract_facts",
    "FactTalker",
    "eval_math",
    "MathError",
    "AbacusTalker",
    "CharNgramClassifier",
    "detect_greeting_language",
    "GimmickTalker",
]

THIRD_PERSON_PRONOUNS = frozenset(
    {
        "he",
        "she",
        "it",
        "his",
        "her",
        "hers",
        "him",
        "its",
        "they",
        "them",
        "their",
        "theirs",
        "himself",
        "herself",
        "itself",
        "themselves",
    }
)
FACT_LENGTH_WINDOW = (8, 30)
FACT_PREFIX = "Interesting fact: "
FACT_KEYWORDS = frozenset({"fact", "facts", "interesting", "more", "about"})
FACT_BASE = 0.1
FACT_KEYWORD_BONUS = 0.3
FACT_OVERLAP_STEP = 0.02
FACT_OVERLAP_CAP = 0.1
FACT_RANK_BONUS = 0.2
FACT_LENGTH_BONUS = 0.1
MATH_CONFIDENCE = 1.0
DIV_ZERO_REPLY = "I can't divide by zero."
NO_MATH_REPLY = "I have no idea."
GREETING_CONFIDENCE = 0.7
GIMMICK_CONFIDENCE = 0.6


# --- article facts -----------------------------------------------------------


def _title_words(title: str) -> set[str]:
    return {
        t.normalized
        for t in tokenize(title.replace("_", " "))
        if t.is_word and t.normalized not in STOPWORDS
    }


def sentence_is_interesting(sentence: str, title_words: set[str]) -> bool:
    """A sentence qualifies when a title word occurs in it and no third-person
    pronoun appears before the first such occurrence."""
    if not title_words:
        return False
    for tok in tokenize(sentence):
        if not tok.is_word:
            continue
        if tok.normalized in title_words:
            return True
        if tok.normalized in THIRD_PERSON_PRONOUNS:
            return False
    return False


def _capitalized_spans(article: str) -> list[str]:
    """Maximal runs of capitalized words, candidate page titles."""
    spans: list[str] = []
    current: list[str] = []
    for tok in tokenize(article):
        if tok.is_word and tok.surface[:1].isupper():
            current.append(tok.normalized)
        else:
            if current:
                spans.append(" ".join(current))
            current = []
    if current:
        spans.append(" ".join(current))
    return spans


def extract_facts(article: str, pages: DefinitionStore, index=None) -> list[str]:
    """Ordered interesting sentences from pages related to the article.

    Pages are found by looking article capitalized spans up as titles and,
    when an index is given, by following the best-matching indexed document's
    title.  Sentences keep their page's retrieval score for ordering:
    higher-scored pages first, then first sentences, then sentences whose
    length falls inside the readable window.
    """
    if not article.strip():
        raise ValueError("article must be non-empty")
    sources: list[tuple[float, object]] = []
    seen_titles: set[str] = set()
    for span in _capitalized_spans(article):
        page = pages.get(span)
        if page is not None and page.title.lower() not in seen_titles:
            seen_titles.add(page.title.lower())
            sources.append((1.0, page))
    if index is not None:
        hits = index.query_paragraphs(article, k=10)
        top_score = hits[0][1] if hits else 0.0
        for para, score in hits:
            title = para.doc_title or para.doc_id
            page = pages.get(title)
            if page is None or page.title.lower() in seen_titles:
                continue
            seen_titles.add(page.title.lower())
            relative = score / top_score if top_score > 0 else 0.0
            sources.append((relative, page))

    lo, hi = FACT_LENGTH_WINDOW
    rows: list[tuple[float, int, int, int, int, str]] = []
    seen_sentences: set[str] = set()
    for page_order, (page_score, page) in enumerate(sources):
        titles = _title_words(page.title)
        for position, sentence in enumerate(page.sentences):
            if sentence in seen_sentences:
                continue
            if not sentence_is_interesting(sentence, titles):
                continue
            seen_sentences.add(sentence)
            length = len(word_tokens(tokenize(sentence)))
            in_window = 1 if lo <= length <= hi else 0
            first = 1 if position == 0 else 0
            rows.append((-page_score, -first, -in_window, page_order, position, sentence))
    rows.sort()
    return [row[5] for row in rows]


class FactTalker(Talker):
    """Offer the next unheard interesting fact about the article topic."""

    def __init__(self, pages: DefinitionStore, index=None, talker_id: str = "facts"):
        super().__init__(talker_id)
        self.pages = pages
        self.index = index

    def _facts(self, state: DialogueState) -> list[str]:
        slot = state.slot(self.talker_id)
        if "facts" not in slot:
            slot["facts"] = (
                extract_facts(state.article, self.pages, self.index)
                if state.article and state.article.strip()
                else []
            )
        return slot["facts"]

    def propose(self, state: DialogueState, query: list[Token]):
        facts = self._facts(state)
        if not facts:
            return self.nothing()
        spoken = [
            turn.raw[len(FACT_PREFIX):]
            for turn in state.history
            if turn.speaker == "bot" and turn.raw.startswith(FACT_PREFIX)
        ]
        times_selected = len(spoken)
        heard = set(spoken)
        next_fact = None
        rank = 0
        for rank, fact in enumerate(facts):
            if fact not in heard:
                next_fact = fact
                break
        if next_fact is None:
            return self.nothing()

        words = {t.normalized for t in query if t.is_word}
        score = FACT_BASE
        if words & FACT_KEYWORDS:
            score += FACT_KEYWORD_BONUS
        fact_words = {
            t.normalized
            for t in tokenize(next_fact)
            if t.is_word and t.normalized not in STOPWORDS
        }
        overlap = len(fact_words & state.user_vocabulary)
        score += min(FACT_OVERLAP_CAP, FACT_OVERLAP_STEP * overlap)
        score += FACT_RANK_BONUS * (1.0 - rank / max(1, len(facts)))
        length = len(word_tokens(tokenize(next_fact)))
        if FACT_LENGTH_WINDOW[0] <= length <= FACT_LENGTH_WINDOW[1]:
            score += FACT_LENGTH_BONUS
        score *= 0.5 ** times_selected
        return self.candidate(FACT_PREFIX + next_fact, score)


# --- arithmetic --------------------------------------------------------------


class MathError(Exception):
    """Raised internally for malformed expressions and division by zero."""

    def __init__(self, message: str, division_by_zero: bool = False):
        super().__init__(message)
        self.division_by_zero = division_by_zero


_WORD_OPERATORS = {"plus": "+", "minus": "-", "times": "*"}
_SYMBOL_MAP = {"+": "+", "-": "-", "*": "*", "/": "/", "×": "*", "÷": "/", "(": "(", ")": ")", ".": "."}


def _math_pieces(text: str) -> list[list[str]]:
    """Contiguous runs of arithmetic tokens found in the utterance."""
    runs: list[list[str]] = []
    current: list[str] = []
    tokens = tokenize(text)
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        piece = None
        if tok.is_word and tok.normalized.isdigit():
            piece = tok.normalized
        elif tok.is_word and tok.normalized in _WORD_OPERATORS:
            piece = _WORD_OPERATORS[tok.normalized]
        elif (
            tok.is_word
            and tok.normalized == "divided"
            and i + 1 < len(tokens)
            and tokens[i + 1].normalized == "by"
        ):
            piece = "/"
            i += 1
        elif not tok.is_word and tok.surface in _SYMBOL_MAP:
            piece = _SYMBOL_MAP[tok.surface]
        if piece is None:
            if current:
                runs.append(current)
            current = []
        else:
            current.append(piece)
        i += 1
    if current:
        runs.append(current)
    return runs


def _lex(pieces: list[str]) -> list[str]:
    """Glue digit/point pieces into numbers; keep operators as-is."""
    out: list[str] = []
    i = 0
    while i < len(pieces):
        piece = pieces[i]
        if piece.isdigit():
            number = piece
            while i + 1 < len(pieces) and pieces[i + 1] == "." and i + 2 < len(pieces) and pieces[i + 2].isdigit():
                number += "." + pieces[i + 2]
                i += 2
            out.append(number)
        elif piece == ".":
            raise MathError("stray decimal point")
        else:
            out.append(piece)
        i += 1
    return out


class _Parser:
    """Recursive-descent evaluator: + - over * / over unary minus and parens."""

    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise MathError("unexpected end of expression")
        self.pos += 1
        return tok

    def parse(self) -> Fraction:
        value = self.expr()
        if self.peek() is not None:
            raise MathError(f"trailing token {self.peek()!r}")
        return value

    def expr(self) -> Fraction:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            right = self.term()
            value = value + right if op == "+" else value - right
        return value

    def term(self) -> Fraction:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            right = self.factor()
            if op == "*":
                value = value * right
            else:
                if right == 0:
                    raise MathError("division by zero", division_by_zero=True)
                value = value / right
        return value

    def factor(self) -> Fraction:
        tok = self.take()
        if tok == "-":
            return -self.factor()
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise MathError("unbalanced parentheses")
            return value
        if tok == ")":
            raise MathError("unbalanced parentheses")
        try:
            return Fraction(tok)
        except ValueError as exc:
            raise MathError(f"bad number {tok!r}") from exc


def render_number(value: Fraction) -> str:
    """Integers plain; otherwise a decimal trimmed to at most six places."""
    if value.denominator == 1:
        return str(value.numerator)
    text = f"{float(value):.6f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-") else "0"


def eval_math(text: str) -> tuple[str | None, MathError | None]:
    """Find and evaluate the largest arithmetic span in an utterance.

    Returns (rendered result, None) on success, (None, None) when no span of
    at least two operands exists, and (None, error) when the best span is
    malformed or divides by zero.
    """
    runs = _math_pieces(text)
    best: list[str] | None = None
    best_operands = 0
    for run in runs:
        operands = sum(1 for piece in run if piece.isdigit())
        if operands > best_operands or (operands == best_operands and best is not None and len(run) > len(best)):
            best = run
            best_operands = operands
    if best is None or best_operands < 2:
        return None, None
    try:
        tokens = _lex(best)
        value = _Parser(tokens).parse()
    except MathError as exc:
        return None, exc
    return render_number(value), None


class AbacusTalker(Talker):
    """Evaluate arithmetic found in the user's message."""

    talker_id = "abacus"

    def propose(self, state: DialogueState, query: list[Token]):
        text = " ".join(t.surface for t in query)
        result, error = eval_math(text)
        if error is not None and error.division_by_zero:
            return self.candidate(DIV_ZERO_REPLY, MATH_CONFIDENCE)
        if result is None:
            return self.candidate(NO_MATH_REPLY, 0.0)
        return self.candidate(f"It is {result}.", MATH_CONFIDENCE)


# --- greeting language detection ---------------------------------------------


class CharNgramClassifier:
    """Multinomial character 3-gram language guesser with add-one smoothing."""

    def __init__(self, n: int = 3):
        self.n = n
        self.counts: dict[str, dict[str, int]] = {}
        self.totals: dict[str, int] = {}
        self.priors: dict[str, int] = {}
        self.vocabulary: set[str] = set()

    def _grams(self, text: str) -> list[str]:
        padded = f" {text.lower().strip()} "
        if len(padded) < self.n:
            return [padded]
        return [padded[i : i + self.n] for i in range(len(padded) - self.n + 1)]

    def train(self, samples: list[tuple[str, str]]) -> None:
        """samples: (language code, sentence) rows."""
        if not samples:
            raise ValueError("no training samples")
        for lang, sentence in samples:
            grams = self._grams(sentence)
            bucket = self.counts.setdefault(lang, {})
            for gram in grams:
                bucket[gram] = bucket.get(gram, 0) + 1
                self.vocabulary.add(gram)
            self.totals[lang] = self.totals.get(lang, 0) + len(grams)
            self.priors[lang] = self.priors.get(lang, 0) + 1

    def classify(self, text: str) -> str:
        if not self.counts:
            raise ValueError("classifier is untrained")
        grams = self._grams(text)
        vocab_size = len(self.vocabulary)
        total_docs = sum(self.priors.values())
        best_lang = ""
        best_score = -math.inf
        for lang in sorted(self.counts):
            bucket = self.counts[lang]
            denom = self.totals[lang] + vocab_size
            score = math.log(self.priors[lang] / total_docs)
            for gram in grams:
                score += math.log((bucket.get(gram, 0) + 1) / denom)
            if score > best_score:
                best_score = score
                best_lang = lang
        return best_lang


def detect_greeting_language(
    text: str,
    greetings: dict[str, list[str]],
    classifier: CharNgramClassifier,
    english: str = "en",
) -> str | None:
    """Language of a foreign salutation, or None.

    A language is a candidate when one of its greeting phrases shares a word
    with the utterance.  A single candidate wins if the classifier agrees the
    text is not English; among several the classifier picks, but only from
    the candidates.  English text never counts as a foreign greeting.
    """
    words = {t.normalized for t in tokenize(text) if t.is_word}
    if not words:
        return None
    candidates = []
    for lang in sorted(greetings):
        phrase_words: set[str] = set()
        for phrase in greetings[lang]:
            phrase_words.update(t.normalized for t in tokenize(phrase) if t.is_word)
        if words & phrase_words:
            candidates.append(lang)
    if not candidates:
        return None
    guess = classifier.classify(text)
    if guess == english:
        return None
    if len(candidates) == 1:
        return candidates[0]
    return guess if guess in candidates else None


# --- URL / e-mail / emoji reactions ------------------------------------------

_URL_RE = re.compile(r"(https?://|www\.)\S+", re.IGNORECASE)
_EMAIL_RE = re.compile(r"[\w.+-]+@[\w-]+\.[\w.-]+")
_EMOJI_RANGES = (
    (0x1F300, 0x1FAFF),
    (0x2600, 0x27BF),
    (0x1F000, 0x1F0FF),
    (0x1F900, 0x1F9FF),
)


def contains_emoji(text: str) -> bool:
    return any(any(lo <= ord(ch) <= hi for lo, hi in _EMOJI_RANGES) for ch in text)


class GimmickTalker(Talker):
    """React to foreign greetings, URLs, e-mail addresses, and emoji."""

    def __init__(
        self,
        responses: dict[str, list[str]],
        greetings: dict[str, list[str]] | None = None,
        classifier: CharNgramClassifier | None = None,
        talker_id: str = "gimmick",
    ):
        super().__init__(talker_id)
        self.responses = responses
        self.greetings = greetings or {}
        self.classifier = classifier

    def _raw_text(self, state: DialogueState, query: list[Token]) -> str:
        for turn in reversed(state.history):
            if turn.speaker == "user":
                return turn.raw
        return " ".join(t.surface for t in query)

    def propose(self, state: DialogueState, query: list[Token]):
        text = self._raw_text(state, query)
        if self.greetings and self.classifier is not None:
            lang = detect_greeting_language(text, self.greetings, self.classifier)
            if lang is not None:
                phrase = self.rng.choice(sorted(self.greetings[lang]))
                return self.candidate(f"{phrase}!", GREETING_CONFIDENCE)
        category = None
        if _URL_RE.search(text):
            category = "url"
        elif _EMAIL_RE.search(text):
            category = "email"
        elif contains_emoji(text):
            category = "emoji"
        if category is None or not self.responses.get(category):
            return self.nothing()
        return self.candidate(self.rng.choice(self.responses[category]), GIMMICK_CONFIDENCE)
