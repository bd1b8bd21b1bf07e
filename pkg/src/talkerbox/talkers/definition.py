"""Definition-oriented talkers: encyclopedia definitions with related-topic
suggestions, fact-triple question answering, and article-topic questions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..config import EngineConfig
from ..embeddings import EmbeddingTable, cosine, embed_bow
from ..index import ParagraphIndex, paragraph_grams
from ..knowledge import DefinitionStore, TripleStore, trie_match
from ..state import DialogueState
from ..text import (
    STOPWORDS,
    Token,
    idf_weight,
    levenshtein,
    split_sentences,
    tokenize,
    word_tokens,
)
from .base import Talker

ASKING_PHRASES = (
    "tell me about",
    "tell me something about",
    "what is",
    "what are",
    "what was",
    "what were",
    "who is",
    "who are",
    "who was",
    "who were",
    "define",
    "describe",
)

INTERROGATIVES = frozenset({"what", "who", "which", "whom", "whose", "when", "where", "why", "how"})

PREPOSITIONS = frozenset(
    "about of in on for to with at by from over under between into through after".split()
)

EXACT_MATCH_CONFIDENCE = 0.9
SUGGESTION_MATCH_CONFIDENCE = 0.95
INDEX_FALLBACK_CEILING = 0.6


def is_definition_query(tokens: list[Token]) -> tuple[bool, float]:
    """Weighted rules: an asking-phrase prefix, an interrogative pronoun, and
    a final token that is not a dangling preposition.
    """
    words = [t.normalized for t in word_tokens(tokens)]
    if not words:
        return (False, 0.0)
    strength = 0.0
    joined = " ".join(words)
    if any(joined == p or joined.startswith(p + " ") for p in ASKING_PHRASES):
        strength += 0.6
    if any(w in INTERROGATIVES for w in words):
        strength += 0.2
    if words[-1] not in PREPOSITIONS:
        strength += 0.2
    strength = min(strength, 1.0)
    return (strength >= 0.5, strength)


def suggest_topics(title: str, link_table: EmbeddingTable | None, k: int) -> list[str]:
    """k most similar titles by link-embedding cosine, the title itself excluded.

    Multi-word titles are stored under underscore-joined keys (the same
    convention phrase embeddings use); results come back space-joined.
    """
    if link_table is None or k <= 0:
        return []
    key = title.lower().replace(" ", "_")
    anchor = link_table.vectors.get(key)
    if anchor is None:
        return []
    scored = [
        (cosine(anchor, vec), other)
        for other, vec in link_table.vectors.items()
        if other != key
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [other.replace("_", " ") for _, other in scored[:k]]


@dataclass
class SuggestionState:
    pending: list[str] = field(default_factory=list)


class DefinitionTalker(Talker):
    """Answers "what is X" by the opening sentence of a matching definition
    page, with an index-backed fallback and related-topic suggestions.
    """

    talker_id = "definitions"

    def __init__(
        self,
        pages: DefinitionStore,
        index: ParagraphIndex | None = None,
        link_table: EmbeddingTable | None = None,
        suggestions: int = 3,
        config: EngineConfig | None = None,
    ):
        super().__init__()
        self.pages = pages
        self.index = index
        self.link_table = link_table
        self.suggestions = suggestions
        self.config = config or EngineConfig()
        self._title_words = {
            w.normalized
            for title in pages.titles()
            for w in word_tokens(tokenize(title))
        }

    def vocabulary(self) -> set[str]:
        return set(self._title_words)

    def _slot(self, state: DialogueState) -> SuggestionState:
        return state.slot(self.talker_id, SuggestionState)

    def _exact_title(self, words: list[str]) -> str | None:
        best = None
        for title in self.pages.titles():
            tw = [t.normalized for t in word_tokens(tokenize(title))]
            n = len(tw)
            if n == 0 or n > len(words):
                continue
            for i in range(len(words) - n + 1):
                if words[i : i + n] == tw:
                    if best is None or n > best[0]:
                        best = (n, title)
                    break
        return best[1] if best else None

    def _answer_for(self, title: str, state: DialogueState, confidence: float):
        page = self.pages.get(title)
        if page is None:
            return self.nothing()
        text = page.opening
        canonical = {t.lower(): t for t in self.pages.titles()}
        offered = [
            canonical.get(name, name)
            for name in suggest_topics(page.title, self.link_table, self.suggestions)
        ]
        slot = self._slot(state)
        slot.pending = offered
        if offered:
            text += " I can also tell you about " + ", ".join(offered) + "."
        return self.candidate(text, confidence)

    def propose(self, state: DialogueState, tokens: list[Token]):
        words = [t.normalized for t in word_tokens(tokens)]
        slot = self._slot(state)
        for title in slot.pending:
            tw = [t.normalized for t in word_tokens(tokenize(title))]
            if tw and any(
                words[i : i + len(tw)] == tw for i in range(len(words) - len(tw) + 1)
            ):
                return self._answer_for(title, state, SUGGESTION_MATCH_CONFIDENCE)

        is_def, _strength = is_definition_query(tokens)
        if not is_def:
            return self.nothing()
        title = self._exact_title(words)
        if title is not None:
            return self._answer_for(title, state, EXACT_MATCH_CONFIDENCE)

        if self.index is None:
            return self.nothing()
        content = " ".join(w for w in words if w not in STOPWORDS) or " ".join(words)
        hits = self.index.query_paragraphs(content, k=3)
        if not hits:
            return self.nothing()
        top_para, top_score = hits[0]
        page = self.pages.get(top_para.doc_title or top_para.doc_id)
        if page is None:
            return self.nothing()
        self_score = sum(self.index.gram_weight(g) for g in paragraph_grams(content))
        normalized = top_score / self_score if self_score > 0 else 0.0
        confidence = INDEX_FALLBACK_CEILING * min(1.0, normalized)
        slot.pending = suggest_topics(page.title, self.link_table, self.suggestions)
        return self.candidate(page.opening, confidence)


ATTRIBUTE_SPLIT = re.compile(r"[_\s]+|(?<=[a-z])(?=[A-Z])")

AGE_PATTERNS = ("how old", "how many years")

CONNECTION_THRESHOLD = 0.5
SYNONYM_BASE = 0.9
NEIGHBOR_BASE = 0.8
ABSTRACT_GENERATION = 0.8


def attribute_words(attribute: str) -> list[str]:
    return [w.lower() for w in ATTRIBUTE_SPLIT.split(attribute) if w]


def pluralize(word: str) -> str:
    if word.endswith("s"):
        return word
    if word.endswith("y") and len(word) > 1 and word[-2] not in "aeiou":
        return word[:-1] + "ies"
    return word + "s"


class TripleTalker(Talker):
    """Answers factual questions from the triple store: match a resource in
    the query via the name trie, connect query words to one of its attributes,
    and phrase the values as a declarative sentence.
    """

    talker_id = "dbpedia"

    def __init__(
        self,
        store: TripleStore,
        table: EmbeddingTable | None = None,
        thesaurus: dict[str, list[str]] | None = None,
        config: EngineConfig | None = None,
        reference_year: int = 2017,
    ):
        super().__init__()
        self.store = store
        self.table = table
        self.thesaurus = thesaurus or {}
        self.config = config or EngineConfig()
        self.reference_year = reference_year

    def vocabulary(self) -> set[str]:
        out: set[str] = set()
        for name in self.store.names.values():
            out |= {t.normalized for t in word_tokens(tokenize(name))}
        return out

    def _connection(self, query_words: list[str], attribute: str) -> float:
        attrs = attribute_words(attribute)
        best = 0.0
        for w in query_words:
            for a in attrs:
                if w == a:
                    return 1.0
                for syn in self.thesaurus.get(w, []):
                    span = max(len(syn), len(a))
                    if span:
                        score = SYNONYM_BASE * (1 - levenshtein(syn, a) / span)
                        best = max(best, score)
                if self.table is not None:
                    vw = self.table.vectors.get(w)
                    va = self.table.vectors.get(a)
                    if vw is not None and va is not None:
                        c = cosine(vw, va)
                        if c > self.config.neighborhood_threshold:
                            best = max(best, NEIGHBOR_BASE * c)
        return best

    def _prefer_by_question(
        self, contenders: list[str], resource: str, qwords: set[str]
    ) -> str:
        """Break attribute-score ties with the question word: "when" prefers
        attributes whose values carry a year, "where" prefers ones without.
        """
        if len(contenders) > 1:

            def dated(attr: str) -> bool:
                return any(
                    _leading_year(t.value) is not None
                    for t in self.store.attributes(resource)
                    if t.attribute == attr
                )

            if "when" in qwords:
                with_year = [a for a in contenders if dated(a)]
                if with_year:
                    return with_year[0]
            elif "where" in qwords:
                without_year = [a for a in contenders if not dated(a)]
                if without_year:
                    return without_year[0]
        return contenders[0]

    def _age_answer(self, resource: str) -> tuple[str, float] | None:
        birth = death = None
        for t in self.store.attributes(resource):
            attrs = attribute_words(t.attribute)
            year = _leading_year(t.value)
            if year is None:
                continue
            if "birth" in attrs:
                birth = year
            elif "death" in attrs:
                death = year
        if birth is None:
            return None
        name = self.store.names[resource]
        if death is not None:
            return (f"{name} was {death - birth} years old", 1.0)
        return (f"{name} is {self.reference_year - birth} years old", 1.0)

    def propose(self, state: DialogueState, tokens: list[Token]):
        resource = trie_match(self.store, tokens)
        if resource is None:
            return self.nothing()
        words = [t.normalized for t in word_tokens(tokens)]
        joined = " ".join(words)

        if any(p in joined for p in AGE_PATTERNS):
            aged = self._age_answer(resource)
            if aged is not None:
                text, generation = aged
                return self.candidate(text, generation)

        name_words = {
            t.normalized for t in word_tokens(tokenize(self.store.names[resource]))
        }
        content = [w for w in words if w not in STOPWORDS and w not in name_words]

        scored_attrs = []
        for attr in sorted({t.attribute for t in self.store.attributes(resource)}):
            score = self._connection(content, attr)
            if score > 0.0:
                scored_attrs.append((score, attr))
        if scored_attrs:
            best_score = max(s for s, _ in scored_attrs)
            contenders = [a for s, a in scored_attrs if s >= best_score - 1e-9]
            best_attr = self._prefer_by_question(contenders, resource, set(words))
        else:
            best_attr, best_score = None, 0.0

        name = self.store.names[resource]
        if best_attr is not None and best_score >= CONNECTION_THRESHOLD:
            values = [
                t.value for t in self.store.attributes(resource) if t.attribute == best_attr
            ]
            phrase_words = attribute_words(best_attr)
            if len(values) > 1:
                phrase_words[-1] = pluralize(phrase_words[-1])
                verb = "are"
            else:
                verb = "is"
            text = f"{name} {' '.join(phrase_words)} {verb} {', '.join(values)}"
            return self.candidate(text, best_score * 1.0)

        abstract = [
            t.value for t in self.store.attributes(resource) if t.attribute == "abstract"
        ]
        if abstract:
            return self.candidate(abstract[0], ABSTRACT_GENERATION)
        return self.nothing()


def _leading_year(value: str) -> int | None:
    m = re.match(r"\s*(\d{3,4})", value)
    return int(m.group(1)) if m else None


TOPIC_CONFIDENCE = 0.9


class TopicTalker(Talker):
    """Recognizes "what is this article about" style prompts and answers with
    a rotating summary: best sentence, noun-phrase gist, or the index title.
    """

    talker_id = "topic"

    def __init__(
        self,
        questions: list[str],
        table: EmbeddingTable | None,
        index: ParagraphIndex | None = None,
        config: EngineConfig | None = None,
    ):
        super().__init__()
        self.questions = questions
        self.table = table
        self.index = index
        self.config = config or EngineConfig()
        self._bank = [
            embed_bow(tokenize(q), self.table) if self.table else None
            for q in questions
        ]

    def _match(self, tokens: list[Token]) -> float:
        if self.table is None:
            return 0.0
        query = embed_bow(tokens, self.table)
        if query is None:
            return 0.0
        best = 0.0
        for vec in self._bank:
            if vec is not None:
                best = max(best, cosine(query, vec))
        return best

    def _top_sentence(self, article: str) -> str | None:
        stats = self.table.term_stats if self.table else None
        if stats is None:
            return None
        best, best_score = None, float("-inf")
        for sent in split_sentences(article):
            ws = [t.normalized for t in word_tokens(tokenize(sent))]
            if not ws:
                continue
            score = sum(idf_weight(w, stats) for w in ws)
            if score > best_score:
                best, best_score = sent, score
        return best

    def _noun_phrase(self, article: str) -> str | None:
        sentences = split_sentences(article)
        for sent in sentences:
            toks = tokenize(sent)
            span: list[str] = []
            for i, tok in enumerate(toks):
                if tok.is_word and tok.surface[:1].isupper() and (
                    i > 0 or tok.normalized not in STOPWORDS
                ):
                    span.append(tok.surface)
                elif span:
                    if i == 1:
                        span = []
                        continue
                    break
            if len(span) >= 1 and not all(w.lower() in STOPWORDS for w in span):
                return " ".join(span)
        for sent in sentences:
            ws = [t for t in word_tokens(tokenize(sent)) if t.normalized not in STOPWORDS]
            if ws:
                return ws[0].surface
        return None

    def _index_title(self, article: str) -> str | None:
        if self.index is None:
            return None
        hits = self.index.query_paragraphs(article[:300], k=1)
        if not hits:
            return None
        title = hits[0][0].doc_title or hits[0][0].doc_id
        return title or None

    def propose(self, state: DialogueState, tokens: list[Token]):
        if not state.article:
            return self.nothing()
        if self._match(tokens) < self.config.topic_match_threshold:
            return self.nothing()
        slot = state.slot(self.talker_id, lambda: {"asked": 0})
        variants = []
        top = self._top_sentence(state.article)
        if top:
            variants.append(top)
        phrase = self._noun_phrase(state.article)
        if phrase:
            variants.append(f"The text is about {phrase}.")
        title = self._index_title(state.article)
        if title:
            variants.append(f"The text is about {title}.")
        if not variants:
            return self.nothing()
        text = variants[slot["asked"] % len(variants)]
        slot["asked"] += 1
        return self.candidate(text, TOPIC_CONFIDENCE)
