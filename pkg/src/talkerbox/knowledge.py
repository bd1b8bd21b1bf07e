"""Static knowledge stores and their file loaders.

Everything here is immutable after load and safe to share across threads:
definition pages, fact triples with a name trie and rank table, dialogue
pairs, quotes, trivia items, the thesaurus, and small lexicon files.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingTable, embed_bow, embed_sparse, tfidf_average
from .text import Token, tokenize, word_tokens

MAX_RESOURCES = 100_000
TOXICITY_ADMIT_BELOW = 0.4

DEFAULT_SKIP_PHRASES = frozenset({"who is", "how old", "the", "a", "an", "it", "who", "what"})


class IngestionError(ValueError):
    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}, line {line_no}: {message}")
        self.path = path
        self.line_no = line_no


@dataclass(frozen=True)
class DefinitionPage:
    title: str
    sentences: tuple[str, ...]
    links: tuple[str, ...] = ()

    @property
    def opening(self) -> str:
        return self.sentences[0]


class DefinitionStore:
    """Definition pages addressable by case-insensitive title."""

    def __init__(self, pages: list[DefinitionPage]):
        self._by_title = {page.title.lower(): page for page in pages}

    def get(self, title: str) -> DefinitionPage | None:
        return self._by_title.get(title.lower())

    def titles(self) -> list[str]:
        return [page.title for page in self._by_title.values()]

    def __len__(self) -> int:
        return len(self._by_title)

    def __iter__(self):
        return iter(self._by_title.values())

    def __eq__(self, other):
        return isinstance(other, DefinitionStore) and self._by_title == other._by_title


@dataclass(frozen=True)
class Triple:
    resource: str
    attribute: str
    value: str


@dataclass(frozen=True)
class DialoguePair:
    a_text: str
    b_text: str
    a_embedding: np.ndarray
    toxic_prob: float = 0.0

    def __eq__(self, other):
        if not isinstance(other, DialoguePair):
            return NotImplemented
        return (
            self.a_text == other.a_text
            and self.b_text == other.b_text
            and self.toxic_prob == other.toxic_prob
            and np.array_equal(self.a_embedding, other.a_embedding)
        )


@dataclass(frozen=True)
class TriviaItem:
    question: str
    answer: str
    qa_embedding: np.ndarray


@dataclass(frozen=True)
class QuoteEntry:
    text: str
    author: str
    dense: np.ndarray | None
    sparse: dict[str, float]


class _TrieNode:
    __slots__ = ("children", "resources")

    def __init__(self):
        self.children: dict[str, _TrieNode] = {}
        self.resources: list[str] = []


def resource_display_name(resource_id: str) -> str:
    return resource_id.replace("_", " ")


class TripleStore:
    """Fact triples grouped by resource, with a token trie over resource names
    and a rank used to break matching ties.
    """

    def __init__(self):
        self.triples: dict[str, list[Triple]] = {}
        self.names: dict[str, str] = {}
        self.rank: dict[str, float] = {}
        self._trie = _TrieNode()

    def add(self, triple: Triple, rank: float | None = None) -> None:
        if not (triple.resource and triple.attribute and triple.value):
            raise ValueError(f"triple fields must be non-empty: {triple}")
        first = triple.resource not in self.triples
        self.triples.setdefault(triple.resource, []).append(triple)
        if first:
            name = resource_display_name(triple.resource)
            self.names[triple.resource] = name
            self.rank.setdefault(triple.resource, 1.0)
            node = self._trie
            for tok in word_tokens(tokenize(name)):
                node = node.children.setdefault(tok.normalized, _TrieNode())
            node.resources.append(triple.resource)
        if rank is not None:
            self.rank[triple.resource] = rank

    def set_rank(self, resource: str, rank: float) -> None:
        self.rank[resource] = rank

    def attributes(self, resource: str) -> list[Triple]:
        return self.triples.get(resource, [])

    def __len__(self) -> int:
        return len(self.triples)

    def __eq__(self, other):
        return (
            isinstance(other, TripleStore)
            and self.triples == other.triples
            and self.rank == other.rank
        )

    def _spans(self, words: list[str]):
        for start in range(len(words)):
            node = self._trie
            for end in range(start, len(words)):
                node = node.children.get(words[end])
                if node is None:
                    break
                if node.resources:
                    yield (end - start + 1, words[start : end + 1], node.resources)


def trie_match(
    store: TripleStore,
    tokens: list[Token],
    skip_phrases: frozenset[str] = DEFAULT_SKIP_PHRASES,
) -> str | None:
    """Best resource whose name appears as a token subsequence of the query.

    Longest span wins; ties go to the higher-ranked resource, then to the
    lexicographically smallest id so the result is deterministic.
    """
    words = [t.normalized for t in word_tokens(tokens)]
    candidates: list[tuple[int, float, str]] = []
    for length, span, resources in store._spans(words):
        if " ".join(span) in skip_phrases:
            continue
        for rid in resources:
            candidates.append((length, store.rank.get(rid, 1.0), rid))
    if not candidates:
        return None
    candidates.sort(key=lambda c: (-c[0], -c[1], c[2]))
    return candidates[0][2]


# --- loaders ----------------------------------------------------------------


def _open_lines(path):
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line.strip():
                yield i, line


def load_definitions(path) -> DefinitionStore:
    pages = []
    for i, line in _open_lines(path):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestionError(path, i, f"bad JSON: {exc}") from exc
        title = record.get("title", "")
        sentences = record.get("sentences", [])
        if not title:
            raise IngestionError(path, i, "missing title")
        if not sentences:
            raise IngestionError(path, i, f"page {title!r} has no sentences")
        pages.append(
            DefinitionPage(
                title=title,
                sentences=tuple(sentences),
                links=tuple(record.get("links", [])),
            )
        )
    return DefinitionStore(pages)


def load_triples(path, ranks_path=None, max_resources: int = MAX_RESOURCES) -> TripleStore:
    ranks: dict[str, float] = {}
    if ranks_path is not None:
        for i, line in _open_lines(ranks_path):
            parts = line.split("\t")
            if len(parts) != 2:
                raise IngestionError(ranks_path, i, "expected resource<TAB>rank")
            try:
                ranks[parts[0]] = float(parts[1])
            except ValueError as exc:
                raise IngestionError(ranks_path, i, f"bad rank: {parts[1]!r}") from exc

    rows: list[Triple] = []
    for i, line in _open_lines(path):
        parts = line.split("\t")
        if len(parts) != 3 or not all(parts):
            raise IngestionError(path, i, "expected resource<TAB>attribute<TAB>value")
        rows.append(Triple(*parts))

    resources = {t.resource for t in rows}
    if len(resources) > max_resources:
        keep = set(
            sorted(resources, key=lambda r: (-ranks.get(r, 1.0), r))[:max_resources]
        )
    else:
        keep = resources

    store = TripleStore()
    for triple in rows:
        if triple.resource in keep:
            store.add(triple, rank=ranks.get(triple.resource))
    return store


def load_pairs(path, table: EmbeddingTable, tox=None, admit_below: float = TOXICITY_ADMIT_BELOW) -> list[DialoguePair]:
    """Dialogue pairs from JSON-lines {a, b}.

    Pairs whose A side embeds to nothing are dropped; when a toxicity scorer
    is given, only pairs scoring strictly below the threshold are admitted.
    """
    if table is None:
        raise ValueError("an embedding table is required to load pairs")
    bank: list[DialoguePair] = []
    for i, line in _open_lines(path):
        try:
            record = json.loads(line)
            a, b = record["a"], record["b"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise IngestionError(path, i, f"bad pair record: {exc}") from exc
        vec = embed_bow(tokenize(a), table)
        if vec is None:
            continue
        prob = float(tox(a, b)) if tox is not None else 0.0
        if prob < admit_below:
            bank.append(DialoguePair(a, b, vec, prob))
    return bank


def load_quotes(path, table: EmbeddingTable) -> list[QuoteEntry]:
    bank: list[QuoteEntry] = []
    for i, line in _open_lines(path):
        try:
            record = json.loads(line)
            text = record["text"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise IngestionError(path, i, f"bad quote record: {exc}") from exc
        toks = tokenize(text)
        bank.append(
            QuoteEntry(
                text=text,
                author=record.get("author", ""),
                dense=embed_bow(toks, table),
                sparse=embed_sparse(toks, table.term_stats),
            )
        )
    return bank


def load_trivia(path, table: EmbeddingTable) -> list[TriviaItem]:
    bank: list[TriviaItem] = []
    for i, line in _open_lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or not all(parts):
            raise IngestionError(path, i, "expected question<TAB>answer")
        question, answer = parts
        vec = tfidf_average(tokenize(question + " " + answer), table, table.term_stats)
        if vec is None:
            continue
        bank.append(TriviaItem(question, answer, vec))
    return bank


def load_thesaurus(path) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for i, line in _open_lines(path):
        try:
            record = json.loads(line)
            word, synonyms = record["word"], record["synonyms"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise IngestionError(path, i, f"bad thesaurus record: {exc}") from exc
        out[word.lower()] = [s.lower() for s in synonyms]
    return out


def load_greetings(path) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for i, line in _open_lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or not all(parts):
            raise IngestionError(path, i, "expected language<TAB>phrase")
        out.setdefault(parts[0], []).append(parts[1])
    return out


def load_lines(path) -> list[str]:
    return [line for _, line in _open_lines(path)]


def load_wordlist(path) -> set[str]:
    return {line.strip().lower() for _, line in _open_lines(path)}
