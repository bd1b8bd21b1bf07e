"""Assembly of a working engine from the bundled data files.

Every front end (the REPL and the HTTP service) builds its engine through
:func:`make_engine`, so there is exactly one wiring of talkers to data and
the two cannot drift apart.  All file locations can be overridden per name
through ``EngineConfig.resources``; anything not overridden comes from the
``talkerbox/resources`` directory installed with the package.
"""
from __future__ import annotations

import atexit
import os
import re
import tempfile
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path

from .config import EngineConfig
from .embeddings import EmbeddingTable
from .engine import CalibrationProfile, Engine
from .index import Paragraph, ParagraphIndex, build_index
from .knowledge import (
    DefinitionStore,
    DialoguePair,
    IngestionError,
    QuoteEntry,
    TripleStore,
    TriviaItem,
    load_definitions,
    load_greetings,
    load_lines,
    load_pairs,
    load_quotes,
    load_thesaurus,
    load_triples,
    load_trivia,
    load_wordlist,
)
from .safety import load_model, predict_pair
from .text import TermStats, tokenize
from .talkers.base import Talker
from .talkers.chitchat import (
    KnnTalker,
    PatternTalker,
    QuoteTalker,
    TriviaTalker,
    parse_pattern_rules,
)
from .talkers.definition import DefinitionTalker, TopicTalker, TripleTalker
from .talkers.misc import (
    AbacusTalker,
    CharNgramClassifier,
    FactTalker,
    GimmickTalker,
)
from .talkers.qa import WikiQaTalker

import json

RESOURCE_FILES = {
    "definitions": "definitions.jsonl",
    "triples": "triples.tsv",
    "ranks": "ranks.tsv",
    "patterns": "patterns.jsonl",
    "persona": "persona.json",
    "wordlog": "wordlog.json",
    "quotes": "quotes.jsonl",
    "trivia": "trivia.tsv",
    "pairs_chat": "pairs_chat.jsonl",
    "pairs_forum": "pairs_forum.jsonl",
    "greetings": "greetings.tsv",
    "langid": "langid.tsv",
    "blacklist": "blacklist.txt",
    "topic_questions": "topic_questions.txt",
    "thesaurus": "thesaurus.jsonl",
    "term_stats": "term_stats.json",
    "embeddings": "embeddings.txt",
    "links_embeddings": "links_embeddings.txt",
    "lexicon": "lexicon.txt",
    "calibration": "calibration.jsonl",
    "calibration_scales": "calibration_scales.json",
    "toxicity": "toxicity.tsv",
}

# Optional entries with no bundled default: "toxicity_model" (trained filter
# applied while loading dialogue pairs) and "index_dir" (persistent location
# for the paragraph index instead of a per-process scratch directory).


def default_resource_dir() -> Path:
    return Path(importlib_resources.files("talkerbox") / "resources")


def resource_path(name: str, config: EngineConfig | None = None) -> Path:
    """Resolve a named data file: explicit override first, bundle second."""
    overrides = config.resources if config is not None else {}
    if name in overrides:
        return Path(overrides[name])
    if "resource_dir" in overrides:
        base = Path(overrides["resource_dir"])
    else:
        base = default_resource_dir()
    try:
        return base / RESOURCE_FILES[name]
    except KeyError:
        raise KeyError(f"unknown resource name: {name!r}") from None


def _slug(title: str) -> str:
    return re.sub(r"\W+", "_", title.lower()).strip("_")


def definition_paragraphs(pages: DefinitionStore):
    """One index paragraph per definition sentence, grouped by page."""
    for page in pages:
        doc_id = _slug(page.title)
        for i, sentence in enumerate(page.sentences):
            yield Paragraph(doc_id=doc_id, para_id=i, text=sentence, doc_title=page.title)


_SCRATCH_DIRS: list[tempfile.TemporaryDirectory] = []


def _scratch_dir() -> str:
    scratch = tempfile.TemporaryDirectory(prefix="talkerbox-index-")
    _SCRATCH_DIRS.append(scratch)
    return scratch.name


@atexit.register
def _cleanup_scratch() -> None:
    for scratch in _SCRATCH_DIRS:
        scratch.cleanup()
    _SCRATCH_DIRS.clear()


@dataclass
class Resources:
    """Everything the talkers read, loaded once and shared between engines."""

    table: EmbeddingTable
    stats: TermStats
    link_table: EmbeddingTable | None
    index: ParagraphIndex
    pages: DefinitionStore
    triples: TripleStore
    thesaurus: dict[str, list[str]]
    chat_pairs: list[DialoguePair]
    forum_pairs: list[DialoguePair]
    quotes: list[QuoteEntry]
    trivia: list[TriviaItem]
    pattern_rules: list
    persona: dict[str, list[str]]
    wordlog: dict[str, int]
    greetings: dict[str, list[str]]
    classifier: CharNgramClassifier
    topic_questions: list[str]
    blacklist: set[str] = field(default_factory=set)
    lexicon: set[str] = field(default_factory=set)


def load_resources(config: EngineConfig | None = None) -> Resources:
    """Load every bundled (or overridden) data file into memory.

    The paragraph index is built from the definition pages into `index_dir`
    when that override is given (and reused if already present), otherwise
    into a scratch directory that lives for the rest of the process.
    """
    config = config or EngineConfig()
    stats = TermStats.load(resource_path("term_stats", config))
    table = EmbeddingTable.load(resource_path("embeddings", config), term_stats=stats)
    link_table = EmbeddingTable.load(resource_path("links_embeddings", config))
    pages = load_definitions(resource_path("definitions", config))

    index_dir = config.resources.get("index_dir")
    if index_dir:
        marker = Path(index_dir) / "meta.json"
        if marker.exists():
            index = ParagraphIndex(index_dir)
        else:
            index = build_index(definition_paragraphs(pages), index_dir)
    else:
        index = build_index(definition_paragraphs(pages), _scratch_dir())

    tox = None
    model_path = config.resources.get("toxicity_model")
    if model_path:
        model = load_model(model_path)
        tox = lambda a, b: predict_pair(model, a, b, table)  # noqa: E731

    with open(resource_path("persona", config), encoding="utf-8") as fh:
        persona = json.load(fh)
    with open(resource_path("wordlog", config), encoding="utf-8") as fh:
        wordlog = {k: int(v) for k, v in json.load(fh).items()}

    pattern_rows = []
    with open(resource_path("patterns", config), encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                pattern_rows.append(json.loads(line))

    classifier = CharNgramClassifier()
    samples = []
    with open(resource_path("langid", config), encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                lang, sentence = line.rstrip("\n").split("\t")
                samples.append((lang, sentence))
    classifier.train(samples)

    return Resources(
        table=table,
        stats=stats,
        link_table=link_table,
        index=index,
        pages=pages,
        triples=load_triples(resource_path("triples", config), resource_path("ranks", config)),
        thesaurus=load_thesaurus(resource_path("thesaurus", config)),
        chat_pairs=load_pairs(resource_path("pairs_chat", config), table, tox=tox),
        forum_pairs=load_pairs(resource_path("pairs_forum", config), table, tox=tox),
        quotes=load_quotes(resource_path("quotes", config), table),
        trivia=load_trivia(resource_path("trivia", config), table),
        pattern_rules=parse_pattern_rules(pattern_rows),
        persona=persona,
        wordlog=wordlog,
        greetings=load_greetings(resource_path("greetings", config)),
        classifier=classifier,
        topic_questions=load_lines(resource_path("topic_questions", config)),
        blacklist=load_wordlist(resource_path("blacklist", config)),
        lexicon=load_wordlist(resource_path("lexicon", config)),
    )


def build_talkers(res: Resources, config: EngineConfig) -> list[Talker]:
    """Fresh talker instances over shared data banks, in priority order."""
    return [
        WikiQaTalker(res.index, res.table, config),
        DefinitionTalker(res.pages, res.index, res.link_table, 3, config),
        FactTalker(res.pages, res.index),
        AbacusTalker(),
        TripleTalker(res.triples, res.table, res.thesaurus, config),
        TopicTalker(res.topic_questions, res.table, res.index, config),
        KnnTalker(res.forum_pairs, res.table, talker_id="knn_forum"),
        KnnTalker(res.chat_pairs, res.table, talker_id="knn_chat"),
        QuoteTalker(res.quotes, res.table, config),
        PatternTalker(res.pattern_rules, res.persona, res.wordlog),
        TriviaTalker(res.trivia, res.table),
        GimmickTalker(config.gimmick_responses, res.greetings, res.classifier),
    ]


def make_engine(
    config: EngineConfig | None = None,
    res: Resources | None = None,
) -> Engine:
    """The one engine-construction path shared by every front end."""
    config = config or EngineConfig()
    if res is None:
        res = load_resources(config)
    profile = None
    if config.calibration_profile:
        profile = CalibrationProfile.load(config.calibration_profile)
    else:
        bundled_scales = resource_path("calibration_scales", config)
        if bundled_scales.exists():
            profile = CalibrationProfile.load(bundled_scales)
    return Engine(
        build_talkers(res, config),
        config=config,
        blacklist=res.blacklist,
        spell_lexicon=res.lexicon,
        profile=profile,
    )


def load_calibration_corpus(path) -> list[dict]:
    """Rows of {article, prompt, winner} used by the calibrate builder."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestionError(path, line_no, f"invalid JSON: {exc.msg}") from exc
            missing = {"article", "prompt", "winner"} - set(row)
            if missing:
                raise IngestionError(path, line_no, f"missing keys: {sorted(missing)}")
            rows.append(row)
    return rows


def link_pairs(pages: DefinitionStore) -> list[tuple[str, str]]:
    """(title, linked title) tuples for link-embedding training; multi-word
    titles are joined with underscores so each title is a single token.
    """
    pairs = []
    for page in pages:
        source = page.title.lower().replace(" ", "_")
        for linked in page.links:
            pairs.append((source, linked.lower().replace(" ", "_")))
    return pairs
