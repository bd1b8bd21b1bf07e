"""Question rephrasing, excerpt assembly, and the extractive QA talker."""
import random

import pytest

from talkerbox.config import EngineConfig
from talkerbox.embeddings import EmbeddingTable
from talkerbox.index import Paragraph, build_index
from talkerbox.state import DialogueState
from talkerbox.talkers.qa import (
    HEDGES,
    WikiQaTalker,
    build_excerpts,
    past_tense,
    rephrase_question,
    third_singular,
)
from talkerbox.text import TermStats, idf_weight, tokenize

from .oracles import brute_force_paragraph_scores  # noqa: F401  (shared import path check)


def toks(text):
    return tokenize(text)


def words_of(tokens):
    return " ".join(t.surface for t in tokens)


class TestInflection:
    def test_regular_past(self):
        assert past_tense("start") == "started"
        assert past_tense("move") == "moved"
        assert past_tense("study") == "studied"
        assert past_tense("stop") == "stopped"

    def test_irregular_past(self):
        assert past_tense("strike") == "struck"
        assert past_tense("go") == "went"
        assert past_tense("win") == "won"

    def test_third_singular(self):
        assert third_singular("blame") == "blames"
        assert third_singular("study") == "studies"
        assert third_singular("teach") == "teaches"
        assert third_singular("go") == "goes"


# Hand-written expectations; each row is (question, rephrased declarative).
REPHRASE_CASES = [
    ("when did the war start", "when the war started"),
    ("who does the committee blame", "who the committee blames"),
    ("where did the empire fall", "where the empire fell"),
    ("what does the committee study", "what the committee studies"),
    ("when did the city grow", "when the city grew"),
    ("what did the author write", "what the author wrote"),
    ("when did the show begin", "when the show began"),
    ("where does the family live", "where the family lives"),
    ("who does the teacher teach", "who the teacher teaches"),
    ("what did the team win", "what the team won"),
    ("when did the storm strike", "when the storm struck"),
    ("when did the couple marry", "when the couple married"),
    ("what does the law cause", "what the law causes"),
    ("when did the talks end", "when the talks ended"),
    ("who did the king serve", "who the king served"),
    ("what did the lab discover", "what the lab discovered"),
    ("where did the troops go", "where the troops went"),
    ("what does the machine make", "what the machine makes"),
    ("when did the empire form", "when the empire formed"),
    ("how did the story end", "how the story ended"),
]


class TestRephraseQuestion:
    def test_the_canonical_example(self):
        out = rephrase_question(toks("when did the war start"))
        assert words_of(out) == "when the war started"

    @pytest.mark.parametrize("question,expected", REPHRASE_CASES)
    def test_did_does_grid(self, question, expected):
        assert words_of(rephrase_question(toks(question))) == expected

    def test_keep_auxiliaries_pass_through(self):
        text = "when was the war over"
        assert words_of(rephrase_question(toks(text))) == text

    def test_non_questions_pass_through(self):
        text = "the war started in Europe"
        assert words_of(rephrase_question(toks(text))) == text

    def test_short_inputs_pass_through(self):
        text = "when did it"
        assert words_of(rephrase_question(toks(text))) == text

    def test_unknown_verb_falls_back_to_last_word(self):
        out = rephrase_question(toks("what did the ceremony commemorate"))
        assert words_of(out) == "what the ceremony commemorated"


class TestBuildExcerpts:
    def test_article_paragraphs_come_first_deduplicated(self, tmp_path):
        paragraphs = [
            Paragraph("monica", 0, "Monica was a strong cyclone.", "Cyclone Monica"),
            Paragraph("monica", 1, "The storm later weakened.", "Cyclone Monica"),
        ]
        index = build_index(iter(paragraphs), tmp_path / "exidx")
        article = "Monica was a strong cyclone.\n\nIt formed over warm water."
        got = build_excerpts(article, index)
        texts = [e.text for e in got.excerpts]
        assert texts == [
            "Monica was a strong cyclone.",
            "It formed over warm water.",
            "The storm later weakened.",
        ]
        assert [e.source for e in got.excerpts] == ["article", "article", "retrieved"]

    def test_no_index_keeps_article_only(self):
        got = build_excerpts("One paragraph only.", None)
        assert [e.text for e in got.excerpts] == ["One paragraph only."]

    def test_empty_article_no_index(self):
        assert build_excerpts("", None).excerpts == []


MONICA_PARAGRAPHS = [
    Paragraph(
        "cyclone_monica",
        0,
        "Monica struck Australia as a category five storm with severe cyclone "
        "impact across the continent. Forecasters tracked the system for many days.",
        "Cyclone Monica",
    ),
    Paragraph(
        "cyclone_monica",
        1,
        "The cyclone degraded rapidly after it moved over land.",
        "Cyclone Monica",
    ),
    Paragraph(
        "continent",
        0,
        "A continent is one of several very large landmasses.",
        "Continent",
    ),
    Paragraph(
        "filler",
        0,
        "Gardening is a relaxing hobby for many people.",
        "Filler",
    ),
]


def monica_index(tmp_path):
    return build_index(iter(MONICA_PARAGRAPHS), tmp_path / "qaidx")


class TestWikiQaTalker:
    def test_monica_question_answers_australia(self, tmp_path):
        talker = WikiQaTalker(monica_index(tmp_path))
        cand = talker.propose(
            DialogueState(), toks("What continent did cyclone Monica impact?")
        )
        assert cand.raw_confidence > 0.0
        assert "Australia" in cand.text

    def test_reply_is_a_hedged_template(self, tmp_path):
        talker = WikiQaTalker(monica_index(tmp_path))
        cand = talker.propose(
            DialogueState(), toks("What continent did cyclone Monica impact?")
        )
        assert any(
            cand.text.startswith(prefix) and cand.text.endswith(suffix)
            for prefix, suffix in (t.split("{}") for t in HEDGES)
        )

    def test_span_words_are_contiguous_in_source(self, tmp_path):
        talker = WikiQaTalker(monica_index(tmp_path))
        cand = talker.propose(
            DialogueState(), toks("What continent did cyclone Monica impact?")
        )
        for template in HEDGES:
            prefix, suffix = template.split("{}")
            if cand.text.startswith(prefix) and cand.text.endswith(suffix):
                span = cand.text[len(prefix) : len(cand.text) - len(suffix)]
                break
        else:
            pytest.fail(f"reply {cand.text!r} does not match any hedge template")
        source_words = [
            t.surface
            for t in tokenize(MONICA_PARAGRAPHS[0].text + " " + MONICA_PARAGRAPHS[1].text)
            if t.is_word
        ]
        span_words = [t.surface for t in tokenize(span) if t.is_word]
        joined_source = " ".join(source_words)
        assert " ".join(span_words) in joined_source

    def test_non_question_gives_nothing(self, tmp_path):
        talker = WikiQaTalker(monica_index(tmp_path))
        cand = talker.propose(DialogueState(), toks("tell me about the storm"))
        assert cand.raw_confidence == 0.0

    def test_trailing_question_mark_counts_as_question(self, tmp_path):
        talker = WikiQaTalker(monica_index(tmp_path))
        cand = talker.propose(DialogueState(), toks("the storm struck which continent?"))
        assert cand.raw_confidence >= 0.0  # still routed through QA, no crash

    def test_question_without_content_words_gives_nothing(self, tmp_path):
        talker = WikiQaTalker(monica_index(tmp_path))
        cand = talker.propose(DialogueState(), toks("what is it?"))
        assert cand.raw_confidence == 0.0

    def test_passage_cap_respected(self, tmp_path):
        paragraphs = [
            Paragraph("doc", i, f"The cyclone reached point {i} of the coast.", "Doc")
            for i in range(8)
        ]
        index = build_index(iter(paragraphs), tmp_path / "capidx")
        config = EngineConfig(qa_passages=3, qa_total_cap=4)
        talker = WikiQaTalker(index, config=config)
        state = DialogueState()
        state.article = "\n\n".join(
            f"The cyclone crossed region {i} slowly." for i in range(5)
        )
        talker.propose(state, toks("where did the cyclone go"))
        assert talker.last_processed_count <= 4

    def test_low_idf_questions_are_penalized_tenfold(self, tmp_path):
        common = [
            Paragraph("doc", i, "People like things and stuff generally.", "Doc")
            for i in range(3)
        ] + [
            Paragraph("doc", 3, "People like things in most towns.", "Doc"),
        ]
        index = build_index(iter(common), tmp_path / "lowidf")
        talker = WikiQaTalker(index)
        floor = talker.config.idf_floor
        content = {"people", "like", "things"}
        max_idf = max(idf_weight(w, index.stats) for w in content)
        assert max_idf < floor, "fixture must keep every content word below the floor"
        cand = talker.propose(DialogueState(), toks("what do people like things?"))
        if cand.raw_confidence > 0:
            # Rebuild the unpenalized score: best passage is fully determined
            # here, so the candidate must carry exactly a tenth of it.
            assert cand.raw_confidence < 0.1

    def test_determinism_under_fixed_seed(self, tmp_path):
        index = monica_index(tmp_path)
        replies = []
        for _ in range(2):
            talker = WikiQaTalker(index)
            talker.attach_rng(random.Random("fixed"))
            cand = talker.propose(
                DialogueState(), toks("What continent did cyclone Monica impact?")
            )
            replies.append(cand.text)
        assert replies[0] == replies[1]

    def test_hedge_templates_vary_across_seeds(self, tmp_path):
        index = monica_index(tmp_path)
        seen = set()
        for seed in range(10):
            talker = WikiQaTalker(index)
            talker.attach_rng(random.Random(seed))
            cand = talker.propose(
                DialogueState(), toks("What continent did cyclone Monica impact?")
            )
            seen.add(cand.text)
        assert len(seen) >= 2

    def test_no_index_no_table_gives_nothing(self):
        talker = WikiQaTalker(None)
        cand = talker.propose(DialogueState(), toks("when did the war start"))
        assert cand.raw_confidence == 0.0

    def test_on_topic_article_contributes_excerpts(self, tmp_path):
        # The article mentions the answer; with no index hits for the query
        # terms, only the on-topic excerpt path can produce it.
        vectors = {
            "monica": [1.0, 0.0],
            "cyclone": [0.9, 0.1],
            "continent": [0.8, 0.2],
            "struck": [0.7, 0.3],
            "australia": [0.6, 0.4],
        }
        stats = TermStats()
        stats.total_docs = 10
        for w in vectors:
            stats.corpus_freq[w] = 5
            stats.doc_count[w] = 2
        table = EmbeddingTable(2, stats)
        for w, v in vectors.items():
            table.add(w, v)
        talker = WikiQaTalker(None, table=table)
        state = DialogueState()
        state.article = "Monica struck Australia with great force."
        cand = talker.propose(state, toks("what continent did cyclone Monica strike"))
        assert "Australia" in cand.text
        assert cand.raw_confidence > 0.0
