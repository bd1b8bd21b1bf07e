import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from talkerbox.index import (
    Paragraph,
    ParagraphIndex,
    build_index,
    paragraph_grams,
)
from talkerbox.text import STOPWORDS

from .oracles import brute_force_paragraph_scores, count_gram_occurrences


FIXTURE = [
    Paragraph("doc_a", 0, "The war started in Europe.", "War"),
    Paragraph("doc_a", 1, "Cyclone Monica degraded rapidly over land.", "War"),
    Paragraph("doc_b", 0, "The war ended after many years of fighting.", "Aftermath"),
    Paragraph("doc_b", 1, "Peace treaties were signed in several cities.", "Aftermath"),
    Paragraph("doc_c", 0, "Monica is a common given name.", "Monica"),
]


@pytest.fixture()
def index(tmp_path):
    return build_index(iter(FIXTURE), tmp_path / "idx")


def oracle_scores(index, query):
    return brute_force_paragraph_scores(
        [p.text for p in FIXTURE],
        query,
        idf_of=index.gram_weight,
        occurrences_of=lambda g, text: count_gram_occurrences(
            g, text, paragraph_grams
        ),
        grams_of=paragraph_grams,
    )


def oracle_ranking(index, query, k):
    scores = oracle_scores(index, query)
    rows = [
        (p, s)
        for p, s in zip(FIXTURE, scores)
        if s > 0.0
    ]
    rows.sort(key=lambda row: (-row[1], (row[0].doc_id, row[0].para_id)))
    return rows[:k]


class TestBuild:
    def test_single_paragraph_postings(self, tmp_path):
        idx = build_index(
            iter([Paragraph("d", 0, "the war started", "T")]), tmp_path / "one"
        )
        expected = {"the", "war", "started", "the war", "war started"}
        assert {t for t in idx.terms()} == expected
        for term in expected:
            assert idx.postings(term) == [(0, 1)]

    def test_empty_stream_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            build_index(iter([]), tmp_path / "empty")

    def test_empty_text_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            build_index(iter([Paragraph("d", 0, "   ", "T")]), tmp_path / "blank")

    def test_rebuild_is_byte_identical(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        build_index(iter(FIXTURE), d1)
        build_index(iter(FIXTURE), d2)
        for name in ("paragraphs.jsonl", "postings.tsv", "terms.tsv", "meta.json"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_doc_counts_match_brute_force(self, index):
        for term in index.terms():
            expected = sum(
                1 for p in FIXTURE if term in set(paragraph_grams(p.text))
            )
            assert index.stats.doc_count[term] == expected, term

    def test_total_docs_is_paragraph_count(self, index):
        assert index.stats.total_docs == len(FIXTURE)


class TestQueryParagraphs:
    def test_unknown_terms_give_empty(self, index):
        assert index.query_paragraphs("zyzzyva qwerty", k=5) == []

    def test_verbatim_paragraph_ranks_first(self, index):
        query = "Cyclone Monica degraded rapidly over land."
        got = index.query_paragraphs(query, k=5)
        assert got[0][0].key == ("doc_a", 1)
        expected = oracle_ranking(index, query, 5)
        assert [(p.key, s) for p, s in got] == [(p.key, s) for p, s in expected]

    def test_scores_match_oracle_exactly(self, index):
        for query in [
            "the war",
            "Monica",
            "war started in Europe",
            "peace treaties signed",
            "the the the",
        ]:
            got = index.query_paragraphs(query, k=10)
            expected = oracle_ranking(index, query, 10)
            assert [(p.key, s) for p, s in got] == [
                (p.key, s) for p, s in expected
            ], query

    def test_zero_scores_excluded(self, index):
        got = index.query_paragraphs("war", k=100)
        assert all(s > 0 for _, s in got)
        assert {p.key for p, _ in got} == {("doc_a", 0), ("doc_b", 0)}

    def test_tie_broken_by_key_ascending(self, index):
        got = index.query_paragraphs("war", k=10)
        assert [p.key for p, _ in got] == [("doc_a", 0), ("doc_b", 0)]

    def test_k_validated(self, index):
        with pytest.raises(ValueError):
            index.query_paragraphs("war", k=0)

    def test_k_truncates(self, index):
        assert len(index.query_paragraphs("war", k=1)) == 1

    def test_duplicated_term_raises_score(self, tmp_path):
        base = [
            Paragraph("d", 0, "war happened", "T"),
            Paragraph("d", 1, "war war happened", "T"),
            Paragraph("d", 2, "peace returned", "T"),
        ]
        idx = build_index(iter(base), tmp_path / "dup")
        got = idx.query_paragraphs("war", k=2)
        by_key = {p.key: s for p, s in got}
        assert by_key[("d", 1)] > by_key[("d", 0)]

    @given(st.integers(min_value=1, max_value=6))
    @settings(max_examples=20)
    def test_prefix_of_ranking_is_stable_under_k(self, k):
        # build once per example is wasteful; reuse a module-level build
        idx = _SHARED["index"]
        full = idx.query_paragraphs("the war started", k=10)
        assert idx.query_paragraphs("the war started", k=k) == full[:k]

    def test_stopword_unigram_weight_capped(self, index):
        assert index.gram_weight("the") <= 0.1
        assert "the" in STOPWORDS

    def test_stopword_bigram_not_capped(self, index):
        # "the war" is a bigram; the cap applies to stopword unigrams only
        assert index.gram_weight("the war") > 0.1


class TestQueryDocument:
    def test_no_match_is_absent(self, index):
        assert index.query_document("zyzzyva") is None

    def test_returns_whole_document_in_order(self, index):
        got = index.query_document("Cyclone Monica degraded")
        assert got == (
            "The war started in Europe.\n\n"
            "Cyclone Monica degraded rapidly over land."
        )

    def test_higher_idf_doc_wins(self, index):
        # "treaties" appears only in doc_b; "war" is spread across two docs.
        got = index.query_document("treaties")
        assert got.startswith("The war ended")


class TestPersistence:
    def test_reload_gives_identical_rankings(self, tmp_path):
        d = tmp_path / "idx"
        built = build_index(iter(FIXTURE), d)
        loaded = ParagraphIndex(d)
        for query in ["the war", "Monica", "peace treaties were signed"]:
            a = [(p.key, s) for p, s in built.query_paragraphs(query, k=5)]
            b = [(p.key, s) for p, s in loaded.query_paragraphs(query, k=5)]
            assert a == b

    def test_paragraph_payloads_survive(self, tmp_path):
        d = tmp_path / "idx"
        build_index(iter(FIXTURE), d)
        loaded = ParagraphIndex(d)
        for i, p in enumerate(FIXTURE):
            got = loaded.paragraph(i)
            assert (got.doc_id, got.para_id, got.text, got.doc_title) == (
                p.doc_id,
                p.para_id,
                p.text,
                p.doc_title,
            )

    def test_meta_records_version(self, tmp_path):
        d = tmp_path / "idx"
        build_index(iter(FIXTURE), d)
        meta = json.loads((d / "meta.json").read_text())
        assert meta["version"] == 1
        assert meta["paragraphs"] == len(FIXTURE)


_SHARED = {}


@pytest.fixture(autouse=True, scope="module")
def _shared_index(tmp_path_factory):
    d = tmp_path_factory.mktemp("shared") / "idx"
    _SHARED["index"] = build_index(iter(FIXTURE), d)
    yield
    _SHARED.clear()
