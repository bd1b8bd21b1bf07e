"""Definition, fact-triple, and topic talkers."""
import numpy as np
import pytest

from talkerbox.config import EngineConfig
from talkerbox.embeddings import EmbeddingTable
from talkerbox.index import Paragraph, build_index
from talkerbox.knowledge import (
    DefinitionPage,
    DefinitionStore,
    Triple,
    TripleStore,
)
from talkerbox.state import DialogueState
from talkerbox.talkers.definition import (
    DefinitionTalker,
    TopicTalker,
    TripleTalker,
    attribute_words,
    is_definition_query,
    pluralize,
    suggest_topics,
)
from talkerbox.text import TermStats, tokenize

CONTINENT_OPENING = "A continent is a large area of the land on Earth that is joined together."


def toks(text):
    return tokenize(text)


def make_table(vectors, freqs=None, total_docs=10):
    dim = len(next(iter(vectors.values())))
    stats = TermStats()
    stats.total_docs = total_docs
    for word in vectors:
        stats.corpus_freq[word] = (freqs or {}).get(word, 5)
        stats.doc_count[word] = min(total_docs, stats.corpus_freq[word])
    table = EmbeddingTable(dim, stats)
    for word, vec in vectors.items():
        table.add(word, vec)
    return table


def pages_fixture():
    return DefinitionStore(
        [
            DefinitionPage(
                title="Continent",
                sentences=(
                    CONTINENT_OPENING,
                    "There are seven continents.",
                ),
            ),
            DefinitionPage(
                title="Ocean",
                sentences=("An ocean is a very large body of salt water.",),
            ),
        ]
    )


class TestIsDefinitionQuery:
    def test_tell_me_about_scores_point_eight(self):
        is_def, strength = is_definition_query(toks("Tell me about hamburger"))
        assert is_def
        assert strength == pytest.approx(0.8)

    def test_full_question_scores_one(self):
        is_def, strength = is_definition_query(toks("What is a continent"))
        assert is_def
        assert strength == pytest.approx(1.0)

    def test_plain_statement_rejected(self):
        is_def, strength = is_definition_query(toks("I like cheese"))
        assert not is_def
        assert strength == pytest.approx(0.2)

    def test_dangling_preposition_loses_final_credit(self):
        _, with_np = is_definition_query(toks("what is a continent"))
        _, dangling = is_definition_query(toks("what are you thinking about"))
        assert dangling == pytest.approx(with_np - 0.2)

    def test_bare_asking_phrase_still_counts(self):
        is_def, strength = is_definition_query(toks("tell me about"))
        assert is_def
        assert strength == pytest.approx(0.6)

    def test_empty_input(self):
        assert is_definition_query([]) == (False, 0.0)


class TestSuggestTopics:
    def link_table(self):
        return make_table(
            {
                "continent": [1.0, 0.0],
                "ocean": [0.9, 0.1],
                "mountain": [0.5, 0.5],
                "teapot": [-1.0, 0.0],
            }
        )

    def test_ranked_by_cosine_excluding_self(self):
        out = suggest_topics("Continent", self.link_table(), k=2)
        assert out == ["ocean", "mountain"]

    def test_unknown_title_gives_nothing(self):
        assert suggest_topics("Volcano", self.link_table(), k=3) == []

    def test_no_table_gives_nothing(self):
        assert suggest_topics("Continent", None, k=3) == []


class TestDefinitionTalker:
    def test_answers_known_title_with_opening_sentence(self):
        talker = DefinitionTalker(pages_fixture())
        cand = talker.propose(DialogueState(), toks("What is a continent"))
        assert cand.text == CONTINENT_OPENING
        assert cand.raw_confidence == pytest.approx(0.9)

    def test_ignores_non_definition_prompts(self):
        talker = DefinitionTalker(pages_fixture())
        cand = talker.propose(DialogueState(), toks("the weather is nice today"))
        assert cand.raw_confidence == 0.0

    def test_unknown_title_without_index_gives_nothing(self):
        talker = DefinitionTalker(pages_fixture())
        cand = talker.propose(DialogueState(), toks("What is a volcano"))
        assert cand.raw_confidence == 0.0

    def test_suggestions_are_appended_and_boost_followups(self):
        link_table = make_table(
            {"continent": [1.0, 0.0], "ocean": [0.9, 0.1], "teapot": [-1.0, 0.0]}
        )
        talker = DefinitionTalker(pages_fixture(), link_table=link_table, suggestions=2)
        state = DialogueState()
        first = talker.propose(state, toks("What is a continent"))
        assert first.text.startswith(CONTINENT_OPENING)
        assert "I can also tell you about" in first.text
        assert "Ocean" in first.text

        second = talker.propose(state, toks("ocean"))
        assert second.text.startswith("An ocean is a very large body of salt water.")
        assert second.raw_confidence == pytest.approx(0.95)

    def test_suggestion_confidence_beats_exact_match(self):
        link_table = make_table({"continent": [1.0, 0.0], "ocean": [0.9, 0.1]})
        talker = DefinitionTalker(pages_fixture(), link_table=link_table)
        state = DialogueState()
        exact = talker.propose(state, toks("What is a continent"))
        boosted = talker.propose(state, toks("tell me about the ocean"))
        assert boosted.raw_confidence > exact.raw_confidence

    def test_index_fallback_stays_below_exact_match(self, tmp_path):
        paragraphs = [
            Paragraph("continent", 0, "A continent is a large landmass.", "Continent"),
            Paragraph("ocean", 0, "An ocean is a large body of water.", "Ocean"),
            Paragraph("filler", 0, "Completely unrelated sentence here.", "Filler"),
        ]
        index = build_index(iter(paragraphs), tmp_path / "defidx")
        talker = DefinitionTalker(pages_fixture(), index=index)
        cand = talker.propose(DialogueState(), toks("What is a giant landmass"))
        assert cand.text == CONTINENT_OPENING
        assert 0.0 < cand.raw_confidence <= 0.6

    def test_vocabulary_covers_title_words(self):
        talker = DefinitionTalker(pages_fixture())
        assert {"continent", "ocean"} <= talker.vocabulary()


def einstein_store():
    store = TripleStore()
    store.add(Triple("Albert_Einstein", "spouse", "Mileva Marić"), rank=50.0)
    store.add(Triple("Albert_Einstein", "spouse", "Elsa Löwenthal"))
    store.add(Triple("Albert_Einstein", "birth year", "1879"))
    store.add(Triple("Albert_Einstein", "death year", "1955"))
    store.add(
        Triple("Albert_Einstein", "abstract", "Albert Einstein was a theoretical physicist.")
    )
    store.add(Triple("Lyon", "country", "France"), rank=9.0)
    return store


class TestAttributeHelpers:
    def test_attribute_words_split_underscores_and_camel_case(self):
        assert attribute_words("birth_year") == ["birth", "year"]
        assert attribute_words("birthYear") == ["birth", "year"]
        assert attribute_words("spouse") == ["spouse"]

    def test_pluralize(self):
        assert pluralize("spouse") == "spouses"
        assert pluralize("country") == "countries"
        assert pluralize("years") == "years"


class TestTripleTalker:
    def test_spouse_question_via_thesaurus(self):
        talker = TripleTalker(einstein_store(), thesaurus={"wife": ["spouse"]})
        cand = talker.propose(DialogueState(), toks("Who is Albert Einstein wife"))
        assert cand.text == "Albert Einstein spouses are Mileva Marić, Elsa Löwenthal"
        assert cand.raw_confidence >= 0.5

    def test_exact_attribute_word_match(self):
        talker = TripleTalker(einstein_store())
        cand = talker.propose(DialogueState(), toks("Albert Einstein birth year"))
        assert cand.text == "Albert Einstein birth year is 1879"
        assert cand.raw_confidence == pytest.approx(1.0)

    def test_when_question_prefers_dated_attribute_on_tie(self):
        store = TripleStore()
        store.add(Triple("Alan_Turing", "birth place", "Maida Vale"))
        store.add(Triple("Alan_Turing", "birth year", "1912"))
        talker = TripleTalker(store, thesaurus={"born": ["birth"]})
        cand = talker.propose(DialogueState(), toks("When was Alan Turing born"))
        assert cand.text == "Alan Turing birth year is 1912"

    def test_where_question_prefers_undated_attribute_on_tie(self):
        store = TripleStore()
        store.add(Triple("Alan_Turing", "birth place", "Maida Vale"))
        store.add(Triple("Alan_Turing", "birth year", "1912"))
        talker = TripleTalker(store, thesaurus={"born": ["birth"]})
        cand = talker.propose(DialogueState(), toks("Where was Alan Turing born"))
        assert cand.text == "Alan Turing birth place is Maida Vale"

    def test_embedding_neighborhood_match(self):
        table = make_table({"home": [1.0, 0.05], "residence": [1.0, 0.0]})
        store = TripleStore()
        store.add(Triple("Albert_Einstein", "residence", "Princeton"))
        talker = TripleTalker(store, table=table)
        cand = talker.propose(DialogueState(), toks("Where was Albert Einstein home"))
        assert cand.text == "Albert Einstein residence is Princeton"
        assert 0.0 < cand.raw_confidence <= 0.8

    def test_age_question_uses_birth_and_death_years(self):
        talker = TripleTalker(einstein_store())
        cand = talker.propose(DialogueState(), toks("How old was Albert Einstein"))
        assert cand.text == "Albert Einstein was 76 years old"
        assert cand.raw_confidence == pytest.approx(1.0)

    def test_age_question_for_living_resource_uses_reference_year(self):
        store = TripleStore()
        store.add(Triple("Jane_Doe", "birth year", "1990"))
        store.add(Triple("Jane_Doe", "abstract", "Jane Doe is a person."))
        talker = TripleTalker(store, reference_year=2017)
        cand = talker.propose(DialogueState(), toks("how old is Jane Doe"))
        assert cand.text == "Jane Doe is 27 years old"

    def test_unmatched_attribute_falls_back_to_abstract(self):
        talker = TripleTalker(einstein_store())
        cand = talker.propose(DialogueState(), toks("Albert Einstein shoe preference"))
        assert cand.text == "Albert Einstein was a theoretical physicist."
        assert cand.raw_confidence == pytest.approx(0.8)

    def test_no_resource_mention_gives_nothing(self):
        talker = TripleTalker(einstein_store())
        cand = talker.propose(DialogueState(), toks("what is the weather like"))
        assert cand.raw_confidence == 0.0

    def test_no_attributes_and_no_abstract_gives_nothing(self):
        store = TripleStore()
        store.add(Triple("Lyon", "country", "France"))
        talker = TripleTalker(store)
        cand = talker.propose(DialogueState(), toks("Lyon shoe preference"))
        assert cand.raw_confidence == 0.0

    def test_single_value_stays_singular(self):
        talker = TripleTalker(einstein_store())
        cand = talker.propose(DialogueState(), toks("what country is Lyon in"))
        assert cand.text == "Lyon country is France"

    def test_vocabulary_covers_resource_names(self):
        talker = TripleTalker(einstein_store())
        assert {"albert", "einstein", "lyon"} <= talker.vocabulary()


ARTICLE = (
    "Cyclone Monica struck the northern coast with winds of extreme strength. "
    "The storm weakened quickly after moving inland."
)


class TestTopicTalker:
    def table(self):
        return make_table(
            {
                "what": [1.0, 0.0, 0.0],
                "is": [0.0, 1.0, 0.0],
                "it": [0.0, 0.0, 1.0],
                "about": [0.5, 0.5, 0.0],
                "text": [0.3, 0.3, 0.4],
                "the": [0.2, 0.2, 0.2],
                "cyclone": [0.9, 0.1, 0.0],
                "monica": [0.8, 0.2, 0.0],
                "storm": [0.1, 0.0, 0.9],
                "when": [0.0, 0.0, 1.0],
                "arrive": [0.0, 0.0, 1.0],
            },
            total_docs=20,
        )

    def talker(self, index=None):
        return TopicTalker(
            questions=["what is it about", "what is the text about"],
            table=self.table(),
            index=index,
        )

    def test_exact_topic_question_fires(self):
        state = DialogueState()
        state.article = ARTICLE
        cand = self.talker().propose(state, toks("what is it about"))
        assert cand.raw_confidence == pytest.approx(0.9)
        assert cand.text

    def test_rotates_between_summary_variants(self):
        state = DialogueState()
        state.article = ARTICLE
        talker = self.talker()
        first = talker.propose(state, toks("what is it about"))
        second = talker.propose(state, toks("what is it about"))
        assert first.text != second.text

    def test_noun_phrase_variant_names_the_storm(self):
        state = DialogueState()
        state.article = ARTICLE
        talker = self.talker()
        texts = {talker.propose(state, toks("what is it about")).text for _ in range(3)}
        assert any("Cyclone Monica" in t for t in texts)

    def test_unrelated_question_gives_nothing(self):
        state = DialogueState()
        state.article = ARTICLE
        cand = self.talker().propose(state, toks("when did the storm arrive"))
        assert cand.raw_confidence == 0.0

    def test_no_article_gives_nothing(self):
        cand = self.talker().propose(DialogueState(), toks("what is it about"))
        assert cand.raw_confidence == 0.0
