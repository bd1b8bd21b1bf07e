"""k-NN pairs, quotes, the pattern engine, and trivia."""
import random

import numpy as np
import pytest

from talkerbox.config import EngineConfig
from talkerbox.embeddings import EmbeddingTable, embed_bow, embed_sparse
from talkerbox.knowledge import DialoguePair, QuoteEntry, TriviaItem
from talkerbox.state import DialogueState
from talkerbox.talkers.chitchat import (
    KnnTalker,
    PatternRule,
    PatternTalker,
    QuoteTalker,
    TriviaTalker,
    fill_template,
    match_pattern,
    parse_pattern_rules,
    wildcard_cost,
)
from talkerbox.text import TermStats, tokenize


def toks(text):
    return tokenize(text)


def make_table(vectors, freqs=None, total_docs=10):
    dim = len(next(iter(vectors.values())))
    stats = TermStats()
    stats.total_docs = total_docs
    for word in vectors:
        stats.corpus_freq[word] = (freqs or {}).get(word, 5)
        stats.doc_count[word] = min(total_docs, max(1, stats.corpus_freq[word] // 2))
    table = EmbeddingTable(dim, stats)
    for word, vec in vectors.items():
        table.add(word, vec)
    return table


def chat_table():
    return make_table(
        {
            "hello": [1.0, 0.0, 0.0],
            "hi": [0.95, 0.05, 0.0],
            "weather": [0.0, 1.0, 0.0],
            "rain": [0.05, 0.95, 0.0],
            "luck": [0.0, 0.0, 1.0],
            "lucky": [0.05, 0.0, 0.95],
            "feel": [0.2, 0.2, 0.6],
            "i": [0.3, 0.3, 0.3],
        },
        freqs={"i": 400, "hello": 30, "hi": 30, "weather": 9, "rain": 9, "luck": 3, "lucky": 3, "feel": 20},
    )


def pair(table, a, b):
    return DialoguePair(a, b, embed_bow(toks(a), table))


class TestKnnTalker:
    def test_identical_prompt_returns_its_stored_response(self):
        table = chat_table()
        bank = [
            pair(table, "hello", "hi there"),
            pair(table, "weather rain", "take an umbrella"),
        ]
        talker = KnnTalker(bank, table, talker_id="knn_forum")
        cand = talker.propose(DialogueState(), toks("weather rain"))
        assert cand.text == "take an umbrella"
        assert cand.raw_confidence == pytest.approx(0.4, abs=1e-9)

    def test_nearby_prompt_picks_the_closest_pair(self):
        table = chat_table()
        bank = [
            pair(table, "hello", "hi there"),
            pair(table, "weather rain", "take an umbrella"),
        ]
        talker = KnnTalker(bank, table)
        cand = talker.propose(DialogueState(), toks("hi"))
        assert cand.text == "hi there"

    def test_reply_is_always_a_stored_response(self):
        table = chat_table()
        bank = [
            pair(table, "hello", "hi there"),
            pair(table, "weather rain", "take an umbrella"),
            pair(table, "luck", "make your own luck"),
        ]
        talker = KnnTalker(bank, table)
        stored = {p.b_text for p in bank}
        for prompt in ["hello", "rain weather", "i feel lucky", "hi hello"]:
            cand = talker.propose(DialogueState(), toks(prompt))
            if cand.raw_confidence > 0:
                assert cand.text in stored

    def test_oov_prompt_gives_nothing(self):
        table = chat_table()
        talker = KnnTalker([pair(table, "hello", "hi there")], table)
        cand = talker.propose(DialogueState(), toks("zzz qqq"))
        assert cand.raw_confidence == 0.0

    def test_empty_bank_gives_nothing(self):
        table = chat_table()
        talker = KnnTalker([], table)
        assert talker.propose(DialogueState(), toks("hello")).raw_confidence == 0.0

    def test_base_confidence_scales_output(self):
        table = chat_table()
        bank = [pair(table, "hello", "hi there")]
        low = KnnTalker(bank, table, base_confidence=0.2)
        high = KnnTalker(bank, table, base_confidence=0.4)
        q = toks("hello")
        assert high.propose(DialogueState(), q).raw_confidence == pytest.approx(
            2 * low.propose(DialogueState(), q).raw_confidence
        )


def quote_entry(table, text, author="Anon"):
    tokens = toks(text)
    return QuoteEntry(
        text=text,
        author=author,
        dense=embed_bow(tokens, table),
        sparse=embed_sparse(tokens, table.term_stats),
    )


def quote_bank(table):
    return [
        quote_entry(table, "Luck, that's when preparation and opportunity meet"),
        quote_entry(table, "Hello is the first word of every friendship"),
        quote_entry(table, "Weather forecasts are poetry with numbers"),
    ]


def quote_table():
    return make_table(
        {
            "luck": [0.0, 0.0, 1.0],
            "lucky": [0.05, 0.0, 0.95],
            "feel": [0.1, 0.1, 0.8],
            "i": [0.3, 0.3, 0.3],
            "preparation": [0.0, 0.2, 0.8],
            "opportunity": [0.0, 0.3, 0.7],
            "meet": [0.2, 0.2, 0.6],
            "hello": [1.0, 0.0, 0.0],
            "first": [0.8, 0.1, 0.1],
            "word": [0.7, 0.2, 0.1],
            "friendship": [0.9, 0.1, 0.0],
            "weather": [0.0, 1.0, 0.0],
            "forecasts": [0.0, 0.9, 0.1],
            "poetry": [0.1, 0.8, 0.1],
            "numbers": [0.1, 0.7, 0.2],
        },
        freqs={"i": 400, "feel": 60, "meet": 20, "luck": 3, "lucky": 3, "preparation": 2},
        total_docs=100,
    )


class TestQuoteTalker:
    def make(self, **overrides):
        table = quote_table()
        config = EngineConfig(**overrides)
        talker = QuoteTalker(quote_bank(table), table, config)
        talker.attach_rng(random.Random(0))
        return talker, table

    def test_feeling_lucky_ranks_the_luck_quote_first(self):
        talker, _ = self.make()
        cand = talker.propose(DialogueState(), toks("I feel lucky"))
        assert cand.raw_confidence > 0.0
        assert talker.last_ranking[0][1] == "Luck, that's when preparation and opportunity meet"

    def test_reply_comes_from_the_top_pool(self):
        talker, _ = self.make()
        cand = talker.propose(DialogueState(), toks("I feel lucky"))
        pool_texts = [text for _, text in talker.last_ranking[:5]]
        assert cand.text in pool_texts

    def test_echoed_quote_scores_below_itself_unechoed(self):
        table = quote_table()
        config = EngineConfig()
        echo_text = "Luck, that's when preparation and opportunity meet"
        bank = [quote_entry(table, echo_text)]
        talker = QuoteTalker(bank, table, config)
        talker.attach_rng(random.Random(0))
        echoed = talker.propose(DialogueState(), toks(echo_text))
        fresh = talker.propose(DialogueState(), toks("I feel lucky"))
        assert 0 < echoed.raw_confidence < fresh.raw_confidence

    def test_echo_never_wins_when_alternatives_exist(self):
        talker, _ = self.make()
        echo_text = "Luck, that's when preparation and opportunity meet"
        for seed in range(5):
            talker.attach_rng(random.Random(seed))
            cand = talker.propose(DialogueState(), toks(echo_text))
            assert cand.text != echo_text

    def test_empty_bank_gives_nothing(self):
        table = quote_table()
        talker = QuoteTalker([], table, EngineConfig())
        assert talker.propose(DialogueState(), toks("I feel lucky")).raw_confidence == 0.0

    def test_context_carries_topic_across_turns(self):
        luck_text = "Luck, that's when preparation and opportunity meet"

        def luck_score(ranking):
            return next(score for score, text in ranking if text == luck_text)

        with_context, _ = self.make()
        state = DialogueState()
        with_context.propose(state, toks("I feel lucky"))
        with_context.propose(state, toks("i i"))
        carried = luck_score(with_context.last_ranking)

        fresh, _ = self.make()
        fresh.propose(DialogueState(), toks("i i"))
        cold = luck_score(fresh.last_ranking)
        assert carried > cold

    def test_rare_query_words_are_remembered(self):
        talker, table = self.make()
        state = DialogueState()
        talker.propose(state, toks("preparation meet"))
        ctx = state.slot("quotes")["ctx"]
        assert "preparation" in ctx.rare_words
        assert "meet" not in ctx.rare_words

    def test_all_common_words_penalized(self):
        table = quote_table()
        config = EngineConfig()
        bank = [quote_entry(table, "Hello is the first word of every friendship")]
        talker = QuoteTalker(bank, table, config)
        talker.attach_rng(random.Random(0))
        # "i" occurs everywhere in the fixture corpus; its idf sits below the
        # floor, so a query of only such words takes the common-word penalty.
        common = talker.propose(DialogueState(), toks("i i i"))
        talker2 = QuoteTalker(bank, table, config)
        talker2.attach_rng(random.Random(0))
        specific = talker2.propose(DialogueState(), toks("hello friendship"))
        if common.raw_confidence > 0:
            assert common.raw_confidence < specific.raw_confidence

    def test_mostly_oov_quote_penalized(self):
        table = quote_table()
        in_vocab = quote_entry(table, "hello friendship word")
        oov = QuoteEntry(
            text="zzz qqq xxx hello",
            author="Anon",
            dense=in_vocab.dense,
            sparse=in_vocab.sparse,
        )
        talker = QuoteTalker([in_vocab, oov], table, EngineConfig())
        talker.attach_rng(random.Random(0))
        talker.propose(DialogueState(), toks("hello friendship"))
        ranking = dict((text, score) for score, text in talker.last_ranking)
        # Same underlying vectors, so only the out-of-vocabulary penalty
        # separates the two scores.
        assert ranking["zzz qqq xxx hello"] == pytest.approx(
            0.5 * ranking["hello friendship word"]
        )

    def test_determinism_under_fixed_seed(self):
        replies = []
        for _ in range(2):
            talker, _ = self.make()
            state = DialogueState()
            texts = [
                talker.propose(state, toks(prompt)).text
                for prompt in ["I feel lucky", "weather poetry", "hello friendship"]
            ]
            replies.append(texts)
        assert replies[0] == replies[1]


class TestPatternMatching:
    def test_exact_rule_matches_with_no_captures(self):
        assert match_pattern(("hello",), ["hello"]) == []

    def test_wildcard_captures_the_tail(self):
        got = match_pattern(("hello", "*"), ["hello", "there", "friend"])
        assert got == ["there friend"]

    def test_wildcard_requires_at_least_one_token(self):
        assert match_pattern(("hello", "*"), ["hello"]) is None

    def test_inner_wildcard(self):
        got = match_pattern(("my", "*", "is", "*"), ["my", "name", "is", "kay"])
        assert got == ["name", "kay"]

    def test_mismatch_returns_none(self):
        assert match_pattern(("hello", "*"), ["goodbye", "world"]) is None

    def test_wildcard_cost_counts_consumed_tokens(self):
        words = ["hello", "there", "friend"]
        assert wildcard_cost(("hello", "*"), words) == 2
        assert wildcard_cost(("hello", "there", "friend"), words) == 0

    def test_fill_template_substitutes_captures_and_persona(self):
        out = fill_template(
            "Nice to meet you, {0}. My name is {name}.",
            ["kay"],
            {"name": "Robo"},
        )
        assert out == "Nice to meet you, kay. My name is Robo."

    def test_fill_template_leaves_unknown_slots(self):
        assert fill_template("I am {unknown}.", [], {}) == "I am {unknown}."

    def test_parse_rules_normalizes_case(self):
        rules = parse_pattern_rules([{"pattern": "HELLO *", "template": "Hi!"}])
        assert rules[0].pattern == ("hello", "*")

    def test_empty_pattern_rejected(self):
        with pytest.raises(ValueError):
            PatternRule(pattern=(), template="x")


RULES = parse_pattern_rules(
    [
        {"pattern": "hello", "template": "Hello! My name is {name}."},
        {"pattern": "hello *", "template": "Hi, {0}!"},
        {"pattern": "what is your name", "template": "I am {name}."},
        {"pattern": "i like *", "template": "Why do you like {0}?"},
        {"pattern": "*", "template": "Please, go on."},
        {"pattern": "where is *", "template": "It is Paris, of course."},
    ]
)

PERSONA = {"name": ["Robo", "Chatty"], "color": ["blue"]}


def pattern_talker(wordlog=None, seed=0):
    talker = PatternTalker(RULES, PERSONA, wordlog or {})
    talker.attach_rng(random.Random(seed))
    return talker


class TestPatternTalker:
    def test_exact_rule_beats_wildcard_rule(self):
        talker = pattern_talker()
        cand = talker.propose(DialogueState(), toks("hello"))
        assert cand.text.startswith("Hello! My name is ")

    def test_wildcard_capture_flows_into_the_template(self):
        talker = pattern_talker()
        cand = talker.propose(DialogueState(), toks("hello there friend"))
        assert cand.text == "Hi, there friend!"

    def test_persona_is_stable_within_a_conversation(self):
        talker = pattern_talker()
        state = DialogueState()
        first = talker.propose(state, toks("hello"))
        second = talker.propose(state, toks("what is your name"))
        name_first = first.text.split("My name is ")[1].rstrip(".")
        name_second = second.text.split("I am ")[1].rstrip(".")
        assert name_first == name_second

    def test_repeated_response_gets_zero_confidence(self):
        talker = pattern_talker()
        state = DialogueState()
        first = talker.propose(state, toks("what is your name"))
        second = talker.propose(state, toks("what is your name"))
        assert first.raw_confidence > 0.0
        assert second.raw_confidence == 0.0

    def test_fresh_conversation_resets_novelty(self):
        talker = pattern_talker()
        first = talker.propose(DialogueState(), toks("what is your name"))
        second = talker.propose(DialogueState(), toks("what is your name"))
        assert second.raw_confidence == pytest.approx(first.raw_confidence)

    def test_shorter_responses_score_higher(self):
        short_rules = parse_pattern_rules(
            [
                {"pattern": "aaa", "template": "Yes."},
                {"pattern": "bbb", "template": "That is a much longer response with many extra words attached."},
            ]
        )
        talker = PatternTalker(short_rules, {}, {})
        short = talker.propose(DialogueState(), toks("aaa"))
        long = talker.propose(DialogueState(), toks("bbb"))
        assert short.raw_confidence > long.raw_confidence

    def test_rare_introductions_outscore_common_ones(self):
        wordlog = {"paris": 2, "of": 9000, "course": 500, "it": 8000, "is": 9000,
                   "please": 4000, "go": 6000, "on": 7000}
        talker = pattern_talker(wordlog)
        paris = talker.propose(DialogueState(), toks("where is the treasure"))
        generic = talker.propose(DialogueState(), toks("ramble ramble ramble"))
        assert paris.text == "It is Paris, of course."
        assert generic.text == "Please, go on."
        # Both replies have 5 word tokens, so the originality factor is the
        # only discriminator and the rare "paris" introduction wins.
        assert paris.raw_confidence > generic.raw_confidence

    def test_no_matching_rule_gives_nothing(self):
        rules = parse_pattern_rules([{"pattern": "hello", "template": "Hi."}])
        talker = PatternTalker(rules, {}, {})
        assert talker.propose(DialogueState(), toks("goodbye")).raw_confidence == 0.0

    def test_empty_rule_list_rejected(self):
        with pytest.raises(ValueError):
            PatternTalker([], {}, {})


def trivia_table():
    return make_table(
        {
            "movie": [1.0, 0.0],
            "film": [0.95, 0.05],
            "actor": [0.8, 0.2],
            "ocean": [0.0, 1.0],
            "water": [0.05, 0.95],
        },
        total_docs=50,
    )


def trivia_bank(table):
    def item(question, answer):
        tokens = toks(question + " " + answer)
        from talkerbox.embeddings import tfidf_average

        return TriviaItem(question, answer, tfidf_average(tokens, table, table.term_stats))

    return [
        item("What movie won best picture in 1994?", "Forrest Gump"),
        item("Which ocean is the deepest?", "The Pacific"),
    ]


class TestTriviaTalker:
    def test_matches_the_topical_question(self):
        table = trivia_table()
        talker = TriviaTalker(trivia_bank(table), table)
        talker.attach_rng(random.Random(3))
        state = DialogueState()
        state.append_turn("user", "I love a good movie", toks("I love a good movie"))
        cand = talker.propose(state, toks("I love a good movie"))
        assert cand.text == "I know the answer, do you: What movie won best picture in 1994?"

    def test_confidence_is_sampled_within_match_quality(self):
        table = trivia_table()
        bank = trivia_bank(table)
        confidences = set()
        for seed in range(100):
            talker = TriviaTalker(bank, table)
            talker.attach_rng(random.Random(seed))
            state = DialogueState()
            state.append_turn("user", "movie film actor", toks("movie film actor"))
            cand = talker.propose(state, toks("movie film actor"))
            assert 0.0 <= cand.raw_confidence <= 1.0
            confidences.add(round(cand.raw_confidence, 6))
        assert len(confidences) > 10

    def test_oov_prompt_gives_nothing(self):
        table = trivia_table()
        talker = TriviaTalker(trivia_bank(table), table)
        state = DialogueState()
        state.append_turn("user", "zzz qqq", toks("zzz qqq"))
        assert talker.propose(state, toks("zzz qqq")).raw_confidence == 0.0

    def test_empty_bank_gives_nothing(self):
        table = trivia_table()
        talker = TriviaTalker([], table)
        state = DialogueState()
        state.append_turn("user", "movie", toks("movie"))
        assert talker.propose(state, toks("movie")).raw_confidence == 0.0
