"""Extractive question answering over the paragraph index and the current
article: excerpt assembly, question rephrasing, and a lexical span extractor.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..config import EngineConfig
from ..embeddings import EmbeddingTable, cosine, embed_bow
from ..index import ParagraphIndex, paragraph_grams
from ..state import DialogueState
from ..text import STOPWORDS, Token, idf_weight, split_sentences, tokenize, word_tokens
from .base import Talker

QUESTION_WORDS = frozenset({"what", "when", "who", "where", "why", "how", "which", "whom", "whose"})

DO_AUXILIARIES = frozenset({"do", "does", "did"})
KEEP_AUXILIARIES = frozenset(
    {"is", "was", "are", "were", "be", "been", "am", "can", "could", "will",
     "would", "shall", "should", "may", "might", "must", "has", "have", "had"}
)

# Small closed verb lexicon for locating the main verb of a question.
VERBS = frozenset(
    "start stop end begin happen occur live die win lose work play strike hit "
    "impact blame move go come leave arrive form become make take give get "
    "say see know think find want use call try ask feel mean keep let put "
    "run bring write sit stand grow fall speak read spend open close cause "
    "serve rule invent discover build destroy marry study teach travel".split()
)

IRREGULAR_PAST = {
    "begin": "began", "go": "went", "come": "came", "become": "became",
    "make": "made", "take": "took", "give": "gave", "get": "got", "say": "said",
    "see": "saw", "know": "knew", "think": "thought", "find": "found",
    "keep": "kept", "let": "let", "put": "put", "run": "ran", "bring": "brought",
    "write": "wrote", "sit": "sat", "stand": "stood", "grow": "grew",
    "fall": "fell", "speak": "spoke", "read": "read", "spend": "spent",
    "win": "won", "lose": "lost", "strike": "struck", "hit": "hit",
    "leave": "left", "feel": "felt", "mean": "meant", "teach": "taught",
}

HEDGES = (
    "I'd say {}.",
    "I believe it's {}.",
    "I guess {}.",
    "Maybe the answer is {}.",
    "It has to be {}.",
    "I am quite sure it's {}.",
    "I am convinced that it's {}.",
)

SPAN_WINDOW = 8
LOW_IDF_PENALTY = 0.1
# Half-saturation point for the span idf sum: one strong content-word match
# lands near 0.4, several matches approach but never reach 1.0.
SPAN_SATURATION = 6.0


_VOWELS = "aeiou"


def past_tense(verb: str) -> str:
    if verb in IRREGULAR_PAST:
        return IRREGULAR_PAST[verb]
    if verb.endswith("e"):
        return verb + "d"
    if verb.endswith("y") and len(verb) > 1 and verb[-2] not in _VOWELS:
        return verb[:-1] + "ied"
    # Short consonant-vowel-consonant stems double the final letter
    # (stop -> stopped); longer stems are left alone since the doubling
    # rule depends on stress we cannot see.
    if (
        len(verb) in (3, 4)
        and verb[-1] not in _VOWELS + "wxy"
        and verb[-2] in _VOWELS
        and verb[-3] not in _VOWELS
    ):
        return verb + verb[-1] + "ed"
    return verb + "ed"


def third_singular(verb: str) -> str:
    if verb.endswith("y") and len(verb) > 1 and verb[-2] not in "aeiou":
        return verb[:-1] + "ies"
    if verb.endswith(("s", "sh", "ch", "x", "z", "o")):
        return verb + "es"
    return verb + "s"


def rephrase_question(tokens: list[Token]) -> list[Token]:
    """Turn "<qword> did <np> <verb>" into "<qword> <np> <verb+ed>" (and the
    do/does variants); anything else passes through unchanged.
    """
    if len(tokens) < 4:
        return list(tokens)
    if tokens[0].normalized not in QUESTION_WORDS:
        return list(tokens)
    aux = tokens[1].normalized
    if aux in KEEP_AUXILIARIES:
        return list(tokens)
    if aux not in DO_AUXILIARIES:
        return list(tokens)

    rest = tokens[2:]
    verb_pos = None
    for i in range(1, len(rest)):
        if rest[i].is_word and rest[i].normalized in VERBS:
            verb_pos = i
            break
    if verb_pos is None:
        word_positions = [i for i, t in enumerate(rest) if t.is_word]
        if len(word_positions) < 2:
            return list(tokens)
        verb_pos = word_positions[-1]

    verb = rest[verb_pos].normalized
    if aux == "did":
        inflected = past_tense(verb)
    elif aux == "does":
        inflected = third_singular(verb)
    else:
        inflected = verb
    out = [tokens[0]]
    out.extend(rest[:verb_pos])
    out.append(Token.from_surface(inflected))
    out.extend(rest[verb_pos + 1 :])
    return out


@dataclass(frozen=True)
class Excerpt:
    text: str
    source: str  # "article" | "retrieved"


@dataclass
class ExcerptSet:
    excerpts: list[Excerpt]


def build_excerpts(article: str, index: ParagraphIndex | None) -> ExcerptSet:
    """Article paragraphs plus the indexed document most like the article,
    deduplicated by text, article text first.
    """
    seen: set[str] = set()
    out: list[Excerpt] = []
    for part in article.split("\n\n"):
        part = part.strip()
        if part and part not in seen:
            seen.add(part)
            out.append(Excerpt(part, "article"))
    if index is not None and article.strip():
        doc = index.query_document(article)
        if doc:
            for part in doc.split("\n\n"):
                part = part.strip()
                if part and part not in seen:
                    seen.add(part)
                    out.append(Excerpt(part, "retrieved"))
    return ExcerptSet(out)


class WikiQaTalker(Talker):
    """Question answering: retrieve passages for the rephrased question, pull
    in conversation excerpts when the question is on topic, extract the best
    short span, and hedge the phrasing.
    """

    talker_id = "wiki_qa"

    def __init__(
        self,
        index: ParagraphIndex | None,
        table: EmbeddingTable | None = None,
        config: EngineConfig | None = None,
    ):
        super().__init__()
        self.index = index
        self.table = table
        self.config = config or EngineConfig()
        self.last_processed_count = 0

    @property
    def stats(self):
        if self.index is not None:
            return self.index.stats
        if self.table is not None:
            return self.table.term_stats
        return None

    def _excerpts(self, state: DialogueState) -> ExcerptSet:
        slot = state.slot(self.talker_id, dict)
        if "excerpts" not in slot:
            slot["excerpts"] = build_excerpts(state.article or "", self.index)
        return slot["excerpts"]

    def _on_topic(self, query_tokens: list[Token], article: str) -> bool:
        if self.table is None or not article.strip():
            return False
        summary_tokens = tokenize(article)[:60]
        q = embed_bow(query_tokens, self.table)
        a = embed_bow(summary_tokens, self.table)
        if q is None or a is None:
            return False
        return cosine(q, a) >= self.config.excerpt_similarity_threshold

    def _score_passage(
        self, text: str, content_words: set[str], qwords: set[str]
    ) -> tuple[float, list[Token], int] | None:
        """Best sentence in the passage: (score, sentence tokens, anchor)."""
        stats = self.stats
        best = None
        for sentence in split_sentences(text):
            toks = tokenize(sentence)
            words = [t.normalized for t in word_tokens(toks)]
            present = set(words)
            matched = content_words & present
            if not matched:
                continue
            score = sum(idf_weight(w, stats) for w in matched)
            score -= sum(idf_weight(w, stats) for w in qwords & present)
            if score <= 0:
                continue
            anchor_word = max(matched, key=lambda w: (idf_weight(w, stats), w))
            if best is None or score > best[0]:
                best = (score, toks, anchor_word)
        return best

    def _extract_span(
        self, toks: list[Token], anchor_word: str, query_words: set[str]
    ) -> str:
        words = [t for t in toks if t.is_word]
        try:
            anchor = next(i for i, t in enumerate(words) if t.normalized == anchor_word)
        except StopIteration:
            anchor = 0
        half = SPAN_WINDOW // 2
        lo = max(0, anchor - half)
        hi = min(len(words), lo + SPAN_WINDOW)
        lo = max(0, hi - SPAN_WINDOW)
        span = words[lo:hi]

        def trimmable(tok: Token) -> bool:
            return tok.normalized in query_words or tok.normalized in STOPWORDS

        while span and trimmable(span[0]) and span[0].normalized != anchor_word:
            span.pop(0)
        while span and trimmable(span[-1]) and span[-1].normalized != anchor_word:
            span.pop()
        if not span:
            span = words[lo:hi]
        return " ".join(t.surface for t in span)

    def propose(self, state: DialogueState, tokens: list[Token]):
        is_question = bool(tokens) and (
            tokens[0].normalized in QUESTION_WORDS or tokens[-1].surface == "?"
        )
        if not is_question or self.stats is None:
            return self.nothing()

        rephrased = rephrase_question(tokens)
        query_text = " ".join(t.surface for t in rephrased if t.is_word)
        qwords = {t.normalized for t in word_tokens(tokens) if t.normalized in QUESTION_WORDS}
        content_words = {
            t.normalized
            for t in word_tokens(rephrased)
            if t.normalized not in QUESTION_WORDS and t.normalized not in STOPWORDS
        }
        if not content_words:
            return self.nothing()

        passages: list[tuple[str, float]] = []
        if self.index is not None:
            hits = self.index.query_paragraphs(query_text, k=self.config.qa_passages)
            top = hits[0][1] if hits else 0.0
            for para, score in hits:
                passages.append((para.text, score / top if top > 0 else 0.0))
        if self._on_topic(rephrased, state.article or ""):
            room = self.config.qa_total_cap - len(passages)
            for excerpt in self._excerpts(state).excerpts[: max(0, room)]:
                passages.append((excerpt.text, 1.0))
        passages = passages[: self.config.qa_total_cap]
        self.last_processed_count = len(passages)
        if not passages:
            return self.nothing()

        best = None
        for text, retrieval in passages:
            scored = self._score_passage(text, content_words, qwords)
            if scored is None:
                continue
            span_score, toks, anchor_word = scored
            # Squash the unbounded idf sum into [0, 1) so the confidence is
            # comparable with the other talkers; the map is monotone, so the
            # best passage stays the best.
            final = retrieval * span_score / (span_score + SPAN_SATURATION)
            if best is None or final > best[0]:
                best = (final, toks, anchor_word)
        if best is None:
            return self.nothing()

        confidence, toks, anchor_word = best
        stats = self.stats
        if max(idf_weight(w, stats) for w in content_words) < self.config.idf_floor:
            confidence *= LOW_IDF_PENALTY
        span = self._extract_span(toks, anchor_word, content_words | qwords)
        template = self.rng.choice(HEDGES)
        return self.candidate(template.format(span), confidence)
