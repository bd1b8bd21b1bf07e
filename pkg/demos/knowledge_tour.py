"""Structured knowledge answers: entity linking, attribute lookup, fact
mining, question rewrites, and spoken arithmetic.

Run:  python3 demos/knowledge_tour.py
"""
from talkerbox.knowledge import Triple, TripleStore, trie_match
from talkerbox.state import DialogueState
from talkerbox.talkers.definition import TripleTalker
from talkerbox.talkers.misc import eval_math, sentence_is_interesting
from talkerbox.talkers.qa import rephrase_question
from talkerbox.text import tokenize


def entity_part() -> None:
    print("-- entity linking and attribute lookup " + "-" * 23)
    store = TripleStore()
    store.add(Triple("Albert_Einstein", "spouse", "Mileva Marić"), rank=50.0)
    store.add(Triple("Albert_Einstein", "spouse", "Elsa Löwenthal"))
    store.add(Triple("Albert_Einstein", "birth year", "1879"))
    store.add(Triple("New_York", "state", "yes"), rank=100.0)
    store.add(Triple("New_York_City", "population", "8 million"), rank=1.0)

    q = "Who is Albert Einstein wife"
    talker = TripleTalker(store, thesaurus={"wife": ["spouse"]})
    cand = talker.propose(DialogueState(), tokenize(q))
    print(f"  {q!r}")
    print(f"    -> {cand.text}  (confidence {cand.raw_confidence:.2f})")

    q = "tell me about new york city"
    print(f"  {q!r}")
    print(f"    -> linked resource: {trie_match(store, tokenize(q))}")
    print("    the longer span wins even against a much higher-ranked entity")
    print()


def fact_part() -> None:
    print("-- mining listable facts from an article " + "-" * 21)
    sentences = [
        "Alan Turing was born in Maida Vale, London.",
        "His father was part of a family of merchants from Scotland.",
    ]
    for s in sentences:
        verdict = "keep" if sentence_is_interesting(s, {"alan", "turing"}) else "skip"
        print(f"  [{verdict}] {s}")
    print("  sentences must mention the subject and finish their clauses.")
    print()


def question_part() -> None:
    print("-- question rewrites for span search " + "-" * 25)
    for q in ("when did the war start", "where does the river go"):
        rewritten = " ".join(t.surface for t in rephrase_question(tokenize(q)))
        print(f"  {q:28} -> {rewritten}")
    print()


def math_part() -> None:
    print("-- spoken arithmetic " + "-" * 41)
    for text in ("What is 2 plus 2", "(3 + 4) * 5", "10 minus 6 divided by 3", "5 divided by 0"):
        result, error = eval_math(text)
        shown = result if result is not None else f"error ({error})"
        print(f"  {text:24} -> {shown}")


if __name__ == "__main__":
    entity_part()
    fact_part()
    question_part()
    math_part()
