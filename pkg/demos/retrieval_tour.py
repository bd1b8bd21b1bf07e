"""Paragraph retrieval and sentence embeddings, piece by piece.

Builds a toy inverted index on disk, runs weighted queries against it, then
shows how bag-of-words sentence vectors are assembled, including multi-word
phrase coupling.

Run:  python3 demos/retrieval_tour.py
"""
import tempfile

import numpy as np

from talkerbox.embeddings import EmbeddingTable, embed_bow
from talkerbox.index import Paragraph, build_index
from talkerbox.text import TermStats, tokenize

DOCS = {
    "cyclones": [
        "Cyclone Monica was the most intense storm recorded near Australia.",
        "The cyclone crossed the coast of the Northern Territory.",
        "Warnings were issued for communities along the coast.",
    ],
    "continents": [
        "A continent is one of several very large landmasses.",
        "Australia is both a country and a continent.",
    ],
    "music": [
        "The festival drew crowds from across the country.",
    ],
}


def retrieval_part(directory: str) -> None:
    print("-- weighted paragraph retrieval " + "-" * 30)
    paragraphs = [
        Paragraph(doc_id=doc, para_id=i, text=text, doc_title=doc)
        for doc, texts in DOCS.items()
        for i, text in enumerate(texts)
    ]
    index = build_index(paragraphs, directory)
    print(f"  indexed {len(index)} paragraphs")
    for term in ("the", "cyclone", "northern territory"):
        print(f"  weight({term!r:22}) = {index.gram_weight(term):.3f}")
    print()
    for query in ("cyclone near australia", "what is a continent"):
        print(f"  query: {query}")
        for para, score in index.query_paragraphs(query, k=2):
            print(f"    {score:5.2f}  {para.doc_id}/{para.para_id}  {para.text[:52]}")
    print()


def embedding_part() -> None:
    print("-- bag-of-words sentence vectors " + "-" * 29)
    stats = TermStats(
        corpus_freq={"cyclone": 40, "monica": 12, "coast": 25, "northern territory": 9},
        total_docs=100,
    )
    table = EmbeddingTable(dim=3, term_stats=stats)
    table.add("cyclone", [1.0, 0.0, 0.0])
    table.add("monica", [0.0, 1.0, 0.0])
    table.add("coast", [0.0, 0.0, 1.0])
    table.add("northern_territory", [0.5, 0.5, 0.0])

    for sentence in (
        "cyclone monica",
        "monica cyclone",
        "the northern territory coast",
    ):
        vec = embed_bow(tokenize(sentence), table)
        print(f"  {sentence:30} -> {np.round(vec, 3)}")
    print("  word order does not matter, and the two-word region name was")
    print("  coupled into a single phrase vector before weighting.")


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as scratch:
        retrieval_part(scratch)
    embedding_part()
