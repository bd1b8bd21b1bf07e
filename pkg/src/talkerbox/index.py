"""Inverted paragraph index with idf-weighted unigram/bigram scoring.

On-disk layout (one directory per index):
    paragraphs.jsonl  append-only paragraph payloads, one JSON object per line
    postings.tsv      term -> "ordinal:count" postings, sorted by term
    terms.tsv         term, df, corpus freq, byte offset + length into postings.tsv
    meta.json         paragraph count and format version

Only the term offset table and paragraph offsets are held in memory;
payloads and postings are read from disk on demand.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from typing import Iterable, Iterator

from .text import STOPWORDS, TermStats, idf_weight, ngrams, tokenize

__all__ = ["Paragraph", "ParagraphIndex", "build_index", "paragraph_grams"]

FORMAT_VERSION = 1

# Stopword unigrams are indexed but their query weight is capped, so "the"
# cannot dominate paragraph scores on small corpora.
STOPWORD_WEIGHT_CAP = 0.1


@dataclass(frozen=True)
class Paragraph:
    doc_id: str
    para_id: int
    text: str
    doc_title: str = ""

    @property
    def key(self) -> tuple[str, int]:
        return (self.doc_id, self.para_id)


def paragraph_grams(text: str) -> list[str]:
    toks = tokenize(text)
    return ngrams(toks, 1) + ngrams(toks, 2)


class StorageError(OSError):
    pass


def build_index(paragraphs: Iterable[Paragraph], directory) -> "ParagraphIndex":
    """Index a stream of paragraphs into `directory` and return the loaded index.

    Raises ValueError on an empty stream; rebuilding from the same input
    produces byte-identical files.
    """
    directory = os.fspath(directory)
    os.makedirs(directory, exist_ok=True)

    postings: dict[str, list[tuple[int, int]]] = {}
    freqs: dict[str, int] = {}
    count = 0
    try:
        with open(os.path.join(directory, "paragraphs.jsonl"), "w", encoding="utf-8") as fh:
            for para in paragraphs:
                if not para.text.strip():
                    raise ValueError(f"empty paragraph text for {para.key}")
                fh.write(
                    json.dumps(
                        {
                            "doc_id": para.doc_id,
                            "para_id": para.para_id,
                            "text": para.text,
                            "doc_title": para.doc_title,
                        },
                        ensure_ascii=False,
                    )
                    + "\n"
                )
                counts: dict[str, int] = {}
                for gram in paragraph_grams(para.text):
                    counts[gram] = counts.get(gram, 0) + 1
                for gram, c in counts.items():
                    postings.setdefault(gram, []).append((count, c))
                    freqs[gram] = freqs.get(gram, 0) + c
                count += 1
    except OSError as exc:
        raise StorageError(str(exc)) from exc
    if count == 0:
        raise ValueError("paragraph stream is empty")

    try:
        offsets: dict[str, tuple[int, int]] = {}
        with open(os.path.join(directory, "postings.tsv"), "wb") as fh:
            for term in sorted(postings):
                line = (
                    term
                    + "\t"
                    + " ".join(f"{o}:{c}" for o, c in postings[term])
                    + "\n"
                ).encode("utf-8")
                offsets[term] = (fh.tell(), len(line))
                fh.write(line)
        with open(os.path.join(directory, "terms.tsv"), "w", encoding="utf-8") as fh:
            for term in sorted(postings):
                off, length = offsets[term]
                fh.write(
                    f"{term}\t{len(postings[term])}\t{freqs[term]}\t{off}\t{length}\n"
                )
        with open(os.path.join(directory, "meta.json"), "w", encoding="utf-8") as fh:
            json.dump({"version": FORMAT_VERSION, "paragraphs": count}, fh)
    except OSError as exc:
        raise StorageError(str(exc)) from exc
    return ParagraphIndex(directory)


class ParagraphIndex:
    """Disk-backed inverted index; immutable after build, safe for concurrent reads."""

    def __init__(self, directory):
        self.directory = os.fspath(directory)
        with open(os.path.join(self.directory, "meta.json"), encoding="utf-8") as fh:
            meta = json.load(fh)
        if meta.get("version") != FORMAT_VERSION:
            raise StorageError(f"unsupported index version: {meta.get('version')}")
        self._paragraph_count: int = meta["paragraphs"]

        doc_count: dict[str, int] = {}
        corpus_freq: dict[str, int] = {}
        self._term_offsets: dict[str, tuple[int, int]] = {}
        with open(os.path.join(self.directory, "terms.tsv"), encoding="utf-8") as fh:
            for line in fh:
                term, df, freq, off, length = line.rstrip("\n").split("\t")
                doc_count[term] = int(df)
                corpus_freq[term] = int(freq)
                self._term_offsets[term] = (int(off), int(length))
        self.stats = TermStats(doc_count, corpus_freq, total_docs=self._paragraph_count)

        # Paragraph payload offsets plus per-document ordering; texts stay on disk.
        self._offsets: list[int] = []
        self._keys: list[tuple[str, int]] = []
        self._docs: dict[str, list[int]] = {}
        pos = 0
        with open(os.path.join(self.directory, "paragraphs.jsonl"), "rb") as fh:
            for raw in fh:
                record = json.loads(raw)
                self._offsets.append(pos)
                self._keys.append((record["doc_id"], record["para_id"]))
                self._docs.setdefault(record["doc_id"], []).append(len(self._keys) - 1)
                pos += len(raw)

    def __len__(self) -> int:
        return self._paragraph_count

    def paragraph(self, ordinal: int) -> Paragraph:
        with open(os.path.join(self.directory, "paragraphs.jsonl"), "rb") as fh:
            fh.seek(self._offsets[ordinal])
            record = json.loads(fh.readline())
        return Paragraph(
            doc_id=record["doc_id"],
            para_id=record["para_id"],
            text=record["text"],
            doc_title=record.get("doc_title", ""),
        )

    def iter_paragraphs(self) -> Iterator[Paragraph]:
        for i in range(len(self._keys)):
            yield self.paragraph(i)

    def terms(self) -> Iterator[str]:
        return iter(self._term_offsets)

    def postings(self, term: str) -> list[tuple[int, int]]:
        entry = self._term_offsets.get(term)
        if entry is None:
            return []
        off, length = entry
        with open(os.path.join(self.directory, "postings.tsv"), "rb") as fh:
            fh.seek(off)
            line = fh.read(length).decode("utf-8")
        _, payload = line.rstrip("\n").split("\t")
        out = []
        for item in payload.split(" "):
            o, c = item.split(":")
            out.append((int(o), int(c)))
        return out

    def gram_weight(self, gram: str) -> float:
        w = idf_weight(gram, self.stats)
        if " " not in gram and gram in STOPWORDS:
            return min(w, STOPWORD_WEIGHT_CAP)
        return w

    def query_paragraphs(self, query: str, k: int = 5) -> list[tuple[Paragraph, float]]:
        """Rank paragraphs by sum over query unigrams/bigrams of
        occurrences x idf weight; ties break by (doc_id, para_id) ascending."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        scores: dict[int, float] = {}
        for gram in paragraph_grams(query):
            if gram not in self._term_offsets:
                continue
            w = self.gram_weight(gram)
            for ordinal, count in self.postings(gram):
                scores[ordinal] = scores.get(ordinal, 0.0) + count * w
        ranked = sorted(
            ((s, o) for o, s in scores.items() if s > 0.0),
            key=lambda pair: (-pair[0], self._keys[pair[1]]),
        )[:k]
        return [(self.paragraph(o), s) for s, o in ranked]

    def query_document(self, query: str) -> str | None:
        """Full text of the document owning the top-scoring paragraph, or None."""
        top = self.query_paragraphs(query, k=1)
        if not top:
            return None
        doc_id = top[0][0].doc_id
        parts = [self.paragraph(o).text for o in self._docs[doc_id]]
        return "\n\n".join(parts)

    def document_title(self, doc_id: str) -> str:
        ordinals = self._docs.get(doc_id)
        if not ordinals:
            return ""
        return self.paragraph(ordinals[0]).doc_title

    def timed_query(self, query: str, k: int = 5):
        start = time.perf_counter()
        result = self.query_paragraphs(query, k)
        return result, time.perf_counter() - start
