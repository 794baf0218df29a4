"""Shared fixture builders: synthetic corpora and datasets with invented
vocabulary, so every token is rare to the keyword scorer and topics are
mutually disjoint for retrieval."""

from __future__ import annotations

import json
import socket
from pathlib import Path

import numpy as np
import pytest

from plainscore.heuristics import perturb_sentence
from plainscore.sentences import split_sentences

_SYLLABLES = [
    "bal", "dor", "fim", "gex", "hul", "jat", "kre", "lom", "mep", "nix",
    "pol", "qur", "rab", "sev", "tog", "vun", "wex", "yal", "zob", "cad",
]


def invent_word(rng: np.random.Generator, syllables: int = 2) -> str:
    return "".join(_SYLLABLES[i] for i in rng.integers(0, len(_SYLLABLES), size=syllables))


class _Vocabulary:
    """Draws invented words and numerals unique across the whole fixture, so
    no content token of one topic ever matches another topic's sentences."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.used: set[str] = set()
        self.numbers = iter(rng.permutation(np.arange(100, 100000)).tolist())

    def word(self) -> str:
        while True:
            candidate = invent_word(self.rng, 3)
            if candidate not in self.used:
                self.used.add(candidate)
                return candidate

    def number(self) -> int:
        return int(next(self.numbers))


class Topic:
    """One synthetic study: an abstract, a corpus article, and a summary.

    Every content word is unique to the topic; only the drug name is shared
    between a topic's abstract, summary, and corpus article.
    """

    def __init__(self, vocab: _Vocabulary, ordinal: int):
        self.ordinal = ordinal
        w = vocab.word
        n = [vocab.number() for _ in range(6)]
        self.drug = w().capitalize()
        self.abstract_sentences = [
            f"{self.drug} {w()} the {w()} {w()} by {n[0]} {w()} in {n[1]} {w()}.",
            f"The {w()} {w()} {w()} for {n[2]} {w()} at {n[3]} {w()}.",
            f"{w().capitalize()} {w()} {n[4]} {w()} {w()} {w()}.",
        ]
        self.snippet_sentence = (
            f"{self.drug} {w()} the {w()} {w()} of {n[5]} {w()} {w()}."
        )
        self.corpus_body = " ".join(
            [
                self.snippet_sentence,
                f"{w().capitalize()} {w()} the {w()} {w()} {w()}.",
                f"{w().capitalize()} of {self.drug} {w()} with {w()} {w()}.",
            ]
        )

    @property
    def abstract(self) -> str:
        return " ".join(self.abstract_sentences)

    @property
    def summary(self) -> str:
        # Two verbatim abstract sentences (simplifications) plus one
        # corpus-derived explanation sentence; every sentence carries a
        # numeral so the mock perturber corrupts a fact in each.
        return " ".join(
            [self.abstract_sentences[0], self.abstract_sentences[2], self.snippet_sentence]
        )


def make_topics(n: int, seed: int = 20240) -> list[Topic]:
    vocab = _Vocabulary(np.random.default_rng(seed))
    return [Topic(vocab, i) for i in range(n)]


def write_corpus_files(directory: Path, topics: list[Topic]) -> list[str]:
    """One textbook-style corpus plus one hierarchical corpus; returns paths."""
    textbook = directory / "textbook_corpus.jsonl"
    with textbook.open("w", encoding="utf-8") as handle:
        for topic in topics:
            handle.write(json.dumps({
                "id": f"tb-{topic.ordinal:03d}",
                "title": f"{topic.drug} monograph",
                "content": topic.corpus_body,
                "corpus_tag": "textbook",
            }) + "\n")
    hierarchical = directory / "hierarchical_corpus.jsonl"
    with hierarchical.open("w", encoding="utf-8") as handle:
        for topic in topics[: max(1, len(topics) // 4)]:
            body = (
                f"# Pharmacology\n\n{topic.drug} interacts with downstream pathways.\n\n"
                f"## Kinetics\n\nClearance follows baseline burden."
            )
            handle.write(json.dumps({
                "id": f"hx-{topic.ordinal:03d}",
                "title": f"{topic.drug} review",
                "headings": [],
                "content": body,
                "corpus_tag": "hierarchical",
            }) + "\n")
    return [str(textbook), str(hierarchical)]


def factual_pairs(topics: list[Topic]) -> list[dict]:
    return [
        {
            "id": f"pair-{topic.ordinal:03d}",
            "summary": topic.summary,
            "abstract": topic.abstract,
            "label": 1,
        }
        for topic in topics
    ]


def perturbed_twin(record: dict) -> dict:
    twin_sentences = [perturb_sentence(u.text) for u in split_sentences(record["summary"])]
    return {
        "id": record["id"] + "-perturbed",
        "summary": " ".join(twin_sentences),
        "abstract": record["abstract"],
        "label": 0,
        "provenance": "perturbed",
        "source_id": record["id"],
    }


def write_dataset(path: Path, records: list[dict]) -> Path:
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")
    return path


def build_separation_fixture(directory: Path, n_topics: int = 20, seed: int = 20240):
    """Corpus files + a dataset of n factual pairs and n perturbed twins."""
    topics = make_topics(n_topics, seed)
    corpus_paths = write_corpus_files(directory, topics)
    records = factual_pairs(topics)
    records = records + [perturbed_twin(r) for r in records]
    dataset = write_dataset(directory / "dataset.jsonl", records)
    return corpus_paths, dataset, topics


@pytest.fixture
def no_network(monkeypatch):
    """Fail the test if anything opens a network connection."""

    class GuardedSocket(socket.socket):
        def connect(self, *args, **kwargs):
            raise AssertionError(f"network connection attempted: {args}")

        def connect_ex(self, *args, **kwargs):
            raise AssertionError(f"network connection attempted: {args}")

    def guarded_getaddrinfo(*args, **kwargs):
        raise AssertionError(f"DNS lookup attempted: {args}")

    monkeypatch.setattr(socket, "socket", GuardedSocket)
    monkeypatch.setattr(socket, "getaddrinfo", guarded_getaddrinfo)
    return True
