"""The five QA pipeline stages.

Answer extraction (AE) pulls gold keyphrases out of a summary sentence.
Question generation (QG) writes one question per gold answer. Question
filtering (QF) drops questions that cannot be answered from the summary
sentence itself. Question answering (QA) answers the survivors against the
composed source context. Answer overlap evaluation (AOE) scores predictions
against gold answers; per-sentence scores average the usable items, counting
NoAnswer predictions as 0.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from . import heuristics
from .backend import ModelClient
from .errors import ContractViolationError, PlainscoreError
from .prompts import (
    ANSWER_EXTRACTOR,
    NO_ANSWER_TEXT,
    QUESTION_ANSWERER,
    QUESTION_GENERATOR,
    render_prompt,
)
from .records import QAItem
from .text import lexical_f1

QF_MIN_F1 = 0.2

REASON_QG_ERROR = "question_generation_error"
REASON_UNANSWERABLE = "unanswerable_from_summary"
REASON_SUMMARY_MISMATCH = "summary_answer_mismatch"
REASON_BACKEND_ERROR = "backend_error"
REASON_EMPTY_SOURCE = "empty_source"


class AnswerExtractionMode(Enum):
    ENDPOINT = "endpoint"
    KEYWORD = "keyword"


class OverlapKind(Enum):
    LEXICAL_F1 = "lexical_f1"
    SEMANTIC_EMBEDDING = "semantic_embedding"


def extract_answers(
    sentence: str,
    mode: AnswerExtractionMode,
    client: ModelClient | None = None,
    limit: int = heuristics.MAX_KEYWORDS,
) -> list[str]:
    """Gold answer keyphrases, each a case-insensitive substring of the sentence.

    Endpoint mode splits the model reply on commas, trims, drops empties and
    duplicates in order, and keeps only phrases the sentence contains. An
    empty result is not an error; the sentence simply becomes unscorable.
    """
    if not sentence.strip():
        raise ContractViolationError("extract_answers requires a non-empty sentence")
    if mode is AnswerExtractionMode.KEYWORD:
        return heuristics.keyword_answers(sentence, limit)
    if client is None:
        raise ContractViolationError("endpoint answer extraction requires a model client")
    system_text, user_text = render_prompt(ANSWER_EXTRACTOR, {"input": sentence})
    response = client.complete(system_text, user_text)
    lowered_sentence = sentence.lower()
    answers: list[str] = []
    seen: set[str] = set()
    for raw in response.split(","):
        phrase = raw.strip()
        key = phrase.lower()
        if not phrase or key in seen or key not in lowered_sentence:
            continue
        seen.add(key)
        answers.append(phrase)
    return answers


def generate_questions(
    sentence: str,
    answers: list[str],
    client: ModelClient,
) -> list[QAItem]:
    """At most one question per answer, in answer order.

    A backend failure on one answer marks that item filtered with a QG error
    reason; remaining answers are still processed.
    """
    items = []
    for answer in answers:
        item = QAItem(gold_answer=answer)
        try:
            system_text, user_text = render_prompt(
                QUESTION_GENERATOR, {"answer": answer, "input": sentence}
            )
            question = client.complete(system_text, user_text).strip()
            if not question:
                raise PlainscoreError("empty question from the QG backend")
            item.question = question
        except PlainscoreError as exc:
            item.filtered = True
            item.filter_reason = f"{REASON_QG_ERROR}: {exc}"
        items.append(item)
    return items


def answer_question(
    question: str,
    source_context: str,
    client: ModelClient,
) -> str | None:
    """Extractive answer from the source context, or None for NoAnswer.

    A reply that is not a case-insensitive substring of the context is
    treated as NoAnswer: the QA stage must never fabricate source tokens.
    """
    if not source_context.strip():
        raise ContractViolationError("answer_question requires a non-empty source context")
    system_text, user_text = render_prompt(
        QUESTION_ANSWERER, {"question": question, "context": source_context}
    )
    response = client.complete(system_text, user_text).strip()
    if not response or response.upper() == NO_ANSWER_TEXT:
        return None
    if response.lower() not in source_context.lower():
        return None
    return response


def filter_questions(
    summary_sentence: str,
    items: list[QAItem],
    client: ModelClient,
    enabled: bool = True,
) -> list[QAItem]:
    """Mark items whose question the summary sentence itself cannot answer.

    When disabled every item passes through. With filtering on, an item is
    dropped when the sentence-level prediction is NoAnswer or its lexical F1
    against the gold answer falls below the keep threshold.
    """
    if not enabled:
        return items
    for item in items:
        if item.filtered or item.question is None:
            continue
        try:
            probe = answer_question(item.question, summary_sentence, client)
        except PlainscoreError as exc:
            item.filtered = True
            item.filter_reason = f"{REASON_BACKEND_ERROR}: {exc}"
            continue
        if probe is None:
            item.filtered = True
            item.filter_reason = REASON_UNANSWERABLE
        elif lexical_f1(item.gold_answer, probe) < QF_MIN_F1:
            item.filtered = True
            item.filter_reason = REASON_SUMMARY_MISMATCH
    return items


def score_overlap(
    gold: str,
    predicted: str,
    kind: OverlapKind,
    embedder: ModelClient | None = None,
) -> float:
    """Overlap between gold and predicted answers in [0, 1]."""
    if not gold or not predicted:
        raise ContractViolationError("score_overlap requires non-empty strings")
    if kind is OverlapKind.LEXICAL_F1:
        return lexical_f1(gold, predicted)
    if embedder is None:
        raise ContractViolationError("semantic overlap requires an embedding client")
    vectors = embedder.embed([gold, predicted]).astype(np.float64)
    norms = np.linalg.norm(vectors, axis=1)
    if norms[0] == 0 or norms[1] == 0:
        return 0.0
    cosine = float(vectors[0] @ vectors[1] / (norms[0] * norms[1]))
    return min(1.0, max(0.0, cosine))


def score_sentence(items: list[QAItem]) -> float | None:
    """Mean overlap across usable items; NoAnswer counts 0; none -> Unscored."""
    values = []
    for item in items:
        if item.filtered or item.question is None:
            continue
        if item.predicted_answer is None:
            values.append(0.0)
        else:
            values.append(item.overlap if item.overlap is not None else 0.0)
    if not values:
        return None
    return min(1.0, sum(values) / len(values))  # guard summation round-up
