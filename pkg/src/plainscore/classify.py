"""Sentence-type classification: endpoint-backed or local heuristic."""

from __future__ import annotations

from enum import Enum

from . import heuristics
from .backend import ModelClient
from .errors import ClassificationError, ContractViolationError, InputError
from .prompts import SENTENCE_CLASSIFIER, render_prompt
from .records import ClassifierSource, SentenceType, SentenceUnit, SummaryPair
from .sentences import split_sentences


class ClassifierMode(Enum):
    ENDPOINT = "endpoint"
    HEURISTIC = "heuristic"


def classify_sentence(
    sentence: str,
    abstract: str,
    mode: ClassifierMode,
    client: ModelClient | None = None,
    threshold: float = heuristics.DEFAULT_SIMPLIFICATION_THRESHOLD,
) -> SentenceType:
    """Label one sentence as Simplification or Explanation.

    Endpoint mode sends the classifier prompt and maps a response beginning
    "Yes" (case-insensitive) to Explanation and "No" to Simplification; any
    other response raises ClassificationError carrying the raw text.
    """
    if not sentence.strip() or not abstract.strip():
        raise ContractViolationError("classify_sentence requires non-empty sentence and abstract")
    if mode is ClassifierMode.HEURISTIC:
        return heuristics.heuristic_sentence_type(sentence, abstract, threshold)
    if client is None:
        raise ContractViolationError("endpoint classification requires a model client")
    system_text, user_text = render_prompt(
        SENTENCE_CLASSIFIER, {"input": sentence, "abstract": abstract}
    )
    response = client.complete(system_text, user_text)
    answer = response.strip().lower()
    if answer.startswith("yes"):
        return SentenceType.EXPLANATION
    if answer.startswith("no"):
        return SentenceType.SIMPLIFICATION
    raise ClassificationError(
        f"classifier endpoint returned neither Yes nor No: {response[:120]!r}",
        raw_response=response,
    )


def classify_summary(
    pair: SummaryPair,
    mode: ClassifierMode,
    client: ModelClient | None = None,
    threshold: float = heuristics.DEFAULT_SIMPLIFICATION_THRESHOLD,
) -> list[SentenceUnit]:
    """Split a summary and assign a type to every sentence.

    Gold annotations on the pair bypass classification entirely and are
    recorded with GOLD_ANNOTATION provenance.
    """
    units = split_sentences(pair.summary_text)
    if not units:
        return []
    if pair.sentence_types is not None:
        if len(pair.sentence_types) != len(units):
            raise InputError(
                f"summary {pair.id!r}: {len(pair.sentence_types)} sentence_types "
                f"for {len(units)} segmented sentences"
            )
        for unit, kind in zip(units, pair.sentence_types):
            unit.sentence_type = kind
            unit.classifier_source = ClassifierSource.GOLD_ANNOTATION
        return units
    if not pair.abstract_text.strip():
        # Nothing is derivable from an absent abstract. Rule-based call, so
        # the provenance is heuristic whatever the configured mode.
        for unit in units:
            unit.sentence_type = SentenceType.EXPLANATION
            unit.classifier_source = ClassifierSource.HEURISTIC
        return units
    source = (
        ClassifierSource.HEURISTIC if mode is ClassifierMode.HEURISTIC
        else ClassifierSource.ENDPOINT
    )
    for unit in units:
        try:
            unit.sentence_type = classify_sentence(
                unit.text, pair.abstract_text, mode, client, threshold
            )
        except ClassificationError as exc:
            raise ClassificationError(
                f"summary {pair.id!r}, sentence {unit.index}: {exc}",
                raw_response=exc.raw_response,
            ) from exc
        unit.classifier_source = source
    return units
