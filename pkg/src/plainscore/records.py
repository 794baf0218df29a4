"""Core record types and the JSON-lines dataset format.

A dataset is one JSON object per line with fields:
    id (required), summary (required), abstract (required),
    label (optional, 0 = non-factual / 1 = factual),
    sentence_types (optional list of "simplification"/"explanation").
Unknown fields are preserved in ``SummaryPair.metadata`` and re-emitted
on write, so round-tripping a file keeps foreign keys intact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import InputError


class SentenceType(Enum):
    SIMPLIFICATION = "simplification"
    EXPLANATION = "explanation"


class ClassifierSource(Enum):
    ENDPOINT = "endpoint"
    HEURISTIC = "heuristic"
    GOLD_ANNOTATION = "gold_annotation"


@dataclass
class SentenceUnit:
    """One summary sentence; type and provenance are set by classification."""

    index: int
    text: str
    sentence_type: SentenceType | None = None
    classifier_source: ClassifierSource | None = None


@dataclass
class SummaryPair:
    """One evaluated unit: a plain-language summary and its source abstract."""

    id: str
    summary_text: str
    abstract_text: str
    gold_label: int | None = None
    sentence_types: list[SentenceType] | None = None
    metadata: dict = field(default_factory=dict)


@dataclass
class QAItem:
    """One QA chain item: gold answer, question, prediction, overlap."""

    gold_answer: str
    question: str | None = None
    predicted_answer: str | None = None  # None = NoAnswer once the QA stage ran
    overlap: float | None = None
    filtered: bool = False
    filter_reason: str | None = None

    def to_json(self) -> dict:
        return {
            "gold_answer": self.gold_answer,
            "question": self.question,
            "predicted_answer": self.predicted_answer,
            "overlap": self.overlap,
            "filtered": self.filtered,
            "filter_reason": self.filter_reason,
        }


@dataclass
class SentenceTrace:
    """Per-sentence evaluation trace exported with --trace."""

    index: int
    text: str
    sentence_type: str | None
    classifier_source: str | None
    score: float | None
    snippet_ids: list[str]
    items: list[QAItem]

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "text": self.text,
            "sentence_type": self.sentence_type,
            "classifier_source": self.classifier_source,
            "score": self.score,
            "snippet_ids": self.snippet_ids,
            "items": [item.to_json() for item in self.items],
        }


@dataclass
class ScoreReport:
    """Per-summary score breakdown; None means Unscored."""

    summary_id: str
    s_avg: float | None
    e_avg: float | None
    n_s: int
    n_e: int
    n_s_scored: int
    n_e_scored: int
    final_score: float | None
    sentence_details: list[SentenceTrace] = field(default_factory=list)

    def to_json(self, include_trace: bool = False) -> dict:
        out = {
            "id": self.summary_id,
            "final_score": self.final_score,
            "s_avg": self.s_avg,
            "e_avg": self.e_avg,
            "n_s": self.n_s,
            "n_e": self.n_e,
            "n_s_scored": self.n_s_scored,
            "n_e_scored": self.n_e_scored,
        }
        if include_trace:
            out["sentences"] = [d.to_json() for d in self.sentence_details]
        return out


def _parse_sentence_types(raw, where: str) -> list[SentenceType]:
    if not isinstance(raw, list):
        raise InputError(f"{where}: sentence_types must be a list")
    out = []
    for value in raw:
        try:
            out.append(SentenceType(str(value).lower()))
        except ValueError:
            raise InputError(
                f"{where}: sentence_types entries must be "
                f"'simplification' or 'explanation', got {value!r}"
            ) from None
    return out


def summary_pair_from_json(obj: dict, where: str = "<record>") -> SummaryPair:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected a JSON object")
    if "id" not in obj or str(obj["id"]).strip() == "":
        raise InputError(f"{where}: missing or empty 'id'")
    for key in ("summary", "abstract"):
        if key not in obj:
            raise InputError(f"{where}: missing '{key}'")
    label = None
    if obj.get("label") is not None:
        if obj["label"] not in (0, 1):
            raise InputError(f"{where}: label must be 0 or 1, got {obj['label']!r}")
        label = int(obj["label"])
    types = None
    if obj.get("sentence_types") is not None:
        types = _parse_sentence_types(obj["sentence_types"], where)
    known = {"id", "summary", "abstract", "label", "sentence_types"}
    metadata = {k: v for k, v in obj.items() if k not in known}
    return SummaryPair(
        id=str(obj["id"]),
        summary_text=str(obj["summary"]),
        abstract_text=str(obj["abstract"]),
        gold_label=label,
        sentence_types=types,
        metadata=metadata,
    )


def summary_pair_to_json(pair: SummaryPair) -> dict:
    out: dict = {"id": pair.id, "summary": pair.summary_text, "abstract": pair.abstract_text}
    if pair.gold_label is not None:
        out["label"] = pair.gold_label
    if pair.sentence_types is not None:
        out["sentence_types"] = [t.value for t in pair.sentence_types]
    out.update(pair.metadata)
    return out


def read_summary_pairs(path: str | Path) -> Iterator[SummaryPair]:
    """Stream SummaryPairs from a JSONL file, enforcing unique non-empty ids."""
    seen: set[str] = set()
    path = Path(path)
    try:
        handle: IO[str] = path.open("r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read dataset {path}: {exc}") from exc
    with handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{where}: invalid JSON: {exc}") from exc
            pair = summary_pair_from_json(obj, where)
            if pair.id in seen:
                raise InputError(f"{where}: duplicate id {pair.id!r}")
            seen.add(pair.id)
            yield pair


def write_summary_pairs(path: str | Path, pairs: Iterable[SummaryPair]) -> int:
    count = 0
    with Path(path).open("w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(json.dumps(summary_pair_to_json(pair), ensure_ascii=False))
            handle.write("\n")
            count += 1
    return count
