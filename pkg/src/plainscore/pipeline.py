"""Per-summary scoring pipeline: classify, retrieve, ask, answer, aggregate."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from . import qa
from .aggregate import aggregate_score
from .backend import ModelClient
from .classify import ClassifierMode, classify_summary
from .config import RunConfig
from .context import DEFAULT_CONTEXT_BUDGET, compose_source_context
from .errors import InputError
from .heuristics import DEFAULT_SIMPLIFICATION_THRESHOLD
from .records import (
    QAItem,
    ScoreReport,
    SentenceTrace,
    SentenceType,
    SummaryPair,
)
from .vindex import Retriever, load_index_dir

logger = logging.getLogger(__name__)


@dataclass
class PipelineRuntime:
    """Resolved clients and knobs for scoring one dataset."""

    classifier_mode: ClassifierMode
    classifier_client: ModelClient | None
    ae_mode: qa.AnswerExtractionMode
    ae_client: ModelClient | None
    qg_client: ModelClient
    qa_client: ModelClient
    embed_client: ModelClient | None
    retriever: Retriever | None = None
    overlap_kind: qa.OverlapKind = qa.OverlapKind.LEXICAL_F1
    qf_enabled: bool = True
    heuristic_threshold: float = DEFAULT_SIMPLIFICATION_THRESHOLD
    context_budget: int = DEFAULT_CONTEXT_BUDGET
    k: int = 3


def build_runtime(config: RunConfig, index_path: str | None = None) -> PipelineRuntime:
    """Resolve a RunConfig into clients, retrieval, and scoring knobs.

    A real HTTP classifier endpoint without a built index is a startup
    error: explanation sentences would silently lose their evidence. Mock
    and heuristic classifiers only log a warning so offline runs stay easy.
    """

    def client_for(role: str) -> ModelClient | None:
        setting = config.backends[role]
        if setting.is_local:
            return None
        return ModelClient(
            setting.profile,
            embed_dimension=config.retrieval.embed_dimension,
            mock_seed=config.mock_seed,
        )

    classifier_setting = config.backends["classifier"]
    classifier_mode = (
        ClassifierMode.HEURISTIC if classifier_setting.is_local else ClassifierMode.ENDPOINT
    )
    ae_setting = config.backends["answer_extractor"]
    ae_mode = (
        qa.AnswerExtractionMode.KEYWORD if ae_setting.is_local
        else qa.AnswerExtractionMode.ENDPOINT
    )
    embed_client = client_for("embedder")

    retriever = None
    resolved_index = index_path or config.retrieval.index_path
    if resolved_index is not None:
        if not Path(resolved_index).exists():
            raise InputError(f"index directory does not exist: {resolved_index}")
        index, chunks_by_id, _ = load_index_dir(
            resolved_index, expected_dimension=config.retrieval.embed_dimension
        )
        retriever = Retriever(index, chunks_by_id, embed_client, k=config.retrieval.k)
    elif classifier_setting.kind == "endpoint":
        raise InputError(
            "an endpoint classifier is configured but no index is built; "
            "run the index command first or set retrieval.index_path"
        )
    else:
        logger.warning(
            "no retrieval index configured; explanation sentences will be "
            "scored against the abstract alone"
        )

    return PipelineRuntime(
        classifier_mode=classifier_mode,
        classifier_client=client_for("classifier"),
        ae_mode=ae_mode,
        ae_client=client_for("answer_extractor"),
        qg_client=client_for("question_generator"),
        qa_client=client_for("question_answerer"),
        embed_client=embed_client,
        retriever=retriever,
        overlap_kind=qa.OverlapKind(config.scoring.overlap),
        qf_enabled=config.scoring.qf_enabled,
        heuristic_threshold=config.scoring.heuristic_threshold,
        context_budget=config.retrieval.context_budget_chars,
        k=config.retrieval.k,
    )


def _score_sentence_items(
    runtime: PipelineRuntime,
    sentence_text: str,
    sentence_type: SentenceType,
    abstract: str,
) -> tuple[list[QAItem], list[str], float | None]:
    answers = qa.extract_answers(sentence_text, runtime.ae_mode, runtime.ae_client)
    items = qa.generate_questions(sentence_text, answers, runtime.qg_client)
    qa.filter_questions(sentence_text, items, runtime.qa_client, runtime.qf_enabled)

    snippet_ids: list[str] = []
    hits = []
    if sentence_type is SentenceType.EXPLANATION and runtime.retriever is not None:
        hits = runtime.retriever.search(sentence_text, runtime.k)
        snippet_ids = [hit.chunk.chunk_id for hit in hits]
    source = compose_source_context(sentence_type, abstract, hits, runtime.context_budget)

    if not source.strip():
        # No source to verify against: the sentence stays Unscored rather
        # than being punished for a missing abstract.
        for item in items:
            if not item.filtered:
                item.filtered = True
                item.filter_reason = qa.REASON_EMPTY_SOURCE
        return items, snippet_ids, None

    for item in items:
        if item.filtered or item.question is None:
            continue
        item.predicted_answer = qa.answer_question(item.question, source, runtime.qa_client)
        if item.predicted_answer is not None:
            item.overlap = qa.score_overlap(
                item.gold_answer, item.predicted_answer,
                runtime.overlap_kind, runtime.embed_client,
            )
    return items, snippet_ids, qa.score_sentence(items)


def score_pair(pair: SummaryPair, runtime: PipelineRuntime) -> ScoreReport:
    """Score one summary-abstract pair and return its full breakdown."""
    units = classify_summary(
        pair, runtime.classifier_mode, runtime.classifier_client,
        runtime.heuristic_threshold,
    )
    details: list[SentenceTrace] = []
    sums = {SentenceType.SIMPLIFICATION: 0.0, SentenceType.EXPLANATION: 0.0}
    scored = {SentenceType.SIMPLIFICATION: 0, SentenceType.EXPLANATION: 0}
    totals = {SentenceType.SIMPLIFICATION: 0, SentenceType.EXPLANATION: 0}

    for unit in units:
        kind = unit.sentence_type
        totals[kind] += 1
        items, snippet_ids, sentence_score = _score_sentence_items(
            runtime, unit.text, kind, pair.abstract_text
        )
        if sentence_score is not None:
            sums[kind] += sentence_score
            scored[kind] += 1
        details.append(
            SentenceTrace(
                index=unit.index,
                text=unit.text,
                sentence_type=kind.value,
                classifier_source=unit.classifier_source.value if unit.classifier_source else None,
                score=sentence_score,
                snippet_ids=snippet_ids,
                items=items,
            )
        )

    n_s_scored = scored[SentenceType.SIMPLIFICATION]
    n_e_scored = scored[SentenceType.EXPLANATION]
    s_avg = min(1.0, sums[SentenceType.SIMPLIFICATION] / n_s_scored) if n_s_scored else None
    e_avg = min(1.0, sums[SentenceType.EXPLANATION] / n_e_scored) if n_e_scored else None
    return ScoreReport(
        summary_id=pair.id,
        s_avg=s_avg,
        e_avg=e_avg,
        n_s=totals[SentenceType.SIMPLIFICATION],
        n_e=totals[SentenceType.EXPLANATION],
        n_s_scored=n_s_scored,
        n_e_scored=n_e_scored,
        final_score=aggregate_score(s_avg, n_s_scored, e_avg, n_e_scored),
        sentence_details=details,
    )


def score_dataset(
    pairs: Iterable[SummaryPair],
    runtime: PipelineRuntime,
    jobs: int = 1,
) -> Iterator[ScoreReport]:
    """Score pairs, yielding reports in input order with bounded memory.

    With jobs > 1 a window of at most 2 * jobs summaries is in flight at any
    time; reassembly is by input index, so output order never depends on
    completion order.
    """
    if jobs <= 1:
        for pair in pairs:
            yield score_pair(pair, runtime)
        return
    window = 2 * jobs
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        pending = {}
        next_to_yield = 0
        submitted = 0
        iterator = iter(pairs)
        exhausted = False
        while not exhausted or pending:
            while not exhausted and len(pending) < window:
                try:
                    pair = next(iterator)
                except StopIteration:
                    exhausted = True
                    break
                pending[submitted] = pool.submit(score_pair, pair, runtime)
                submitted += 1
            if next_to_yield in pending:
                yield pending.pop(next_to_yield).result()
                next_to_yield += 1
