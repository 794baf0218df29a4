"""Retrieval-augmented QA factual consistency scoring for plain-language
summaries, plus the benchmark harness used to validate such metrics."""

__version__ = "0.1.0"

from .aggregate import aggregate_score
from .backend import BackendProfile, ModelClient, RetryPolicy, mock_profile
from .bootstrap import bootstrap_auc_ci, holm_bonferroni, paired_bootstrap_test
from .classify import ClassifierMode, classify_sentence, classify_summary
from .config import RunConfig, load_config
from .context import compose_source_context
from .corpus import Chunk, CorpusDocument, CorpusStyle, chunk_hierarchical, chunk_textbook_style
from .pipeline import PipelineRuntime, build_runtime, score_dataset, score_pair
from .qa import (
    AnswerExtractionMode,
    OverlapKind,
    answer_question,
    extract_answers,
    filter_questions,
    generate_questions,
    score_overlap,
    score_sentence,
)
from .records import (
    ClassifierSource,
    QAItem,
    ScoreReport,
    SentenceType,
    SentenceUnit,
    SummaryPair,
    read_summary_pairs,
    write_summary_pairs,
)
from .sentences import split_sentences
from .stats import aggregate_summary_labels, auc_roc, kendall_tau_b, pearson_r
from .vindex import RetrievalHit, Retriever, VectorIndex, build_index, search_top_k

__all__ = [
    "aggregate_score",
    "aggregate_summary_labels",
    "answer_question",
    "auc_roc",
    "AnswerExtractionMode",
    "BackendProfile",
    "bootstrap_auc_ci",
    "build_index",
    "build_runtime",
    "Chunk",
    "chunk_hierarchical",
    "chunk_textbook_style",
    "ClassifierMode",
    "ClassifierSource",
    "classify_sentence",
    "classify_summary",
    "compose_source_context",
    "CorpusDocument",
    "CorpusStyle",
    "extract_answers",
    "filter_questions",
    "generate_questions",
    "holm_bonferroni",
    "kendall_tau_b",
    "load_config",
    "mock_profile",
    "ModelClient",
    "OverlapKind",
    "paired_bootstrap_test",
    "pearson_r",
    "PipelineRuntime",
    "QAItem",
    "read_summary_pairs",
    "RetrievalHit",
    "Retriever",
    "RetryPolicy",
    "RunConfig",
    "ScoreReport",
    "score_dataset",
    "score_overlap",
    "score_pair",
    "score_sentence",
    "search_top_k",
    "SentenceType",
    "SentenceUnit",
    "split_sentences",
    "SummaryPair",
    "VectorIndex",
    "write_summary_pairs",
]
