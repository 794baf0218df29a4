"""Dataset-level evaluation: correlations, AUC with CIs, paired significance.

Metric scores are compared against the dataset's binary gold labels
(1 = factual). The primary metric is additionally tested against every
baseline with a paired bootstrap on the AUC difference, Holm-Bonferroni
corrected across baselines. Reports are emitted as one JSON document (with
the resolved config embedded) and a CSV summary.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .bootstrap import (
    DEFAULT_ALPHA,
    DEFAULT_CI_LEVEL,
    DEFAULT_REPLICATES,
    bootstrap_auc_ci,
    holm_bonferroni,
    paired_bootstrap_test,
)
from .errors import InputError
from .records import SummaryPair
from .stats import auc_roc, kendall_tau_b, pearson_r


@dataclass
class EvalRun:
    dataset_id: str
    metric_name: str
    scores: list[float]
    labels: list[int]
    tau: float
    pearson: float
    auc: float
    ci_lo: float
    ci_hi: float
    ci_level: float
    seed: int
    replicates: int

    def to_json(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "metric": self.metric_name,
            "tau": self.tau,
            "pearson": self.pearson,
            "auc": self.auc,
            "auc_ci": {"lo": self.ci_lo, "hi": self.ci_hi, "level": self.ci_level},
            "seed": self.seed,
            "replicates": self.replicates,
            "scores": self.scores,
            "labels": self.labels,
        }


@dataclass
class Comparison:
    baseline_name: str
    delta_auc: float
    p_raw: float
    p_adjusted: float
    rejected: bool

    def to_json(self) -> dict:
        return {
            "baseline": self.baseline_name,
            "delta_auc": self.delta_auc,
            "p_raw": self.p_raw,
            "p_adjusted": self.p_adjusted,
            "rejected": self.rejected,
        }


@dataclass
class SignificanceResult:
    alpha: float
    comparisons: list[Comparison] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "comparisons": [c.to_json() for c in self.comparisons],
        }


def check_coverage(metric_name: str, scores: dict[str, float], ids: list[str]) -> None:
    missing = [i for i in ids if i not in scores]
    if missing:
        shown = ", ".join(missing[:10])
        suffix = "" if len(missing) <= 10 else f" (+{len(missing) - 10} more)"
        raise InputError(
            f"metric {metric_name!r} is missing scores for {len(missing)} ids: {shown}{suffix}"
        )


def run_benchmark(
    dataset_id: str,
    pairs: list[SummaryPair],
    primary: tuple[str, dict[str, float]],
    baselines: list[tuple[str, dict[str, float]]] | None = None,
    replicates: int = DEFAULT_REPLICATES,
    ci_level: float = DEFAULT_CI_LEVEL,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
) -> tuple[list[EvalRun], SignificanceResult]:
    """Evaluate the primary metric and baselines against gold labels."""
    baselines = baselines or []
    if not pairs:
        raise InputError("cannot evaluate an empty dataset")
    names = [primary[0]] + [name for name, _ in baselines]
    if len(set(names)) != len(names):
        raise InputError(f"metric names must be unique, got {names}")
    unlabeled = [p.id for p in pairs if p.gold_label is None]
    if unlabeled:
        raise InputError(
            f"{len(unlabeled)} summaries have no gold label, e.g. {unlabeled[:5]}"
        )
    ids = [p.id for p in pairs]
    labels = [int(p.gold_label) for p in pairs]

    runs: list[EvalRun] = []
    vectors: dict[str, list[float]] = {}
    for name, scores in [primary] + baselines:
        check_coverage(name, scores, ids)
        vector = [float(scores[i]) for i in ids]
        vectors[name] = vector
        lo, hi = bootstrap_auc_ci(vector, labels, replicates, ci_level, seed)
        runs.append(
            EvalRun(
                dataset_id=dataset_id,
                metric_name=name,
                scores=vector,
                labels=labels,
                tau=kendall_tau_b(vector, labels),
                pearson=pearson_r(vector, labels),
                auc=auc_roc(vector, labels),
                ci_lo=lo,
                ci_hi=hi,
                ci_level=ci_level,
                seed=seed,
                replicates=replicates,
            )
        )

    primary_name = primary[0]
    primary_auc = runs[0].auc
    p_raws = [
        paired_bootstrap_test(vectors[primary_name], vectors[name], labels, replicates, seed)
        for name, _ in baselines
    ]
    corrected = holm_bonferroni(p_raws, alpha)
    comparisons = [
        Comparison(
            baseline_name=name,
            delta_auc=primary_auc - runs[1 + i].auc,
            p_raw=p_raws[i],
            p_adjusted=corrected[i][0],
            rejected=corrected[i][1],
        )
        for i, (name, _) in enumerate(baselines)
    ]
    return runs, SignificanceResult(alpha=alpha, comparisons=comparisons)


# -- report emission -----------------------------------------------------------

def write_report_json(
    path: str | Path,
    runs: list[EvalRun],
    significance: SignificanceResult,
    config_echo: dict,
) -> None:
    document = {
        "report": "plainscore-evaluation/1",
        "config": config_echo,
        "metrics": [run.to_json() for run in runs],
        "significance": significance.to_json(),
    }
    Path(path).write_text(
        json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def write_report_csv(
    path: str | Path,
    runs: list[EvalRun],
    significance: SignificanceResult,
) -> None:
    by_baseline = {c.baseline_name: c for c in significance.comparisons}
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["metric", "tau", "pearson", "auc", "ci_lo", "ci_hi", "p_raw", "p_adj", "rejected"]
        )
        for run in runs:
            comparison = by_baseline.get(run.metric_name)
            writer.writerow(
                [
                    run.metric_name,
                    f"{run.tau:.6f}",
                    f"{run.pearson:.6f}",
                    f"{run.auc:.6f}",
                    f"{run.ci_lo:.6f}",
                    f"{run.ci_hi:.6f}",
                    f"{comparison.p_raw:.6f}" if comparison else "",
                    f"{comparison.p_adjusted:.6f}" if comparison else "",
                    ("true" if comparison.rejected else "false") if comparison else "",
                ]
            )


def read_score_csv(path: str | Path) -> dict[str, float]:
    """Read a metric score file: CSV with header id,score."""
    path = Path(path)
    try:
        handle = path.open("r", encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot read score file {path}: {exc}") from exc
    scores: dict[str, float] = {}
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["id", "score"]:
            raise InputError(f"{path}: expected CSV header 'id,score'")
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) < 2 or not row[1].strip():
                raise InputError(f"{path}:{lineno}: missing score for id {row[0]!r}")
            try:
                scores[row[0]] = float(row[1])
            except ValueError:
                raise InputError(f"{path}:{lineno}: score {row[1]!r} is not a number") from None
    return scores


def write_score_csv(path: str | Path, scores: list[tuple[str, float | None]]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["id", "score"])
        for summary_id, score in scores:
            writer.writerow([summary_id, "" if score is None else f"{score:.6f}"])
