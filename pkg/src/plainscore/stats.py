"""Correlation and discrimination statistics with explicit tie handling."""

from __future__ import annotations

import numpy as np

from .errors import UndefinedStatisticError


def _paired_arrays(x, y) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or ya.ndim != 1 or xa.shape != ya.shape:
        raise UndefinedStatisticError("inputs must be 1-D arrays of equal length")
    if xa.shape[0] < 2:
        raise UndefinedStatisticError("need at least two observations")
    return xa, ya


def kendall_tau_b(x, y) -> float:
    """Kendall's tau-b: (C - D) / sqrt((n0 - t_x) * (n0 - t_y)).

    n0 = n(n-1)/2; t_x and t_y count pairs tied in x and in y. Raises when
    every pair is tied in either variable.
    """
    xa, ya = _paired_arrays(x, y)
    dx = np.sign(xa[:, None] - xa[None, :])
    dy = np.sign(ya[:, None] - ya[None, :])
    upper = np.triu_indices(xa.shape[0], k=1)
    products = dx[upper] * dy[upper]
    concordant_minus_discordant = float(np.sum(products))
    n0 = xa.shape[0] * (xa.shape[0] - 1) / 2
    ties_x = float(np.sum(dx[upper] == 0))
    ties_y = float(np.sum(dy[upper] == 0))
    denom_x = n0 - ties_x
    denom_y = n0 - ties_y
    if denom_x <= 0 or denom_y <= 0:
        raise UndefinedStatisticError("tau-b undefined: all pairs tied in one variable")
    return concordant_minus_discordant / float(np.sqrt(denom_x * denom_y))


def pearson_r(x, y) -> float:
    """Sample Pearson correlation; raises on zero variance."""
    xa, ya = _paired_arrays(x, y)
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    denom = float(np.sqrt(np.sum(xc * xc) * np.sum(yc * yc)))
    if denom == 0.0:
        raise UndefinedStatisticError("pearson undefined: zero variance")
    return float(np.sum(xc * yc)) / denom


def _check_binary_labels(labels: np.ndarray) -> None:
    values = set(np.unique(labels).tolist())
    if not values <= {0.0, 1.0}:
        raise UndefinedStatisticError(f"labels must be binary 0/1, got {sorted(values)}")
    if values != {0.0, 1.0}:
        raise UndefinedStatisticError("AUC undefined: both classes must be present")


def auc_roc(scores, labels) -> float:
    """Probability a random positive outscores a random negative; ties at 0.5.

    Computed from midranks: (sum of positive ranks - n_pos(n_pos+1)/2)
    / (n_pos * n_neg), which equals the tie-corrected Mann-Whitney statistic.
    """
    sa = np.asarray(scores, dtype=np.float64)
    la = np.asarray(labels, dtype=np.float64)
    if sa.shape != la.shape or sa.ndim != 1:
        raise UndefinedStatisticError("scores and labels must be 1-D and equal length")
    _check_binary_labels(la)
    order = np.argsort(sa, kind="mergesort")
    ranks = np.empty(sa.shape[0], dtype=np.float64)
    ranks[order] = np.arange(1, sa.shape[0] + 1)
    # Average ranks within tie groups.
    sorted_scores = sa[order]
    i = 0
    while i < sorted_scores.shape[0]:
        j = i
        while j + 1 < sorted_scores.shape[0] and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        if j > i:
            ranks[order[i:j + 1]] = (i + j + 2) / 2
        i = j + 1
    n_pos = int(np.sum(la == 1))
    n_neg = int(np.sum(la == 0))
    rank_sum = float(np.sum(ranks[la == 1]))
    return (rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def aggregate_summary_labels(sentence_labels) -> int:
    """A summary is non-factual (0) when any sentence label is non-factual."""
    labels = list(sentence_labels)
    if not labels:
        raise UndefinedStatisticError("cannot aggregate an empty label list")
    for label in labels:
        if label not in (0, 1):
            raise UndefinedStatisticError(f"labels must be 0 or 1, got {label!r}")
    return 0 if any(label == 0 for label in labels) else 1
