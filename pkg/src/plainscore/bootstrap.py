"""Bootstrap confidence intervals, paired significance tests, Holm correction.

Each replicate draws its randomness from (seed, replicate_index), so serial
and parallel execution produce identical results and any replicate can be
recomputed in isolation. Resamples that lose one class are redrawn within
the same replicate stream, keeping the replicate count exact.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolationError, UndefinedStatisticError
from .stats import auc_roc

DEFAULT_REPLICATES = 10_000
DEFAULT_CI_LEVEL = 0.99
DEFAULT_ALPHA = 0.01
_MAX_REDRAWS = 10_000


def _replicate_indices(seed: int, replicate: int, n: int, labels: np.ndarray) -> np.ndarray:
    rng = np.random.default_rng([int(seed), int(replicate)])
    for _ in range(_MAX_REDRAWS):
        idx = rng.integers(0, n, size=n)
        resampled = labels[idx]
        if resampled.min() != resampled.max():
            return idx
    raise UndefinedStatisticError(
        "could not draw a two-class resample; labels are too imbalanced"
    )


def bootstrap_auc_ci(
    scores,
    labels,
    replicates: int = DEFAULT_REPLICATES,
    level: float = DEFAULT_CI_LEVEL,
    seed: int = 0,
) -> tuple[float, float]:
    """Percentile bootstrap interval for AUC-ROC at the given level."""
    if not 0.0 < level < 1.0:
        raise ContractViolationError(f"CI level must be in (0, 1), got {level}")
    if replicates < 1:
        raise ContractViolationError("replicates must be >= 1")
    sa = np.asarray(scores, dtype=np.float64)
    la = np.asarray(labels, dtype=np.float64)
    auc_roc(sa, la)  # validates shapes, binary labels, both classes present
    stats = np.empty(replicates, dtype=np.float64)
    for i in range(replicates):
        idx = _replicate_indices(seed, i, sa.shape[0], la)
        stats[i] = auc_roc(sa[idx], la[idx])
    lo = float(np.quantile(stats, (1 - level) / 2))
    hi = float(np.quantile(stats, 1 - (1 - level) / 2))
    return lo, hi


def paired_bootstrap_test(
    scores_a,
    scores_b,
    labels,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
) -> float:
    """One-sided p for "A beats B" on AUC: p = Pr(delta <= 0) over replicates.

    Both metrics are resampled with the same index multiset per replicate;
    delta = AUC_a - AUC_b, and replicates with delta exactly 0 count toward p.
    """
    sa = np.asarray(scores_a, dtype=np.float64)
    sb = np.asarray(scores_b, dtype=np.float64)
    la = np.asarray(labels, dtype=np.float64)
    if sa.shape != sb.shape:
        raise ContractViolationError("paired test requires equal-length score lists")
    auc_roc(sa, la)
    auc_roc(sb, la)
    if replicates < 1:
        raise ContractViolationError("replicates must be >= 1")
    at_or_below_zero = 0
    for i in range(replicates):
        idx = _replicate_indices(seed, i, sa.shape[0], la)
        delta = auc_roc(sa[idx], la[idx]) - auc_roc(sb[idx], la[idx])
        if delta <= 0:
            at_or_below_zero += 1
    return at_or_below_zero / replicates


def holm_bonferroni(
    p_values,
    alpha: float = DEFAULT_ALPHA,
) -> list[tuple[float, bool]]:
    """Step-down Holm correction; returns (p_adjusted, rejected) per input.

    Adjusted p at sorted position i is max over j <= i of min(1, (m-j)*p_(j))
    (0-based j), which makes adjusted values non-decreasing along the sorted
    order. Rejection walks that order while p_adjusted < alpha and stops at
    the first failure.
    """
    p = list(p_values)
    for value in p:
        if not 0.0 <= value <= 1.0:
            raise ContractViolationError(f"p-values must lie in [0, 1], got {value}")
    m = len(p)
    if m == 0:
        return []
    order = sorted(range(m), key=lambda i: p[i])
    adjusted = [0.0] * m
    running = 0.0
    for pos, idx in enumerate(order):
        running = max(running, min(1.0, (m - pos) * p[idx]))
        adjusted[idx] = running
    rejected = [False] * m
    for idx in order:
        if adjusted[idx] < alpha:
            rejected[idx] = True
        else:
            break
    return list(zip(adjusted, rejected))
