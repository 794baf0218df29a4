"""Weighted aggregation of per-class sentence score averages.

The final score weights the simplification and explanation class averages by
their scored-sentence counts. A class with zero scored sentences must carry
an Unscored (None) average; a summary with no scored sentences at all is
Unscored, never 0.
"""

from __future__ import annotations

from .errors import ContractViolationError


def _check_average(name: str, value: float | None, count: int) -> None:
    if count < 0:
        raise ContractViolationError(f"{name}: negative count {count}")
    if count == 0 and value is not None:
        raise ContractViolationError(f"{name}: average given for zero scored sentences")
    if count > 0:
        if value is None:
            raise ContractViolationError(f"{name}: {count} scored sentences but no average")
        if not 0.0 <= value <= 1.0:
            raise ContractViolationError(f"{name}: average {value} outside [0, 1]")


def aggregate_score(
    s_avg: float | None,
    n_s: int,
    e_avg: float | None,
    n_e: int,
) -> float | None:
    """Count-weighted mean of the scored class averages.

    ``n_s``/``n_e`` are the numbers of scored sentences per class. With one
    scored class the result is that class average; with none it is None.
    """
    _check_average("simplification", s_avg, n_s)
    _check_average("explanation", e_avg, n_e)
    if n_s + n_e == 0:
        return None
    if s_avg is None:
        return e_avg
    if e_avg is None:
        return s_avg
    return (s_avg * n_s + e_avg * n_e) / (n_s + n_e)
