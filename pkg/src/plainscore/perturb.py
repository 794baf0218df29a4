"""Non-factual twin generation via the faithfulness perturbation prompt."""

from __future__ import annotations

from typing import Iterable, Iterator

from .backend import ModelClient
from .errors import PerturbationError
from .prompts import FAITHFULNESS_PERTURBER, render_prompt
from .records import SummaryPair
from .sentences import split_sentences

PERTURBED_ID_SUFFIX = "-perturbed"


def _perturb_sentence(text: str, client: ModelClient) -> str:
    system_text, user_text = render_prompt(
        FAITHFULNESS_PERTURBER, {"input": text, "sentence": ""}
    )
    for _ in range(2):  # one re-request when the perturber echoes its input
        result = client.complete(system_text, user_text).strip()
        if result and result != text:
            return result
    raise PerturbationError(f"perturber returned its input verbatim twice: {text[:80]!r}")


def perturb_summary(pair: SummaryPair, client: ModelClient) -> SummaryPair:
    """Build the non-factual twin: every sentence perturbed, label 0."""
    units = split_sentences(pair.summary_text)
    if not units:
        raise PerturbationError(f"summary {pair.id!r} has no sentences to perturb")
    perturbed = []
    for unit in units:
        try:
            perturbed.append(_perturb_sentence(unit.text, client))
        except PerturbationError as exc:
            raise PerturbationError(f"summary {pair.id!r}, sentence {unit.index}: {exc}") from exc
    metadata = dict(pair.metadata)
    metadata["provenance"] = "perturbed"
    metadata["source_id"] = pair.id
    return SummaryPair(
        id=pair.id + PERTURBED_ID_SUFFIX,
        summary_text=" ".join(perturbed),
        abstract_text=pair.abstract_text,
        gold_label=0,
        sentence_types=pair.sentence_types,
        metadata=metadata,
    )


def perturb_dataset(
    pairs: Iterable[SummaryPair], client: ModelClient
) -> Iterator[SummaryPair]:
    for pair in pairs:
        yield perturb_summary(pair, client)
