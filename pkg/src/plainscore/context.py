"""Source context composition for the QA stage.

Simplification sentences are answered against the abstract alone.
Explanation sentences get the abstract first, then retrieved snippets in
rank order, each prefixed by its title and separated by blank lines. The
result never exceeds the character budget and the abstract is never evicted
in favor of snippets.
"""

from __future__ import annotations

from .errors import ContractViolationError
from .records import SentenceType
from .vindex import RetrievalHit

DEFAULT_CONTEXT_BUDGET = 2048  # ~512 tokens at 4 chars/token


def compose_source_context(
    sentence_type: SentenceType,
    abstract: str,
    hits: list[RetrievalHit],
    budget: int = DEFAULT_CONTEXT_BUDGET,
) -> str:
    if budget <= 0:
        raise ContractViolationError("context budget must be positive")
    text = abstract[:budget]
    if sentence_type is SentenceType.SIMPLIFICATION:
        return text
    for hit in hits:
        remaining = budget - len(text)
        if remaining <= 0:
            break
        block = "\n\n" + hit.chunk.title + "\n" + hit.chunk.content
        text += block[:remaining]
    return text
