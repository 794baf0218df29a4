"""Rule-based sentence segmentation.

Whitespace is normalized first, then the text is split after terminal
punctuation runs. A period never ends a sentence when it belongs to a known
abbreviation, a single initial, or a decimal number (decimals are safe by
construction because a boundary requires whitespace after the terminator).
Joining the output with single spaces reproduces the normalized input.
"""

from __future__ import annotations

import re

from .records import SentenceUnit
from .text import normalize_whitespace

# Terminal punctuation run plus any closing quotes/brackets that belong to it.
_TERMINAL_RE = re.compile(r"([.!?]+)([\"'”’)\]]*)")

# A sentence may only start with an uppercase letter, a digit, or an opener.
_SENTENCE_OPENERS = re.compile(r"[A-Z0-9\"'“‘(\[]")

_LEADING_PUNCT = "\"'“‘([{"

# Lowercased tokens whose trailing period is not a sentence boundary.
ABBREVIATIONS = frozenset({
    "e.g.", "i.e.", "etc.", "vs.", "cf.", "ca.", "al.", "et al.",
    "dr.", "mr.", "mrs.", "ms.", "prof.", "st.", "jr.", "sr.",
    "fig.", "figs.", "no.", "nos.", "vol.", "vols.", "pp.", "p.",
    "approx.", "dept.", "univ.", "ed.", "eds.", "inc.", "ltd.", "co.",
})


def _abbreviation_before(text: str, end: int) -> bool:
    """True when the token ending at ``end`` must not close a sentence."""
    token = text[:end].rsplit(" ", 1)[-1].lstrip(_LEADING_PUNCT)
    lowered = token.lower()
    if lowered in ABBREVIATIONS:
        return True
    # Two-word abbreviations such as "et al."
    parts = text[:end].split(" ")
    if len(parts) >= 2:
        two = " ".join(parts[-2:]).lstrip(_LEADING_PUNCT).lower()
        if two in ABBREVIATIONS:
            return True
    # Single initials: "A." in "John A. Smith"
    return len(lowered) == 2 and lowered[0].isalpha() and lowered[1] == "."


def split_sentences(text: str) -> list[SentenceUnit]:
    """Segment ``text`` into sentence units with contiguous 0-based indices.

    Empty or whitespace-only input yields an empty list. Sentence types are
    left unset; classification assigns them later.
    """
    normalized = normalize_whitespace(text)
    if not normalized:
        return []
    boundaries: list[int] = []
    for match in _TERMINAL_RE.finditer(normalized):
        end = match.end()
        if end >= len(normalized) or normalized[end] != " ":
            continue
        if end + 1 >= len(normalized):
            continue
        if not _SENTENCE_OPENERS.match(normalized[end + 1]):
            continue
        if match.group(1) == "." and _abbreviation_before(normalized, match.end(1)):
            continue
        boundaries.append(end)
    pieces = []
    start = 0
    for cut in boundaries:
        pieces.append(normalized[start:cut])
        start = cut + 1  # consume exactly the single separating space
    pieces.append(normalized[start:])
    return [SentenceUnit(index=i, text=piece) for i, piece in enumerate(pieces)]
