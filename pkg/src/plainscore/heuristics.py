"""Deterministic local stand-ins for the neural pipeline stages.

These rules power both the offline modes (heuristic classifier, keyword
answer extraction) and the mock backend, so offline runs and mock-endpoint
runs behave identically. Everything is pure string computation.
"""

from __future__ import annotations

import re

from . import sentences
from .records import SentenceType
from .text import (
    is_content_token,
    content_token_set,
    token_weight,
    tokenize,
    tokenize_spans,
)

DEFAULT_SIMPLIFICATION_THRESHOLD = 0.35
MAX_KEYWORDS = 5
_ANSWER_WINDOW = 8          # max tokens in an extractive answer window
_SUPPORT_RADIUS = 4         # neighborhood checked around a candidate span

# Token gaps a keyphrase may bridge: whitespace, a decimal point between
# digits, hyphens, apostrophes.
_BRIDGE_RE = re.compile(r"^(\s+|[-–'’]|\.)$")


# ---------------------------------------------------------------------------
# Sentence-type heuristic
# ---------------------------------------------------------------------------

def abstract_sentence_token_sets(abstract: str) -> list[frozenset[str]]:
    return [content_token_set(u.text) for u in sentences.split_sentences(abstract)]


def heuristic_sentence_type(
    sentence: str,
    abstract: str,
    threshold: float = DEFAULT_SIMPLIFICATION_THRESHOLD,
) -> SentenceType:
    """Simplification when the sentence overlaps some abstract sentence enough.

    Overlap is content-token Jaccard with a containment floor: a sentence
    that fully contains an abstract sentence's tokens (or is fully contained
    in one) counts as derived from the abstract regardless of length ratio.
    Ties at the threshold resolve to Simplification.
    """
    sent_tokens = content_token_set(sentence)
    for abs_tokens in abstract_sentence_token_sets(abstract):
        union = sent_tokens | abs_tokens
        jaccard = len(sent_tokens & abs_tokens) / len(union) if union else 0.0
        if jaccard >= threshold:
            return SentenceType.SIMPLIFICATION
        if abs_tokens and abs_tokens <= sent_tokens:
            return SentenceType.SIMPLIFICATION
        if sent_tokens and sent_tokens <= abs_tokens:
            return SentenceType.SIMPLIFICATION
    return SentenceType.EXPLANATION


# ---------------------------------------------------------------------------
# Keyword answer extraction
# ---------------------------------------------------------------------------

def keyword_answers(sentence: str, limit: int = MAX_KEYWORDS) -> list[str]:
    """Top content keyphrases (1-3 tokens), highest frequency-weighted first.

    Candidates are runs of consecutive content tokens that bridge only
    whitespace, hyphens, apostrophes, or a decimal point. A candidate may not
    swallow every content token of a multi-token sentence (the induced
    question would be an empty shell). Selected spans do not overlap, and
    every returned phrase is a literal substring of the sentence.
    """
    spans = tokenize_spans(sentence)
    chunks: list[list[tuple[str, int, int]]] = []
    current: list[tuple[str, int, int]] = []
    for token, start, end in spans:
        is_content = is_content_token(token.lower())
        if not is_content:
            if current:
                chunks.append(current)
            current = []
            continue
        if current and not _BRIDGE_RE.match(sentence[current[-1][2]:start]):
            chunks.append(current)
            current = []
        current.append((token, start, end))
    if current:
        chunks.append(current)

    total_content = sum(len(chunk) for chunk in chunks)
    candidates = []  # (score, first_char, n, tok_start_idx, char_start, char_end)
    position = 0
    for chunk in chunks:
        for i in range(len(chunk)):
            for n in (1, 2, 3):
                if i + n > len(chunk):
                    break
                if n == total_content and total_content > 1:
                    continue
                piece = chunk[i:i + n]
                score = sum(token_weight(tok.lower()) for tok, _, _ in piece)
                candidates.append(
                    (score, piece[0][1], n, position + i, piece[0][1], piece[-1][2])
                )
        position += len(chunk)

    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    chosen: list[tuple[int, int]] = []
    texts: list[str] = []
    seen: set[str] = set()
    for _, _, n, tok_start, char_start, char_end in candidates:
        if len(texts) >= limit:
            break
        span = (tok_start, tok_start + n)
        if any(span[0] < b and a < span[1] for a, b in chosen):
            continue
        phrase = sentence[char_start:char_end]
        key = phrase.lower()
        if key in seen:
            continue
        chosen.append(span)
        seen.add(key)
        texts.append(phrase)
    return texts


# ---------------------------------------------------------------------------
# Template question generation
# ---------------------------------------------------------------------------

def template_question(sentence: str, answer: str) -> str:
    """Replace the first occurrence of the answer with "what" and ask it."""
    base = re.sub(r"[.!?]+$", "", sentence.strip())
    idx = base.lower().find(answer.lower())
    if idx < 0:
        return f"{base} refers to what?"
    return base[:idx] + "what" + base[idx + len(answer):] + "?"


# ---------------------------------------------------------------------------
# Extractive answering
# ---------------------------------------------------------------------------

_SEGMENT_BREAK_RE = re.compile(r"[.!?;:\n]")


def extractive_answer(question: str, context: str) -> str | None:
    """Best-effort extractive answer: the context span filling the question's gap.

    Candidate spans are runs of consecutive context tokens absent from the
    question, confined to one sentence of the context. Runs are ranked by how
    many distinct question content tokens appear near them in the same
    sentence, preferring shorter and earlier runs on ties. When the context
    repeats the question verbatim (no supported novel run), the window of at
    most eight tokens covering the most question content is returned instead.
    Returns None when the context shares no content token with the question.
    """
    question_tokens = set(tokenize(question))
    question_content = {t for t in question_tokens if is_content_token(t)}
    spans = tokenize_spans(context)
    if not spans:
        return None
    lowered = [tok.lower() for tok, _, _ in spans]
    if not question_content or not any(t in question_content for t in lowered):
        return None

    # Sentence segment id per token; a run and its support never cross one.
    segments = [0] * len(spans)
    for i in range(1, len(spans)):
        gap = context[spans[i - 1][2]:spans[i][1]]
        segments[i] = segments[i - 1] + (1 if _SEGMENT_BREAK_RE.search(gap) else 0)

    runs: list[tuple[int, int]] = []  # inclusive token index ranges
    start = None
    for i, tok in enumerate(lowered):
        novel = tok not in question_tokens
        if start is not None and (not novel or segments[i] != segments[start]):
            runs.append((start, i - 1))
            start = None
        if novel and start is None:
            start = i
    if start is not None:
        runs.append((start, len(lowered) - 1))

    def support(lo: int, hi: int) -> int:
        seen = set()
        j = lo - 1
        while j >= 0 and lo - j <= _SUPPORT_RADIUS and segments[j] == segments[lo]:
            seen.add(lowered[j])
            j -= 1
        j = hi + 1
        while j < len(spans) and j - hi <= _SUPPORT_RADIUS and segments[j] == segments[hi]:
            seen.add(lowered[j])
            j += 1
        return len(seen & question_content)

    scored = [(support(lo, hi), hi - lo, lo, hi) for lo, hi in runs]
    scored = [s for s in scored if s[0] > 0]
    if scored:
        _, _, lo, hi = min(scored, key=lambda s: (-s[0], s[1], s[2]))
        hi = min(hi, lo + _ANSWER_WINDOW - 1)
        return context[spans[lo][1]:spans[hi][2]]

    # Every context token near a match also occurs in the question: fall back
    # to the window covering the most distinct question content tokens.
    width = min(_ANSWER_WINDOW, len(lowered))
    best_start, best_cover = 0, -1
    for s in range(len(lowered) - width + 1):
        cover = len(set(lowered[s:s + width]) & question_content)
        if cover > best_cover:
            best_cover = cover
            best_start = s
    return context[spans[best_start][1]:spans[best_start + width - 1][2]]


# ---------------------------------------------------------------------------
# Faithfulness perturbation
# ---------------------------------------------------------------------------

_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_AUXILIARIES = (
    "is", "are", "was", "were", "has", "have", "had", "does", "do", "did",
    "can", "could", "will", "would", "may", "might", "must", "should",
)
_AUX_RE = re.compile(r"\b(" + "|".join(_AUXILIARIES) + r")\b", re.IGNORECASE)


def perturb_sentence(sentence: str) -> str:
    """Corrupt one fact: bump the first numeral by 5, else negate, else wrap."""
    match = _NUMBER_RE.search(sentence)
    if match:
        token = match.group(0)
        if "." in token:
            bumped = str(float(token) + 5)
        else:
            bumped = str(int(token) + 5)
        return sentence[:match.start()] + bumped + sentence[match.end():]
    aux = _AUX_RE.search(sentence)
    if aux:
        return sentence[:aux.end()] + " not" + sentence[aux.end():]
    body = sentence.strip()
    if body and body[0].isupper() and not body.isupper():
        body = body[0].lower() + body[1:]
    return "It is not the case that " + body


# ---------------------------------------------------------------------------
# Factuality judge
# ---------------------------------------------------------------------------

def judge_score(summary: str, abstract: str) -> int:
    """0-100 score: best content-token containment against any abstract sentence."""
    sent_tokens = content_token_set(summary)
    if not sent_tokens:
        return 0
    best = 0.0
    for abs_tokens in abstract_sentence_token_sets(abstract):
        denom = min(len(sent_tokens), len(abs_tokens))
        if denom == 0:
            continue
        best = max(best, len(sent_tokens & abs_tokens) / denom)
    return round(100 * best)
