"""Tokenization, normalization, and lexical overlap primitives.

Everything here is pure and deterministic; the rest of the package builds
its offline behaviors (heuristic classification, keyword extraction,
extractive mock QA, lexical F1 scoring) on these functions.
"""

from __future__ import annotations

import re
from collections import Counter

_WORD_RE = re.compile(r"\w+(?:'\w+)?")
_ARTICLES = ("a", "an", "the")

# Compact English stopword list. Question words are included on purpose:
# the extractive answerer must treat "what"/"which"/... as non-content.
STOPWORDS = frozenset("""
a about above after again against all also am an and any are as at be because
been before being below between both but by can cannot could did do does doing
down during each few for from further had has have having he her here hers
herself him himself his how i if in into is it its itself just me might more
most must my myself no nor not now of off on once only or other our ours
ourselves out over own same shall she should so some such than that the their
theirs them themselves then there these they this those through to too under
until up upon very was we were what when where whether which while who whom why
will with within without would you your yours yourself yourselves
""".split())

# Frequent general-English words (beyond stopwords). Used to down-weight
# unremarkable tokens when ranking keyword candidates; domain terms and
# numerals are absent by construction and keep full weight.
COMMON_WORDS = frozenset("""
able age air area art ask back bad based become begin best better big book boy
business call car care case change child children city class college come
community company compare control country course day days death different door
early education effect end even experience eye face fact family far father feel
field find first following foot force found friend game get girl give go good
great group guy hand happen head health help high history home hour house idea
important include increase information interest issue job keep kind know large
last late law lead leave level life like line little long look lot low make man
many market may mean member mind minute moment money month morning mother move
much music name nation need never new next night number often old open order
own part party people person place plan point policy power president problem
process program provide public put question rather real really reason report
result right room run say school second see seem sense service set show side
small social something state still story student study system take talk teacher
team tell thing think those though thought time today together try turn two
understand use used want war water way week well woman word words work world
write year years young
""".split())

COMMON_WORD_WEIGHT = 0.3


def normalize_whitespace(text: str) -> str:
    """Collapse every whitespace run to a single space and strip the ends."""
    return " ".join(text.split())


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens; internal apostrophes stay inside a token."""
    return [m.group(0).lower() for m in _WORD_RE.finditer(text)]


def tokenize_spans(text: str) -> list[tuple[str, int, int]]:
    """Word tokens with original casing and (start, end) character offsets."""
    return [(m.group(0), m.start(), m.end()) for m in _WORD_RE.finditer(text)]


def is_content_token(token: str) -> bool:
    """Stopwords and single alphabetic characters (abbreviation fragments,
    initials) carry no content; single digits can ("group 2" stays)."""
    return token not in STOPWORDS and not (len(token) == 1 and token.isalpha())


def content_tokens(text: str) -> list[str]:
    """Lowercased content tokens; duplicates preserved."""
    return [t for t in tokenize(text) if is_content_token(t)]


def content_token_set(text: str) -> frozenset[str]:
    return frozenset(content_tokens(text))


def token_weight(token: str) -> float:
    return COMMON_WORD_WEIGHT if token in COMMON_WORDS else 1.0


def normalized_answer_tokens(text: str) -> list[str]:
    """Lowercase, strip punctuation, and drop articles before token F1."""
    text = re.sub(r"[^\w\s]", " ", text.lower())
    return [t for t in text.split() if t not in _ARTICLES]


def lexical_f1(gold: str, predicted: str) -> float:
    """Token-level F1 between two strings after answer normalization.

    Token multiplicity counts, so repeated words must be matched repeatedly.
    If either side normalizes to nothing, the score is 1.0 when both do and
    0.0 otherwise.
    """
    gold_counts = Counter(normalized_answer_tokens(gold))
    pred_counts = Counter(normalized_answer_tokens(predicted))
    if not gold_counts or not pred_counts:
        return float(gold_counts == pred_counts)
    overlap = sum((gold_counts & pred_counts).values())
    if overlap == 0:
        return 0.0
    precision = overlap / sum(pred_counts.values())
    recall = overlap / sum(gold_counts.values())
    return 2 * precision * recall / (precision + recall)
