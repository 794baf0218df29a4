"""Deterministic in-process mock backend.

The mock receives the same rendered prompts a real endpoint would. It
identifies the template by its system text, parses the bindings back out of
the user text, and applies the matching local rule from ``heuristics``.
Mock embeddings are seeded hash projections of the token multiset, so they
are identical across processes and platforms.
"""

from __future__ import annotations

import hashlib
import re
from functools import lru_cache

import numpy as np

from . import heuristics
from .errors import MockDispatchError
from .prompts import (
    ALL_TEMPLATES,
    ANSWER_EXTRACTOR,
    FACTUALITY_JUDGE,
    FAITHFULNESS_PERTURBER,
    NO_ANSWER_TEXT,
    QUESTION_ANSWERER,
    QUESTION_GENERATOR,
    SENTENCE_CLASSIFIER,
    PromptTemplate,
)
from .text import tokenize

DEFAULT_MOCK_SEED = 1337
DEFAULT_DIMENSION = 768

_PLACEHOLDER_RE = re.compile(r"\{(\w+)\}")


def _user_text_pattern(template: PromptTemplate) -> re.Pattern:
    pattern = ""
    last = 0
    for match in _PLACEHOLDER_RE.finditer(template.user_text):
        pattern += re.escape(template.user_text[last:match.start()])
        pattern += f"(?P<{match.group(1)}>.*?)"
        last = match.end()
    pattern += re.escape(template.user_text[last:])
    return re.compile(pattern + r"\Z", re.DOTALL)


_BY_SYSTEM_TEXT = {t.system_text: t for t in ALL_TEMPLATES}
_USER_PATTERNS = {t.template_id: _user_text_pattern(t) for t in ALL_TEMPLATES}


def parse_bindings(system_text: str, user_text: str) -> tuple[str, dict[str, str]]:
    """Recover (template_id, bindings) from rendered prompt texts."""
    template = _BY_SYSTEM_TEXT.get(system_text)
    if template is None:
        raise MockDispatchError(
            "mock backend has no rule for this prompt; unknown system text: "
            + system_text[:80]
        )
    match = _USER_PATTERNS[template.template_id].match(user_text)
    if match is None:
        raise MockDispatchError(
            f"mock backend could not parse user text for template {template.template_id!r}"
        )
    return template.template_id, match.groupdict()


def reply(system_text: str, user_text: str) -> str:
    """Deterministic completion for a rendered prompt."""
    template_id, bindings = parse_bindings(system_text, user_text)
    if template_id == SENTENCE_CLASSIFIER.template_id:
        kind = heuristics.heuristic_sentence_type(bindings["input"], bindings["abstract"])
        return "No" if kind.value == "simplification" else "Yes"
    if template_id == ANSWER_EXTRACTOR.template_id:
        return ", ".join(heuristics.keyword_answers(bindings["input"]))
    if template_id == QUESTION_GENERATOR.template_id:
        return heuristics.template_question(bindings["input"], bindings["answer"])
    if template_id == QUESTION_ANSWERER.template_id:
        answer = heuristics.extractive_answer(bindings["question"], bindings["context"])
        return NO_ANSWER_TEXT if answer is None else answer
    if template_id == FACTUALITY_JUDGE.template_id:
        return str(heuristics.judge_score(bindings["input"], bindings["abstract"]))
    if template_id == FAITHFULNESS_PERTURBER.template_id:
        return heuristics.perturb_sentence(bindings["input"])
    raise MockDispatchError(f"no mock rule for template {template_id!r}")


@lru_cache(maxsize=8192)
def _token_vector(seed: int, token: str, dimension: int) -> np.ndarray:
    digest = hashlib.blake2b(
        token.encode("utf-8"),
        key=seed.to_bytes(8, "little", signed=False),
        digest_size=8,
    ).digest()
    rng = np.random.default_rng(int.from_bytes(digest, "little"))
    return rng.standard_normal(dimension, dtype=np.float32)


def embed_text(text: str, dimension: int = DEFAULT_DIMENSION,
               seed: int = DEFAULT_MOCK_SEED) -> np.ndarray:
    """L2-normalized sum of per-token hash projections; float32."""
    acc = np.zeros(dimension, dtype=np.float64)
    for token in tokenize(text):
        acc += _token_vector(seed, token, dimension)
    norm = float(np.linalg.norm(acc))
    if norm > 0:
        acc /= norm
    return acc.astype(np.float32)


def embed_texts(texts: list[str], dimension: int = DEFAULT_DIMENSION,
                seed: int = DEFAULT_MOCK_SEED) -> np.ndarray:
    out = np.zeros((len(texts), dimension), dtype=np.float32)
    for i, text in enumerate(texts):
        out[i] = embed_text(text, dimension, seed)
    return out
