"""Prompt fidelity: templates must byte-match the golden transcriptions, and
rendering must be literal substitution and nothing else."""

from pathlib import Path

import pytest

from plainscore.errors import RenderError
from plainscore.prompts import (
    ANSWER_EXTRACTOR,
    FACTUALITY_JUDGE,
    FAITHFULNESS_PERTURBER,
    QUESTION_ANSWERER,
    QUESTION_GENERATOR,
    SENTENCE_CLASSIFIER,
    PromptTemplate,
    render_prompt,
    template_by_id,
)

GOLDEN = Path(__file__).parent / "golden"


def golden_text(name: str) -> str:
    raw = (GOLDEN / name).read_text(encoding="utf-8")
    assert raw.endswith("\n")
    return raw[:-1]  # files carry one trailing newline by convention


GOLDEN_CASES = [
    (SENTENCE_CLASSIFIER, "classifier", {"input": "S text", "abstract": "A text"}),
    (ANSWER_EXTRACTOR, "answer_extractor", {"input": "S text"}),
    (FACTUALITY_JUDGE, "judge", {"input": "S text", "abstract": "A text", "score": ""}),
    (FAITHFULNESS_PERTURBER, "perturber", {"input": "S text", "sentence": ""}),
]


@pytest.mark.parametrize("template,stem,bindings", GOLDEN_CASES)
def test_template_text_matches_golden(template, stem, bindings):
    assert template.system_text == golden_text(f"{stem}_system.txt")
    assert template.user_text == golden_text(f"{stem}_user.txt")


@pytest.mark.parametrize("template,stem,bindings", GOLDEN_CASES)
def test_render_is_literal_substitution(template, stem, bindings):
    system_text, user_text = render_prompt(template, bindings)
    expected_system = golden_text(f"{stem}_system.txt")
    expected_user = golden_text(f"{stem}_user.txt")
    for name, value in bindings.items():
        expected_system = expected_system.replace("{" + name + "}", value)
        expected_user = expected_user.replace("{" + name + "}", value)
    assert system_text == expected_system
    assert user_text == expected_user


def test_classifier_user_layout():
    _, user_text = render_prompt(SENTENCE_CLASSIFIER, {"input": "S", "abstract": "A"})
    assert user_text == "Sentence or summary: S\nOriginal abstract: A"


def test_judge_render_ends_at_completion_cue():
    _, user_text = render_prompt(
        FACTUALITY_JUDGE, {"input": "S", "abstract": "A", "score": ""}
    )
    assert user_text.endswith("Factuality score (only output a numeric score): ")


def test_missing_binding_names_placeholder():
    with pytest.raises(RenderError, match=r"\{abstract\}"):
        render_prompt(SENTENCE_CLASSIFIER, {"input": "S"})


def test_template_without_placeholders_is_verbatim():
    template = PromptTemplate(template_id="t", system_text="fixed", user_text="also fixed")
    assert render_prompt(template, {}) == ("fixed", "also fixed")


def test_extra_bindings_are_ignored():
    _, user_text = render_prompt(ANSWER_EXTRACTOR, {"input": "X", "unused": "Y"})
    assert user_text.endswith("text: X")


def test_placeholder_listing():
    assert SENTENCE_CLASSIFIER.placeholders() == ["input", "abstract"]
    assert QUESTION_GENERATOR.placeholders() == ["answer", "input"]
    assert QUESTION_ANSWERER.placeholders() == ["question", "context"]


def test_template_lookup():
    assert template_by_id("answer-extractor") is ANSWER_EXTRACTOR
    with pytest.raises(KeyError):
        template_by_id("nope")
