"""Prompt templates and rendering.

Placeholders use ``{name}`` syntax. Rendering is byte-exact substitution:
nothing else in the template text is transformed. Output-slot placeholders
(``{score}``, ``{sentence}``) are bound to the empty string at call time so
the rendered prompt ends at the completion cue.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import RenderError

_PLACEHOLDER_RE = re.compile(r"\{(\w+)\}")


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    system_text: str
    user_text: str

    def placeholders(self) -> list[str]:
        found = []
        for source in (self.system_text, self.user_text):
            for name in _PLACEHOLDER_RE.findall(source):
                if name not in found:
                    found.append(name)
        return found


def render_prompt(template: PromptTemplate, bindings: dict[str, str]) -> tuple[str, str]:
    """Substitute bindings into the template, byte-exact otherwise.

    Raises RenderError naming the first placeholder that has no binding.
    """

    def substitute(source: str) -> str:
        def repl(match: re.Match) -> str:
            name = match.group(1)
            if name not in bindings:
                raise RenderError(
                    f"template {template.template_id!r}: no binding for placeholder {{{name}}}"
                )
            return str(bindings[name])

        return _PLACEHOLDER_RE.sub(repl, source)

    return substitute(template.system_text), substitute(template.user_text)


SENTENCE_CLASSIFIER = PromptTemplate(
    template_id="sentence-type-classifier",
    system_text=(
        "Annotate whether a sentence or summary includes information not present in the original abstract.\n"
        "\n"
        "The sentence or summary contains external information that is not explicitly mentioned, paraphrased, or implied in the original abstract will be labeled as 'Yes'.\n"
        "\n"
        "The sentence or summary contains information that is explicitly stated or closely paraphrased from the original abstract will be labeled as 'No'."
    ),
    user_text="Sentence or summary: {input}\nOriginal abstract: {abstract}",
)

ANSWER_EXTRACTOR = PromptTemplate(
    template_id="answer-extractor",
    system_text=(
        "QA-based metrics compare information units between the summary and source, "
        "so it is thus necessary to first extract such units, or answers, from the "
        "given summary. Please extract answers or information units from a plain "
        "language summary."
    ),
    user_text="Extract a comma-separated list of the most important keywords from the following text: {input}",
)

FACTUALITY_JUDGE = PromptTemplate(
    template_id="factuality-judge",
    system_text=(
        "Rate the factuality of the given plain language sentence or summary compared "
        "with the scientific abstract. Output a numeric score from 0 to 100, with 100 "
        "meaning the sentence is completely factually consistent with the abstract and "
        "0 meaning the sentence is completely non-factual with the abstract."
    ),
    user_text=(
        "Sentence or summary: {input}\n"
        "Original abstract: {abstract}\n"
        "Factuality score (only output a numeric score): {score}"
    ),
)

FAITHFULNESS_PERTURBER = PromptTemplate(
    template_id="faithfulness-perturber",
    system_text=(
        "You are a data transformation assistant. You will receive a sentence from a "
        "biomedical literature. You will generate a new version of the given sentence "
        "based on the following rules for faithfulness perturbations:\n"
        "\n"
        "1. Number Swap\n"
        "Locate any numeric value(s) in the sentence and swap them with different numeric value(s).\n"
        "Example: \"infected more than 59 million people\" -> \"infected more than 64 million people\"\n"
        "\n"
        "2. Entity Swap\n"
        "Locate a key entity (e.g., virus name, drug name, organization) in the sentence and swap it with a different entity.\n"
        "Example: \"coronavirus 2 (SARS-CoV-2)\" -> \"canine adenovirus (CAV-2)\"\n"
        "\n"
        "3. Synonym Verb Swap\n"
        "Identify a key verb in the sentence and replace it with a near-synonym or related verb that changes the nuance or meaning slightly.\n"
        "Example: \"killed more than one of them\" -> \"stamped out more than one of them\"\n"
        "\n"
        "4. Hypernym/Antonym Swap\n"
        "Select a word and replace it with either a hypernym (a more general term) or an antonym (opposite meaning), as appropriate.\n"
        "Example (antonym): \"killed more than one of them\" -> \"saved more than one of them\"\n"
        "Example (hypernym): \"dog\" -> \"animal\" (if relevant)\n"
        "\n"
        "5. Negation\n"
        "Negate a key part of the sentence to flip its meaning.\n"
        "Example: \"has infected more than 59 million people\" -> \"hasn't infected more than 59 million people\" or \"has not infected more than 59 million people\"\n"
        "\n"
        "Your task:\n"
        "Read each sentence, generate a new sentence based on one of the five types of perturbation stratigies (Number Swap, Entity Swap, Synonym Verb Swap, Hypernym/Antonym Swap, Negation) above.\n"
        "Return the perturbation sentence.\n"
        "\n"
        "Do not change the rest parts of the sentence except for the perturbation content. "
        "For example, the original sentence is \"The skin patch and the vaginal (birth canal) ring are two methods of birth control.\" "
        "The perturbation sentence should be \"The skin patch and the vaginal (birth canal) ring are five methods of birth control.\""
    ),
    user_text="Sentence: {input}\nPerturbation sentence: {sentence}",
)

QUESTION_GENERATOR = PromptTemplate(
    template_id="question-generator",
    system_text=(
        "Write one question whose answer is the given answer span, asking about it in "
        "the context of the given sentence. Return only the question text."
    ),
    user_text="Answer: {answer}\nSentence: {input}\nQuestion:",
)

QUESTION_ANSWERER = PromptTemplate(
    template_id="question-answerer",
    system_text=(
        "Answer the question using only the given source passage. Copy the shortest "
        "span of the passage that answers it. If the passage does not contain the "
        "answer, reply exactly 'NO ANSWER'."
    ),
    user_text="Question: {question}\nSource passage: {context}\nAnswer:",
)

NO_ANSWER_TEXT = "NO ANSWER"

ALL_TEMPLATES = (
    SENTENCE_CLASSIFIER,
    ANSWER_EXTRACTOR,
    FACTUALITY_JUDGE,
    FAITHFULNESS_PERTURBER,
    QUESTION_GENERATOR,
    QUESTION_ANSWERER,
)


def template_by_id(template_id: str) -> PromptTemplate:
    for template in ALL_TEMPLATES:
        if template.template_id == template_id:
            return template
    raise KeyError(template_id)
