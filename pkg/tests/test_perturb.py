import pytest

from plainscore.backend import ModelClient, mock_profile
from plainscore.errors import PerturbationError
from plainscore.heuristics import perturb_sentence
from plainscore.perturb import perturb_summary
from plainscore.records import SummaryPair

MOCK = ModelClient(mock_profile())


def test_number_swap_rule_matches_documented_example():
    assert perturb_sentence("has infected more than 59 million people") == \
        "has infected more than 64 million people"


def test_decimal_numbers_swap():
    assert perturb_sentence("improved after 2.5 weeks") == "improved after 7.5 weeks"


def test_numeral_free_sentence_is_negated():
    out = perturb_sentence("The patch is adhesive.")
    assert out == "The patch is not adhesive."


def test_fallback_wrap_always_differs():
    sentence = "Patients recovered quickly."
    out = perturb_sentence(sentence)
    assert out != sentence and "not" in out


def test_perturb_summary_builds_labeled_twin():
    pair = SummaryPair(
        id="p1",
        summary_text="Florbam cut levels by 37 percent. The patch is adhesive.",
        abstract_text="abstract.",
        gold_label=1,
        metadata={"journal": "J"},
    )
    twin = perturb_summary(pair, MOCK)
    assert twin.id == "p1-perturbed"
    assert twin.gold_label == 0
    assert twin.metadata["provenance"] == "perturbed"
    assert twin.metadata["source_id"] == "p1"
    assert twin.metadata["journal"] == "J"
    assert twin.abstract_text == pair.abstract_text
    assert twin.summary_text == \
        "Florbam cut levels by 42 percent. The patch is not adhesive."


def test_every_sentence_must_change():
    pair = SummaryPair(id="p", summary_text="One fact. Two facts.", abstract_text="a.")
    twin = perturb_summary(pair, MOCK)
    originals = pair.summary_text.split(". ")
    for sentence in twin.summary_text.split(". "):
        assert sentence not in originals


def test_echoing_perturber_raises_after_retry():
    class EchoClient:
        def __init__(self):
            self.calls = 0

        def complete(self, system_text, user_text):
            self.calls += 1
            # parrot the input sentence back
            return user_text.split("Sentence: ", 1)[1].split("\n", 1)[0]

    client = EchoClient()
    pair = SummaryPair(id="p", summary_text="The patch is adhesive.", abstract_text="a.")
    with pytest.raises(PerturbationError, match="verbatim twice"):
        perturb_summary(pair, client)
    assert client.calls == 2


def test_empty_summary_cannot_be_perturbed():
    pair = SummaryPair(id="p", summary_text="   ", abstract_text="a.")
    with pytest.raises(PerturbationError, match="no sentences"):
        perturb_summary(pair, MOCK)
