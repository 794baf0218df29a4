import json

import pytest

from plainscore.config import ROLE_NAMES, RunConfig, load_config
from plainscore.errors import InputError


def write_config(tmp_path, body):
    path = tmp_path / "run.toml"
    path.write_text(body, encoding="utf-8")
    return path


def test_defaults_are_fully_offline():
    config = load_config(None)
    assert config.backends["classifier"].is_local
    assert config.backends["answer_extractor"].is_local
    for role in ("question_generator", "question_answerer", "embedder", "perturber"):
        assert config.backends[role].kind == "mock"
    assert config.retrieval.k == 3
    assert config.retrieval.chunk_limit == 1000
    assert config.retrieval.context_budget_chars == 2048
    assert config.retrieval.embed_dimension == 768
    assert config.eval.replicates == 10000
    assert config.eval.ci_level == 0.99
    assert config.eval.alpha == 0.01
    assert config.scoring.qf_enabled is True
    assert config.scoring.heuristic_threshold == 0.35


def test_full_config_parses(tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text("")
    path = write_config(tmp_path, f"""
[run]
jobs = 4
mock_seed = 777

[backends]
classifier = "heuristic"
answer_extractor = "keyword"
question_generator = "mock"

[backends.question_answerer]
name = "qa-large"
base_url = "https://models.example/v1"
api_key_env = "QA_KEY"
temperature = 0.01
max_tokens = 512
in_flight_limit = 2
retry_max_attempts = 5
retry_backoff_seconds = [0.1, 0.4, 1.0]

[retrieval]
corpus_paths = [{json.dumps(str(corpus))}]
chunk_limit = 800
k = 5
context_budget_chars = 1500
embed_dimension = 96

[scoring]
overlap = "semantic_embedding"
qf_enabled = false
heuristic_threshold = 0.5

[eval]
replicates = 2000
ci_level = 0.95
alpha = 0.05
seed = 9
""")
    config = load_config(path)
    assert config.jobs == 4 and config.mock_seed == 777
    qa_profile = config.backends["question_answerer"].profile
    assert qa_profile.base_url == "https://models.example/v1"
    assert qa_profile.temperature == 0.01
    assert qa_profile.retry.max_attempts == 5
    assert qa_profile.retry.backoff_seconds == (0.1, 0.4, 1.0)
    assert config.retrieval.k == 5 and config.retrieval.embed_dimension == 96
    assert config.scoring.overlap == "semantic_embedding"
    assert config.scoring.qf_enabled is False
    assert config.eval.seed == 9
    # roles not mentioned keep their defaults
    assert config.backends["perturber"].kind == "mock"


def test_echo_dict_is_json_serializable_and_complete():
    echo = RunConfig().to_echo_dict()
    assert set(echo["backends"]) == set(ROLE_NAMES)
    json.dumps(echo)  # must not raise


@pytest.mark.parametrize("body,message", [
    ("[retrieval]\nk = 0\n", "k must be >= 1"),
    ("[retrieval]\nchunk_limit = 0\n", "chunk_limit"),
    ("[eval]\nci_level = 1.0\n", "ci_level"),
    ("[eval]\nalpha = 0.0\n", "alpha"),
    ("[eval]\nreplicates = 0\n", "replicates"),
    ("[scoring]\noverlap = 'jaccard'\n", "overlap"),
    ("[scoring]\nheuristic_threshold = 1.5\n", "threshold"),
    ("[run]\njobs = 0\n", "jobs"),
    ("[backends]\nquestion_generator = 'heuristic'\n", "local"),
    ("[backends]\nnarrator = 'mock'\n", "unknown backend role"),
    ("[backends.classifier]\nbanana = 1\n", "unknown profile keys"),
    ("[retrieval]\ncorpus_paths = ['/nonexistent/c.jsonl']\n", "does not exist"),
    ("[nonsense]\nx = 1\n", "unknown config sections"),
])
def test_validation_errors(tmp_path, body, message):
    path = write_config(tmp_path, body)
    with pytest.raises(InputError, match=message):
        load_config(path)


def test_invalid_toml_reports_path(tmp_path):
    path = write_config(tmp_path, "not toml ][")
    with pytest.raises(InputError, match="invalid TOML"):
        load_config(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(InputError, match="cannot read config"):
        load_config(tmp_path / "absent.toml")
