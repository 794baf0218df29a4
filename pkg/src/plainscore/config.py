"""Run configuration: one declarative TOML document binding every module.

Each model role (classifier, answer_extractor, question_generator,
question_answerer, embedder, perturber) is either the string "mock", the
string "heuristic" (local rule; classifier and answer_extractor only, with
"keyword" accepted as a synonym for the extractor), or a table describing an
HTTP endpoint profile. CLI flags override config fields; the fully resolved
config is echoed into every report for provenance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .backend import BackendProfile, RetryPolicy, mock_profile
from .bootstrap import DEFAULT_ALPHA, DEFAULT_CI_LEVEL, DEFAULT_REPLICATES
from .context import DEFAULT_CONTEXT_BUDGET
from .corpus import DEFAULT_CHUNK_LIMIT
from .errors import InputError
from .heuristics import DEFAULT_SIMPLIFICATION_THRESHOLD
from .mock import DEFAULT_DIMENSION, DEFAULT_MOCK_SEED

ROLE_NAMES = (
    "classifier",
    "answer_extractor",
    "question_generator",
    "question_answerer",
    "embedder",
    "perturber",
)
_LOCAL_CAPABLE = {"classifier", "answer_extractor"}
_LOCAL_ALIASES = {"heuristic", "keyword"}


@dataclass(frozen=True)
class RoleSetting:
    """How one model role is served: local rule, mock, or HTTP endpoint."""

    kind: str  # "local" | "mock" | "endpoint"
    profile: BackendProfile | None = None

    @property
    def is_local(self) -> bool:
        return self.kind == "local"

    def echo(self) -> Any:
        if self.kind == "local":
            return "heuristic"
        if self.kind == "mock":
            return "mock"
        p = self.profile
        return {
            "name": p.name,
            "base_url": p.base_url,
            "model": p.model,
            "api_key_env": p.api_key_env,
            "temperature": p.temperature,
            "max_tokens": p.max_tokens,
            "max_input_chars": p.max_input_chars,
            "in_flight_limit": p.in_flight_limit,
            "retry_max_attempts": p.retry.max_attempts,
            "retry_backoff_seconds": list(p.retry.backoff_seconds),
            "timeout_seconds": p.timeout_seconds,
        }


@dataclass
class RetrievalConfig:
    corpus_paths: list[str] = field(default_factory=list)
    index_path: str | None = None
    chunk_limit: int = DEFAULT_CHUNK_LIMIT
    k: int = 3
    context_budget_chars: int = DEFAULT_CONTEXT_BUDGET
    embed_dimension: int = DEFAULT_DIMENSION


@dataclass
class ScoringConfig:
    overlap: str = "lexical_f1"  # or "semantic_embedding"
    qf_enabled: bool = True
    heuristic_threshold: float = DEFAULT_SIMPLIFICATION_THRESHOLD


@dataclass
class EvalConfig:
    replicates: int = DEFAULT_REPLICATES
    ci_level: float = DEFAULT_CI_LEVEL
    alpha: float = DEFAULT_ALPHA
    seed: int = 42


@dataclass
class RunConfig:
    backends: dict[str, RoleSetting] = field(default_factory=dict)
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    scoring: ScoringConfig = field(default_factory=ScoringConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    jobs: int = 1
    trace: bool = False
    mock_seed: int = DEFAULT_MOCK_SEED
    source_path: str | None = None

    def __post_init__(self):
        for role in ROLE_NAMES:
            if role not in self.backends:
                default = "heuristic" if role in _LOCAL_CAPABLE else "mock"
                self.backends[role] = _parse_role(role, default)

    def to_echo_dict(self) -> dict:
        return {
            "backends": {role: self.backends[role].echo() for role in ROLE_NAMES},
            "retrieval": {
                "corpus_paths": list(self.retrieval.corpus_paths),
                "index_path": self.retrieval.index_path,
                "chunk_limit": self.retrieval.chunk_limit,
                "k": self.retrieval.k,
                "context_budget_chars": self.retrieval.context_budget_chars,
                "embed_dimension": self.retrieval.embed_dimension,
            },
            "scoring": {
                "overlap": self.scoring.overlap,
                "qf_enabled": self.scoring.qf_enabled,
                "heuristic_threshold": self.scoring.heuristic_threshold,
            },
            "eval": {
                "replicates": self.eval.replicates,
                "ci_level": self.eval.ci_level,
                "alpha": self.eval.alpha,
                "seed": self.eval.seed,
            },
            "jobs": self.jobs,
            "trace": self.trace,
            "mock_seed": self.mock_seed,
        }


def _parse_role(role: str, raw: Any) -> RoleSetting:
    if isinstance(raw, str):
        value = raw.strip().lower()
        if value == "mock":
            return RoleSetting(kind="mock", profile=mock_profile(f"mock-{role}"))
        if value in _LOCAL_ALIASES:
            if role not in _LOCAL_CAPABLE:
                raise InputError(
                    f"backends.{role}: only classifier and answer_extractor "
                    f"have a local '{value}' mode"
                )
            return RoleSetting(kind="local")
        raise InputError(
            f"backends.{role}: expected 'mock', 'heuristic', or a profile table, got {raw!r}"
        )
    if not isinstance(raw, dict):
        raise InputError(f"backends.{role}: expected a string or a table")
    known = {
        "name", "base_url", "model", "api_key_env", "temperature", "max_tokens",
        "max_input_chars", "in_flight_limit", "retry_max_attempts",
        "retry_backoff_seconds", "timeout_seconds",
    }
    unknown = set(raw) - known
    if unknown:
        raise InputError(f"backends.{role}: unknown profile keys {sorted(unknown)}")
    try:
        profile = BackendProfile(
            name=str(raw.get("name", role)),
            base_url=str(raw.get("base_url", "mock")),
            model=str(raw.get("model", "")),
            api_key_env=raw.get("api_key_env"),
            temperature=float(raw.get("temperature", 0.0)),
            max_tokens=int(raw.get("max_tokens", 512)),
            max_input_chars=int(raw.get("max_input_chars", 8192)),
            in_flight_limit=int(raw.get("in_flight_limit", 4)),
            retry=RetryPolicy(
                max_attempts=int(raw.get("retry_max_attempts", 3)),
                backoff_seconds=tuple(
                    float(x) for x in raw.get("retry_backoff_seconds", (0.5, 2.0))
                ),
            ),
            timeout_seconds=float(raw.get("timeout_seconds", 30.0)),
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"backends.{role}: {exc}") from exc
    kind = "mock" if profile.is_mock else "endpoint"
    return RoleSetting(kind=kind, profile=profile)


def _expect_section(data: dict, name: str) -> dict:
    section = data.get(name, {})
    if not isinstance(section, dict):
        raise InputError(f"config section [{name}] must be a table")
    return section


def load_config(path: str | Path | None) -> RunConfig:
    """Load a TOML run config; None yields the all-local/mock defaults."""
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: invalid TOML: {exc}") from exc

    known_sections = {"run", "backends", "retrieval", "scoring", "eval"}
    unknown = set(data) - known_sections
    if unknown:
        raise InputError(f"{path}: unknown config sections {sorted(unknown)}")

    run = _expect_section(data, "run")
    backends_raw = _expect_section(data, "backends")
    retrieval_raw = _expect_section(data, "retrieval")
    scoring_raw = _expect_section(data, "scoring")
    eval_raw = _expect_section(data, "eval")

    backends = {}
    for role, raw in backends_raw.items():
        if role not in ROLE_NAMES:
            raise InputError(f"{path}: unknown backend role {role!r}")
        backends[role] = _parse_role(role, raw)

    config = RunConfig(
        backends=backends,
        retrieval=RetrievalConfig(
            corpus_paths=[str(p) for p in retrieval_raw.get("corpus_paths", [])],
            index_path=(
                str(retrieval_raw["index_path"])
                if retrieval_raw.get("index_path") is not None else None
            ),
            chunk_limit=int(retrieval_raw.get("chunk_limit", DEFAULT_CHUNK_LIMIT)),
            k=int(retrieval_raw.get("k", 3)),
            context_budget_chars=int(
                retrieval_raw.get("context_budget_chars", DEFAULT_CONTEXT_BUDGET)
            ),
            embed_dimension=int(retrieval_raw.get("embed_dimension", DEFAULT_DIMENSION)),
        ),
        scoring=ScoringConfig(
            overlap=str(scoring_raw.get("overlap", "lexical_f1")),
            qf_enabled=bool(scoring_raw.get("qf_enabled", True)),
            heuristic_threshold=float(
                scoring_raw.get("heuristic_threshold", DEFAULT_SIMPLIFICATION_THRESHOLD)
            ),
        ),
        eval=EvalConfig(
            replicates=int(eval_raw.get("replicates", DEFAULT_REPLICATES)),
            ci_level=float(eval_raw.get("ci_level", DEFAULT_CI_LEVEL)),
            alpha=float(eval_raw.get("alpha", DEFAULT_ALPHA)),
            seed=int(eval_raw.get("seed", 42)),
        ),
        jobs=int(run.get("jobs", 1)),
        trace=bool(run.get("trace", False)),
        mock_seed=int(run.get("mock_seed", DEFAULT_MOCK_SEED)),
        source_path=str(path),
    )
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    r = config.retrieval
    if r.k < 1:
        raise InputError(f"retrieval.k must be >= 1, got {r.k}")
    if r.chunk_limit < 1:
        raise InputError(f"retrieval.chunk_limit must be >= 1, got {r.chunk_limit}")
    if r.context_budget_chars < 1:
        raise InputError("retrieval.context_budget_chars must be >= 1")
    if r.embed_dimension < 1:
        raise InputError("retrieval.embed_dimension must be >= 1")
    for corpus in r.corpus_paths:
        if not Path(corpus).exists():
            raise InputError(f"retrieval.corpus_paths entry does not exist: {corpus}")
    if config.scoring.overlap not in ("lexical_f1", "semantic_embedding"):
        raise InputError(
            "scoring.overlap must be 'lexical_f1' or 'semantic_embedding', "
            f"got {config.scoring.overlap!r}"
        )
    if not 0.0 <= config.scoring.heuristic_threshold <= 1.0:
        raise InputError("scoring.heuristic_threshold must lie in [0, 1]")
    if not 0.0 < config.eval.ci_level < 1.0:
        raise InputError(f"eval.ci_level must be in (0, 1), got {config.eval.ci_level}")
    if not 0.0 < config.eval.alpha < 1.0:
        raise InputError(f"eval.alpha must be in (0, 1), got {config.eval.alpha}")
    if config.eval.replicates < 1:
        raise InputError("eval.replicates must be >= 1")
    if config.jobs < 1:
        raise InputError("run.jobs must be >= 1")
