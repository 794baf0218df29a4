"""Model endpoint client: one wire shape for completions, one for embeddings.

Every neural stage talks to either a chat-completions/embeddings HTTP server
or the in-process mock ("base_url" set to "mock"). Requests are retried on
transport failures and 5xx responses per the profile's schedule; 4xx fails
immediately. A per-client semaphore caps in-flight requests, mock included.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field

import numpy as np
import requests

from . import mock
from .errors import RequestError, TransportError

MOCK_BASE_URL = "mock"
DEFAULT_TIMEOUT_SECONDS = 30.0


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    backoff_seconds: tuple[float, ...] = (0.5, 2.0)

    def delay(self, attempt: int) -> float:
        if not self.backoff_seconds:
            return 0.0
        return self.backoff_seconds[min(attempt, len(self.backoff_seconds) - 1)]


@dataclass(frozen=True)
class BackendProfile:
    """Connection and decoding parameters for one model role."""

    name: str
    base_url: str = MOCK_BASE_URL
    model: str = ""
    api_key_env: str | None = None
    temperature: float = 0.0
    max_tokens: int = 512
    max_input_chars: int = 8192
    in_flight_limit: int = 4
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    timeout_seconds: float = DEFAULT_TIMEOUT_SECONDS

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"profile {self.name!r}: temperature must be >= 0")
        if self.max_tokens < 1:
            raise ValueError(f"profile {self.name!r}: max_tokens must be >= 1")
        if self.in_flight_limit < 1:
            raise ValueError(f"profile {self.name!r}: in_flight_limit must be >= 1")

    @property
    def is_mock(self) -> bool:
        return self.base_url == MOCK_BASE_URL


def mock_profile(name: str = "mock") -> BackendProfile:
    return BackendProfile(name=name, base_url=MOCK_BASE_URL)


class ModelClient:
    """Thread-safe client for one profile; share it across pipeline workers."""

    def __init__(self, profile: BackendProfile, embed_dimension: int = mock.DEFAULT_DIMENSION,
                 mock_seed: int = mock.DEFAULT_MOCK_SEED):
        self.profile = profile
        self.embed_dimension = embed_dimension
        self.mock_seed = mock_seed
        self._gate = threading.BoundedSemaphore(profile.in_flight_limit)

    # -- completions --------------------------------------------------------

    def complete(self, system_text: str, user_text: str) -> str:
        if len(user_text) > self.profile.max_input_chars:
            raise RequestError(
                f"user text of {len(user_text)} chars exceeds profile "
                f"{self.profile.name!r} max_input_chars={self.profile.max_input_chars}; "
                "callers must pre-truncate via the source-context budget"
            )
        with self._gate:
            if self.profile.is_mock:
                return mock.reply(system_text, user_text)
            payload = {
                "model": self.profile.model or self.profile.name,
                "messages": [
                    {"role": "system", "content": system_text},
                    {"role": "user", "content": user_text},
                ],
                "temperature": self.profile.temperature,
                "max_tokens": self.profile.max_tokens,
            }
            data = self._post("/chat/completions", payload)
        try:
            return data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise RequestError(
                f"malformed completion response from {self.profile.name!r}",
                body=str(data)[:200],
            ) from None

    # -- embeddings ----------------------------------------------------------

    def embed(self, texts: list[str]) -> np.ndarray:
        """One vector per text, order-preserving; shape (len(texts), dim)."""
        if not texts:
            return np.zeros((0, self.embed_dimension), dtype=np.float32)
        with self._gate:
            if self.profile.is_mock:
                return mock.embed_texts(list(texts), self.embed_dimension, self.mock_seed)
            payload = {"model": self.profile.model or self.profile.name, "input": list(texts)}
            data = self._post("/embeddings", payload)
        try:
            rows = sorted(data["data"], key=lambda item: item["index"])
            vectors = [row["embedding"] for row in rows]
        except (KeyError, TypeError):
            raise RequestError(
                f"malformed embeddings response from {self.profile.name!r}",
                body=str(data)[:200],
            ) from None
        if len(vectors) != len(texts):
            raise RequestError(
                f"embeddings response has {len(vectors)} vectors for {len(texts)} inputs"
            )
        dims = {len(v) for v in vectors}
        if len(dims) != 1:
            raise RequestError(f"dimension drift across embedding batch: {sorted(dims)}")
        return np.asarray(vectors, dtype=np.float32)

    # -- wire ----------------------------------------------------------------

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.profile.api_key_env:
            key = os.environ.get(self.profile.api_key_env, "")
            if key:
                headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post(self, route: str, payload: dict) -> dict:
        url = self.profile.base_url.rstrip("/") + route
        last_failure = "no attempt made"
        for attempt in range(self.profile.retry.max_attempts):
            try:
                response = requests.post(
                    url, json=payload, headers=self._headers(),
                    timeout=self.profile.timeout_seconds,
                )
            except requests.RequestException as exc:
                last_failure = f"transport error: {exc}"
            else:
                if response.status_code < 400:
                    try:
                        return response.json()
                    except ValueError as exc:
                        raise RequestError(
                            f"non-JSON response from {url}", status=response.status_code,
                            body=response.text[:200],
                        ) from exc
                if response.status_code < 500:
                    raise RequestError(
                        f"{url} rejected the request with HTTP {response.status_code}",
                        status=response.status_code,
                        body=response.text[:200],
                    )
                last_failure = f"HTTP {response.status_code}"
            if attempt + 1 < self.profile.retry.max_attempts:
                delay = self.profile.retry.delay(attempt)
                if delay > 0:
                    time.sleep(delay)
        raise TransportError(
            f"{url} failed after {self.profile.retry.max_attempts} attempts ({last_failure})"
        )
