"""Exception hierarchy shared across the package."""


class PlainscoreError(Exception):
    """Base class for all package errors."""


class InputError(PlainscoreError):
    """Malformed user input: datasets, corpora, score files, config. Maps to exit code 2."""


class ContractViolationError(PlainscoreError):
    """A caller violated a documented precondition."""


class ClassificationError(PlainscoreError):
    """Endpoint classifier returned something that is neither Yes nor No."""

    def __init__(self, message: str, raw_response: str = ""):
        super().__init__(message)
        self.raw_response = raw_response


class RenderError(PlainscoreError):
    """A prompt template placeholder had no binding."""


class TransportError(PlainscoreError):
    """Network failure or 5xx that survived all retry attempts."""


class RequestError(PlainscoreError):
    """Non-retryable endpoint rejection (4xx) or malformed response body."""

    def __init__(self, message: str, status: int | None = None, body: str = ""):
        super().__init__(message)
        self.status = status
        self.body = body


class MockDispatchError(PlainscoreError):
    """The mock backend received a prompt it has no rule for."""


class IndexFormatError(InputError):
    """Vector cache file has a bad magic, dimension, or is truncated."""


class PerturbationError(PlainscoreError):
    """The perturber failed to produce a sentence that differs from its input."""


class UndefinedStatisticError(PlainscoreError):
    """A statistic is undefined for the given data (all ties, zero variance, one class)."""
