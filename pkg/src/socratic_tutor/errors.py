"""Exception types shared across the package."""

from __future__ import annotations


class TutorError(Exception):
    """Base class for every error this package raises deliberately."""


class MalformedPlaceholder(TutorError):
    """An opening ``%[`` is not closed by a well-formed ``]%``."""


class MissingVariable(TutorError):
    """Rendering was attempted without bindings for one or more placeholders."""

    def __init__(self, missing: list[str]):
        self.missing = list(missing)
        super().__init__(f"unbound placeholders: {', '.join(self.missing)}")


class NoJsonFound(TutorError):
    """Model output contained no parseable top-level JSON object."""


class MissingKey(TutorError):
    """A candidate knowledge-component object lacks required keys."""

    def __init__(self, keys: list[str]):
        self.keys = list(keys)
        super().__init__(f"missing keys: {', '.join(self.keys)}")


class ExtractionFailed(TutorError):
    """Structured output could not be recovered even after a repair retry."""


class IncompleteSelection(TutorError):
    """A category-tree selection skips one or more earlier levels."""

    def __init__(self, missing_levels: list[str]):
        self.missing_levels = list(missing_levels)
        super().__init__(f"missing selections: {', '.join(self.missing_levels)}")


class ProviderError(TutorError):
    """Base class for chat-provider failures."""


class ProviderTimeout(ProviderError):
    """No attempt finished inside the configured per-attempt timeout."""


class RateLimited(ProviderError):
    """The provider kept answering 429 past the retry budget."""


class AuthFailed(ProviderError):
    """Credentials are missing or rejected; raised before any retry."""


class TransportError(ProviderError):
    """Connection failure, 5xx, or an unusable response body."""


class ScriptExhausted(ProviderError):
    """A scripted provider ran out of entries matching the call."""


class SessionEnded(TutorError):
    """The dialogue session no longer accepts learner input."""


class UnknownSession(TutorError):
    """No stored record exists for the given id (session or scenario)."""


class CorruptRecord(TutorError):
    """A stored record violates the transcript or survey format."""


class EmptyDataset(TutorError):
    """An analytics operation was asked to summarize zero responses."""
