"""Chat completion providers.

Two implementations behind one ``complete(request) -> response`` surface: a
remote client speaking the OpenAI-style ``/chat/completions`` JSON protocol,
and a scripted provider that replays canned responses so every other module
can be exercised deterministically and offline.

The API key never lives in config or logs; config holds only the name of
the environment variable to read it from.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import httpx

from .errors import (
    AuthFailed,
    ProviderTimeout,
    RateLimited,
    ScriptExhausted,
    TransportError,
)

# Sampling defaults: creative dialogue vs strict structured output.
DIALOGUE_TEMPERATURE = 0.7
STRUCTURED_TEMPERATURE = 0.2

_ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in _ROLES:
            raise ValueError(f"bad role {self.role!r}")


@dataclass(frozen=True)
class ChatRequest:
    messages: tuple[ChatMessage, ...]
    model_id: str = ""
    temperature: float = DIALOGUE_TEMPERATURE
    max_tokens: int = 1024

    def __post_init__(self):
        object.__setattr__(self, "messages", tuple(self.messages))
        if not self.messages:
            raise ValueError("messages is empty")
        if self.messages[0].role not in ("system", "user"):
            raise ValueError("first message must be system or user")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature out of range")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")


@dataclass(frozen=True)
class TokenUsage:
    prompt: int
    completion: int


@dataclass(frozen=True)
class ChatResponse:
    text: str
    latency_ms: int
    token_usage: TokenUsage | None = None
    retries: int = 0


@dataclass(frozen=True)
class ProviderConfig:
    """Remote endpoint settings. ``api_key_ref`` names an env var, never a key."""

    base_url: str
    api_key_ref: str = "OPENAI_API_KEY"
    timeout_ms: int = 30_000
    max_retries: int = 2
    model: str = "gpt-4"

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if not 0 <= self.max_retries <= 3:
            raise ValueError("max_retries must be between 0 and 3")


class Provider(Protocol):
    def complete(self, request: ChatRequest) -> ChatResponse: ...


class OpenAICompatProvider:
    """Remote chat client with per-attempt timeout and exponential backoff.

    Retries transport failures, 429 and 5xx; 401/403 and other 4xx fail
    immediately. Backoff starts at 500 ms and doubles per retry; the sleep
    function is injectable so retry tests need not wait.
    """

    BACKOFF_BASE_S = 0.5

    def __init__(self, config: ProviderConfig, client: httpx.Client | None = None, sleep=time.sleep):
        self.config = config
        self._client = client or httpx.Client()
        self._sleep = sleep

    def complete(self, request: ChatRequest) -> ChatResponse:
        key = os.environ.get(self.config.api_key_ref, "")
        if not key:
            # Checked up front: no network traffic without credentials.
            raise AuthFailed(f"environment variable {self.config.api_key_ref!r} is not set")

        url = self.config.base_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": request.model_id or self.config.model,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        headers = {"Authorization": f"Bearer {key}"}
        timeout_s = self.config.timeout_ms / 1000.0

        attempt = 0
        delay = self.BACKOFF_BASE_S
        while True:
            error: Exception
            started = time.perf_counter()
            try:
                resp = self._client.post(url, json=payload, headers=headers, timeout=timeout_s)
            except httpx.TimeoutException:
                error = ProviderTimeout(f"no reply within {self.config.timeout_ms} ms")
            except httpx.HTTPError as exc:
                error = TransportError(str(exc))
            else:
                if resp.status_code == 200:
                    latency_ms = int((time.perf_counter() - started) * 1000)
                    return self._parse(resp, latency_ms, retries=attempt)
                if resp.status_code in (401, 403):
                    raise AuthFailed(f"endpoint rejected credentials (HTTP {resp.status_code})")
                if resp.status_code == 429:
                    error = RateLimited("endpoint answered HTTP 429")
                elif resp.status_code >= 500:
                    error = TransportError(f"endpoint answered HTTP {resp.status_code}")
                else:
                    raise TransportError(f"endpoint answered HTTP {resp.status_code}")
            if attempt >= self.config.max_retries:
                raise error
            self._sleep(delay)
            delay *= 2
            attempt += 1

    @staticmethod
    def _parse(resp: httpx.Response, latency_ms: int, retries: int) -> ChatResponse:
        try:
            data = resp.json()
            text = data["choices"][0]["message"]["content"]
        except (ValueError, LookupError, TypeError) as exc:
            raise TransportError(f"unusable response body: {exc}") from exc
        usage = None
        raw_usage = data.get("usage")
        if isinstance(raw_usage, dict):
            usage = TokenUsage(
                prompt=int(raw_usage.get("prompt_tokens", 0)),
                completion=int(raw_usage.get("completion_tokens", 0)),
            )
        return ChatResponse(text=str(text), latency_ms=latency_ms, token_usage=usage, retries=retries)


@dataclass
class ScriptEntry:
    matcher: str
    response: str
    consumed: bool = False


class ScriptedProvider:
    """Replays scripted responses, consuming entries in order.

    Each call matches the last user message against the unconsumed entries;
    ``"*"`` matches anything, any other matcher is a substring test. A call
    no unconsumed entry matches raises ScriptExhausted. Responses are fully
    deterministic (latency 0).
    """

    def __init__(self, script: Iterable[tuple[str, str]]):
        self._entries = [ScriptEntry(matcher, response) for matcher, response in script]
        self._lock = threading.Lock()
        self.calls: list[str] = []

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedProvider":
        """Load a script from a JSON file: a list of {match, response} objects.

        A non-string response value is serialized back to JSON text, which
        keeps fixture files readable when the response is itself JSON.
        """
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(raw, list):
            raise ValueError("script file must hold a JSON list")
        entries = []
        for item in raw:
            matcher = str(item.get("match", "*"))
            response = item.get("response", "")
            if not isinstance(response, str):
                response = json.dumps(response)
            entries.append((matcher, response))
        return cls(entries)

    def complete(self, request: ChatRequest) -> ChatResponse:
        last_user = ""
        for message in request.messages:
            if message.role == "user":
                last_user = message.content
        with self._lock:
            self.calls.append(last_user)
            for entry in self._entries:
                if entry.consumed:
                    continue
                if entry.matcher == "*" or entry.matcher in last_user:
                    entry.consumed = True
                    return ChatResponse(text=entry.response, latency_ms=0)
        raise ScriptExhausted(
            f"no unconsumed entry matches call {len(self.calls)} "
            f"(script has {len(self._entries)} entries)"
        )

    def remaining(self) -> int:
        with self._lock:
            return sum(1 for entry in self._entries if not entry.consumed)


def scripted_provider(script: Iterable[tuple[str, str]]) -> ScriptedProvider:
    """Build a ScriptedProvider from (matcher, response) pairs."""
    return ScriptedProvider(script)


def ask(
    provider: Provider,
    prompt: str,
    *,
    system: str | None = None,
    temperature: float = DIALOGUE_TEMPERATURE,
    max_tokens: int = 1024,
) -> str:
    """One-shot convenience call: returns just the response text."""
    messages: list[ChatMessage] = []
    if system:
        messages.append(ChatMessage("system", system))
    messages.append(ChatMessage("user", prompt))
    request = ChatRequest(messages=tuple(messages), temperature=temperature, max_tokens=max_tokens)
    return provider.complete(request).text
