"""LLM transport: chat-completion backends, retries, and token budgeting.

Three interchangeable backends sit behind one protocol: an OpenAI-style
HTTP client, a scripted mock keyed by block identifier (for offline tests),
and a transcript replay that re-serves recorded replies.  The module-level
:func:`complete` adds retry-with-backoff around transient failures and
normalizes replies; :func:`fits_context` implements the context-length
check that decides whether a block can be sent to the LLM at all.

Token counts are estimated as ceil(characters / 4).  That deliberately
overestimates for most tokenizers, which can only push borderline blocks
toward the geometric fallback, never past the provider's real limit.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Protocol

import requests

from .prompting import ChatPrompt

API_KEY_ENV = "BLOCKSPOT_API_KEY"
DEFAULT_ENDPOINT = "https://api.openai.com/v1/chat/completions"


class LlmError(Exception):
    """Base class for backend failures."""


class LlmTransientError(LlmError):
    """Timeouts, connection drops, 429s, 5xx: worth retrying."""


class LlmAuthError(LlmError):
    """Missing or rejected credentials: never retried."""


class LlmRequestError(LlmError):
    """The request itself is invalid (bad model, missing script key, ...)."""


class LlmTruncatedError(LlmError):
    """The provider stopped early; the reply cannot be trusted."""


class FinishReason(enum.Enum):
    COMPLETE = "complete"
    TRUNCATED = "truncated"
    ERROR = "error"


@dataclass(frozen=True)
class LlmConfig:
    """Connection and sampling settings for one pipeline run."""

    model_name: str = "gpt-3.5-turbo"
    temperature: float = 0.0
    max_context_tokens: int = 4096
    max_output_tokens: int = 512
    request_timeout: float = 30.0
    max_retries: int = 3
    endpoint_url: str = DEFAULT_ENDPOINT
    api_key: str = field(default_factory=lambda: os.environ.get(API_KEY_ENV, ""), repr=False)
    retry_backoff: float = 0.5

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if not 0 < self.max_output_tokens < self.max_context_tokens:
            raise ValueError("need max_context_tokens > max_output_tokens > 0")
        if self.max_retries < 0 or self.request_timeout <= 0 or self.retry_backoff < 0:
            raise ValueError("invalid retry/timeout settings")


@dataclass(frozen=True)
class LlmReply:
    """A normalized backend reply."""

    text: str
    finish_reason: FinishReason = FinishReason.COMPLETE
    latency: float = 0.0

    def __post_init__(self) -> None:
        if self.finish_reason is FinishReason.COMPLETE and not self.text:
            raise ValueError("a complete reply cannot be empty")


class LlmBackend(Protocol):
    """One attempt at a chat completion; retries live in :func:`complete`."""

    def send(self, prompt: ChatPrompt, config: LlmConfig, key: str) -> LlmReply: ...


def estimate_tokens(prompt: ChatPrompt) -> int:
    """Conservative token estimate: ceil(total characters / 4)."""
    return math.ceil(prompt.total_chars / 4)


def fits_context(prompt: ChatPrompt, config: LlmConfig) -> bool:
    """Whether the prompt plus the output budget fits the context window."""
    return estimate_tokens(prompt) + config.max_output_tokens <= config.max_context_tokens


def complete(
    backend: LlmBackend, prompt: ChatPrompt, config: LlmConfig, key: str = ""
) -> LlmReply:
    """Run one completion with retries on transient failures.

    The reply text is stripped of surrounding whitespace; empty or
    truncated replies are raised as errors so callers can fall back.
    """
    attempts = config.max_retries + 1
    last: LlmTransientError | None = None
    for attempt in range(attempts):
        if attempt:
            time.sleep(config.retry_backoff * 2 ** (attempt - 1))
        started = time.monotonic()
        try:
            reply = backend.send(prompt, config, key)
        except LlmTransientError as e:
            last = e
            continue
        text = reply.text.strip()
        if reply.finish_reason is FinishReason.TRUNCATED:
            raise LlmTruncatedError(f"reply truncated after {len(text)} chars (key={key!r})")
        if reply.finish_reason is FinishReason.ERROR:
            raise LlmRequestError(f"backend reported an error reply (key={key!r})")
        if not text:
            raise LlmRequestError(f"backend returned an empty reply (key={key!r})")
        return LlmReply(
            text=text,
            finish_reason=FinishReason.COMPLETE,
            latency=time.monotonic() - started,
        )
    raise LlmTransientError(f"gave up after {attempts} attempts: {last}")


class HttpBackend:
    """OpenAI-style chat-completions client over plain HTTP.

    Safe for concurrent use: one session shared across threads, no
    per-request state beyond the call stack.
    """

    RETRYABLE_STATUS = {429, 500, 502, 503, 504}
    AUTH_STATUS = {401, 403}

    def __init__(self, session: requests.Session | None = None):
        self._session = session or requests.Session()

    def send(self, prompt: ChatPrompt, config: LlmConfig, key: str) -> LlmReply:
        if not config.api_key:
            raise LlmAuthError(f"no API key; set {API_KEY_ENV} or config.api_key")
        payload = {
            "model": config.model_name,
            "messages": [
                {"role": "system", "content": prompt.system},
                {"role": "user", "content": prompt.user},
            ],
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
        }
        try:
            response = self._session.post(
                config.endpoint_url,
                json=payload,
                headers={"Authorization": f"Bearer {config.api_key}"},
                timeout=config.request_timeout,
            )
        except (requests.Timeout, requests.ConnectionError) as e:
            raise LlmTransientError(str(e)) from e
        if response.status_code in self.AUTH_STATUS:
            raise LlmAuthError(f"authentication rejected (HTTP {response.status_code})")
        if response.status_code in self.RETRYABLE_STATUS:
            raise LlmTransientError(f"HTTP {response.status_code}")
        if response.status_code != 200:
            raise LlmRequestError(f"HTTP {response.status_code}: {response.text[:200]}")
        try:
            body = response.json()
            choice = body["choices"][0]
            text = choice["message"]["content"] or ""
            finish = choice.get("finish_reason", "stop")
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise LlmRequestError(f"malformed provider response: {e}") from e
        reason = FinishReason.TRUNCATED if finish == "length" else (
            FinishReason.COMPLETE if text.strip() else FinishReason.ERROR
        )
        return LlmReply(text=text, finish_reason=reason)


class ScriptedBackend:
    """Deterministic mock returning canned replies keyed by block identifier."""

    def __init__(self, replies: Mapping[str, str]):
        self._replies = dict(replies)

    @classmethod
    def from_json(cls, path: str | Path) -> "ScriptedBackend":
        data = json.loads(Path(path).read_text("utf-8"))
        if not isinstance(data, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in data.items()
        ):
            raise LlmRequestError(f"{path}: scripted replies must be a str->str object")
        return cls(data)

    def send(self, prompt: ChatPrompt, config: LlmConfig, key: str) -> LlmReply:
        try:
            text = self._replies[key]
        except KeyError:
            raise LlmRequestError(f"no scripted reply for key {key!r}") from None
        return LlmReply(text=text, finish_reason=FinishReason.COMPLETE)


def prompt_fingerprint(prompt: ChatPrompt) -> str:
    digest = hashlib.sha256()
    digest.update(prompt.system.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(prompt.user.encode("utf-8"))
    return digest.hexdigest()


class ReplayBackend:
    """Replays a recorded transcript: JSON lines of {key, prompt_hash, reply}."""

    def __init__(self, path: str | Path):
        self._entries: dict[tuple[str, str], str] = {}
        path = Path(path)
        for ln, raw in enumerate(path.read_text("utf-8").splitlines(), 1):
            if not raw.strip():
                continue
            try:
                entry = json.loads(raw)
                self._entries[(entry["key"], entry["prompt_hash"])] = entry["reply"]
            except (ValueError, KeyError, TypeError) as e:
                raise LlmRequestError(f"{path}:{ln}: bad transcript line: {e}") from e

    def send(self, prompt: ChatPrompt, config: LlmConfig, key: str) -> LlmReply:
        fingerprint = prompt_fingerprint(prompt)
        try:
            text = self._entries[(key, fingerprint)]
        except KeyError:
            raise LlmRequestError(
                f"transcript has no entry for key {key!r} with this prompt"
            ) from None
        return LlmReply(text=text, finish_reason=FinishReason.COMPLETE)


class TranscriptRecorder:
    """Wraps a backend and appends every successful reply to a transcript."""

    def __init__(self, inner: LlmBackend, path: str | Path):
        self._inner = inner
        self._path = Path(path)
        self._lock = threading.Lock()

    def send(self, prompt: ChatPrompt, config: LlmConfig, key: str) -> LlmReply:
        reply = self._inner.send(prompt, config, key)
        line = json.dumps(
            {"key": key, "prompt_hash": prompt_fingerprint(prompt), "reply": reply.text},
            ensure_ascii=False,
        )
        with self._lock, self._path.open("a", encoding="utf-8") as sink:
            sink.write(line + "\n")
        return reply
