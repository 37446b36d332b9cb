"""Minimal client for OpenAI-compatible chat-completion endpoints."""

from __future__ import annotations

import json
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import httpx

from .verbalize import PromptSpec

ENV_ENDPOINT = "LFCDA_LLM_ENDPOINT"
ENV_MODEL = "LFCDA_LLM_MODEL"
ENV_KEY = "LFCDA_LLM_KEY"


class LLMError(RuntimeError):
    pass


class LLMNetworkError(LLMError):
    """Endpoint unreachable or kept failing transiently after all retries."""


class LLMAuthError(LLMError):
    pass


class LLMOutputError(LLMError):
    """The reply could not be parsed into ``{text_a, text_b}``."""


@dataclass(frozen=True)
class LLMConfig:
    endpoint: str
    model: str = "gpt-4o-mini"
    api_key: str | None = None
    temperature: float = 0.7
    max_retries: int = 3
    backoff: float = 0.5
    timeout: float = 30.0
    max_in_flight: int = 4

    @classmethod
    def from_env(cls, env: dict | None = None, **overrides) -> "LLMConfig":
        env = os.environ if env is None else env
        endpoint = overrides.pop("endpoint", None) or env.get(ENV_ENDPOINT)
        if not endpoint:
            raise LLMError(f"no LLM endpoint configured (set {ENV_ENDPOINT})")
        fields = {"endpoint": endpoint}
        if env.get(ENV_MODEL):
            fields["model"] = env[ENV_MODEL]
        if env.get(ENV_KEY):
            fields["api_key"] = env[ENV_KEY]
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**fields)

    @property
    def url(self) -> str:
        return self.endpoint.rstrip("/") + "/chat/completions"


_FENCE_RE = re.compile(r"```(?:json)?\s*(.*?)```", re.S)


def parse_reply(content: str) -> dict[str, str]:
    """Extract ``text_a``/``text_b`` from a model reply, tolerating code fences."""
    m = _FENCE_RE.search(content)
    body = m.group(1) if m else content
    start, end = body.find("{"), body.rfind("}")
    if start < 0 or end < start:
        raise LLMOutputError(f"no JSON object in reply: {content[:200]!r}")
    try:
        data = json.loads(body[start:end + 1])
    except json.JSONDecodeError as e:
        raise LLMOutputError(f"reply is not valid JSON: {e}") from None
    out = {}
    for name in ("text_a", "text_b"):
        value = data.get(name) if isinstance(data, dict) else None
        if not isinstance(value, str) or not value.strip():
            raise LLMOutputError(f"reply lacks a non-empty {name!r} field")
        out[name] = value.strip()
    return out


def _transient(status: int) -> bool:
    return status == 429 or status >= 500


def llm_instantiate(spec: PromptSpec, cfg: LLMConfig, client: httpx.Client | None = None,
                    sleep: Callable[[float], None] = time.sleep) -> dict[str, str]:
    """Send one chat-completion request for ``spec`` and parse the two texts.

    Transport errors, 429 and 5xx responses are retried up to
    ``cfg.max_retries`` times with exponential backoff.  401/403 raise
    :class:`LLMAuthError` immediately.
    """
    headers = {"Content-Type": "application/json"}
    if cfg.api_key:
        headers["Authorization"] = f"Bearer {cfg.api_key}"
    body = {"model": cfg.model, "messages": spec.messages(), "temperature": cfg.temperature}
    own = client is None
    client = client or httpx.Client(timeout=cfg.timeout)
    last = "no attempt made"
    try:
        for attempt in range(cfg.max_retries + 1):
            if attempt:
                sleep(cfg.backoff * 2 ** (attempt - 1))
            try:
                resp = client.post(cfg.url, json=body, headers=headers)
            except httpx.TransportError as e:
                last = f"{type(e).__name__}: {e}"
                continue
            if resp.status_code in (401, 403):
                raise LLMAuthError(f"endpoint rejected credentials (HTTP {resp.status_code})")
            if _transient(resp.status_code):
                last = f"HTTP {resp.status_code}"
                continue
            if resp.status_code >= 400:
                raise LLMError(f"endpoint returned HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                content = resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError):
                raise LLMOutputError("response is not a chat-completion body") from None
            return parse_reply(content or "")
    finally:
        if own:
            client.close()
    raise LLMNetworkError(f"giving up on {cfg.url} after {cfg.max_retries} retries ({last})")


def instantiate_many(specs: Sequence[PromptSpec], cfg: LLMConfig,
                     client: httpx.Client | None = None, return_exceptions: bool = False,
                     sleep: Callable[[float], None] = time.sleep) -> list:
    """Run :func:`llm_instantiate` over ``specs`` with at most ``cfg.max_in_flight`` requests in flight.

    Results come back in input order.  With ``return_exceptions`` an
    :class:`LLMError` is placed in the result list instead of being raised.
    """
    def one(spec: PromptSpec):
        try:
            return llm_instantiate(spec, cfg, client, sleep)
        except LLMError as e:
            if return_exceptions:
                return e
            raise

    own = client is None
    client = client or httpx.Client(timeout=cfg.timeout)
    try:
        with ThreadPoolExecutor(max_workers=max(1, cfg.max_in_flight)) as pool:
            return list(pool.map(one, specs))
    finally:
        if own:
            client.close()
