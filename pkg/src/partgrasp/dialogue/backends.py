"""Chat backends: a chat-completions HTTP client and a scripted mock.

Mock fixture file: a JSON list of rules, matched in file order against the
concatenated user messages of the conversation:

    [{"match": {"instruction_regex": "pick up the pen"},
      "replies": ["Understood...", "{\\"task_description\\": ...}"]}]

A rule's replies advance one entry per firing (clamping at the last), so one
rule scripts a whole ack-then-emit exchange. No matching rule is an error.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from typing import Protocol

from ..errors import BackendUnavailableError, MockMatchError


class ChatBackend(Protocol):
    def complete(self, messages: list) -> str: ...


class HttpChatBackend:
    """Chat-completions wire format: POST {base_url}/chat/completions with a
    role-tagged message list; the reply is the first choice's message text.
    Token read from an environment variable, decoding pinned to temperature 0.
    """

    def __init__(self, base_url: str, model: str, api_key_env: str = "CHAT_API_KEY", timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.timeout = timeout

    def complete(self, messages: list) -> str:
        import httpx

        headers = {}
        token = os.environ.get(self.api_key_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        payload = {"model": self.model, "messages": messages, "temperature": 0}
        try:
            resp = httpx.post(
                f"{self.base_url}/chat/completions", json=payload, headers=headers, timeout=self.timeout
            )
            resp.raise_for_status()
            body = resp.json()
            return body["choices"][0]["message"]["content"]
        except (httpx.HTTPError, KeyError, IndexError, ValueError) as exc:
            raise BackendUnavailableError(f"chat backend failed: {exc}") from exc


@dataclass
class _MockRule:
    pattern: re.Pattern
    replies: list
    fired: int = 0


class ScriptedMockBackend:
    """Deterministic fixture-driven backend; state is per instance, so a fresh
    instance per session replays identically."""

    def __init__(self, rules: list):
        self._rules = [
            _MockRule(pattern=re.compile(r["match"]["instruction_regex"], re.IGNORECASE), replies=list(r["replies"]))
            for r in rules
        ]

    @classmethod
    def from_file(cls, path) -> "ScriptedMockBackend":
        with open(path) as fh:
            return cls(json.load(fh))

    def complete(self, messages: list) -> str:
        user_text = "\n".join(m["content"] for m in messages if m.get("role") == "user")
        for rule in self._rules:
            if rule.pattern.search(user_text):
                reply = rule.replies[min(rule.fired, len(rule.replies) - 1)]
                rule.fired += 1
                return reply
        raise MockMatchError(f"no scripted reply matches the dialogue: {user_text!r}")
