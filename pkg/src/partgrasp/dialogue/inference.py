"""Backend-facing inference: plain chat turns, confirmation-gated emission of
the structured action sequence (with schema-error retry feedback), and step
iteration."""

from __future__ import annotations

import re

from ..errors import MalformedOutputError, SequenceParseError
from .backends import ChatBackend
from .history import DialogueHistory, EnvironmentContext
from .prompt import build_messages
from .schema import ActionSequence, ActionStep, parse_action_sequence

CONFIRMATION_PATTERN = re.compile(r"\bconfirm\b", re.IGNORECASE)

# Retries after the first malformed reply; feedback with the diagnostic code
# is appended before each retry.
DEFAULT_RETRIES = 2


def is_confirmation(text: str) -> bool:
    return bool(CONFIRMATION_PATTERN.search(text))


def extract_json_object(text: str) -> str | None:
    """Outermost brace-balanced JSON object embedded in ``text`` (string
    literals are skipped); None if there is none."""
    start = text.find("{")
    if start < 0:
        return None
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[start : i + 1]
    return None


def chat(backend: ChatBackend, env: EnvironmentContext, history: DialogueHistory, user_text: str) -> str:
    """One clarification exchange; the completed turn is appended."""
    reply = backend.complete(build_messages(env, history, user_text))
    history.append(user_text, reply)
    return reply


def infer_action_sequence(
    backend: ChatBackend,
    env: EnvironmentContext,
    history: DialogueHistory,
    user_text: str,
    force: bool = False,
    retries: int = DEFAULT_RETRIES,
) -> ActionSequence:
    """Emit and validate the structured sequence.

    The final user turn must be a confirmation command unless ``force`` is
    set. On success the exchange is appended to the history; on repeated parse
    failure the history is left untouched and a MalformedOutputError carries
    the raw text plus every diagnostic.
    """
    if not force and not is_confirmation(user_text):
        raise ValueError("final user turn must be a confirmation command (or pass force=True)")
    messages = build_messages(env, history, user_text)
    diagnostics = []
    reply = ""
    for _ in range(retries + 1):
        reply = backend.complete(messages)
        raw = extract_json_object(reply)
        if raw is None:
            diag = SequenceParseError("invalid_json", "reply contains no JSON object")
        else:
            try:
                seq = parse_action_sequence(raw)
                history.append(user_text, reply)
                return seq
            except SequenceParseError as exc:
                diag = exc
        diagnostics.append({"code": diag.code, "message": str(diag), "path": getattr(diag, "path", "$")})
        messages = messages + [
            {"role": "assistant", "content": reply},
            {
                "role": "user",
                "content": f"The reply failed validation ({diag.code}: {diag}). "
                "Respond again with exactly one corrected JSON object.",
            },
        ]
    raise MalformedOutputError(
        f"backend output failed parsing after {retries} retries", raw=reply, diagnostics=diagnostics
    )


_DONE = object()


def next_step(seq: ActionSequence, cursor: int):
    """Step ``cursor + 1`` of the sequence, or None once all steps are done.
    Out-of-range cursors raise IndexError."""
    if not 0 <= cursor <= len(seq):
        raise IndexError(f"cursor {cursor} outside 0..{len(seq)}")
    if cursor == len(seq):
        return None
    return seq.steps[cursor]
