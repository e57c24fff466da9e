"""Deterministic prompt assembly: schema contract preamble, environment
inventory, then the dialogue turns in order."""

from __future__ import annotations

from .history import DialogueHistory, EnvironmentContext

SYSTEM_PREAMBLE = """\
You are the planning core of a tabletop robot with a two-finger gripper.
Clarify the user's request over dialogue. When the user confirms execution,
reply with exactly one JSON object and nothing else:

{"task_description": "<what the task is>",
 "steps": [{"index": 1, "action": "<detect|grasp|place|handover>",
            "target": {"object": "<name>", "part": "<optional part>",
                       "features": ["<optional descriptors>"]},
            "params": {"destination": {"object": "<place target>"}}}]}

Rules: actions are limited to detect, grasp, place, handover; indices run
1..n; grasp an object before placing or handing it over; place steps carry a
destination in params; prefer the functionally correct part (for example a
tool's handle for use, its head for handover)."""


def _environment_block(env: EnvironmentContext) -> str:
    lines = ["Environment:"]
    for name, parts in env.object_inventory:
        lines.append(f"- {name}: {', '.join(parts)}" if parts else f"- {name}")
    if env.free_text_summary:
        lines.append(f"Summary: {env.free_text_summary}")
    lines.append(f"Scene image: {env.scene_image_ref}")
    return "\n".join(lines)


def build_context_prompt(env: EnvironmentContext, history: DialogueHistory) -> str:
    """Full prompt as one text block; byte-identical for identical inputs."""
    parts = [SYSTEM_PREAMBLE, "", _environment_block(env), "", "Dialogue:"]
    for turn in history.turns:
        parts.append(f"User: {turn.user}")
        parts.append(f"Assistant: {turn.reply}")
    return "\n".join(parts)


def build_messages(env: EnvironmentContext, history: DialogueHistory, pending_user: str | None = None) -> list:
    """Role-tagged message list for chat-completions style backends."""
    messages = [{"role": "system", "content": SYSTEM_PREAMBLE + "\n\n" + _environment_block(env)}]
    for turn in history.turns:
        messages.append({"role": "user", "content": turn.user})
        messages.append({"role": "assistant", "content": turn.reply})
    if pending_user is not None:
        messages.append({"role": "user", "content": pending_user})
    return messages
