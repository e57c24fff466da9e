from .schema import (
    ACTIONS,
    ActionSequence,
    ActionStep,
    TargetQuery,
    parse_action_sequence,
    sequence_to_dict,
    serialize_action_sequence,
)
from .history import DialogueHistory, DialogueTurn, EnvironmentContext
from .prompt import build_context_prompt, build_messages
from .backends import ChatBackend, HttpChatBackend, ScriptedMockBackend
from .inference import chat, extract_json_object, infer_action_sequence, is_confirmation, next_step

__all__ = [
    "ACTIONS",
    "ActionSequence",
    "ActionStep",
    "TargetQuery",
    "parse_action_sequence",
    "serialize_action_sequence",
    "sequence_to_dict",
    "DialogueHistory",
    "DialogueTurn",
    "EnvironmentContext",
    "build_context_prompt",
    "build_messages",
    "ChatBackend",
    "HttpChatBackend",
    "ScriptedMockBackend",
    "chat",
    "extract_json_object",
    "infer_action_sequence",
    "is_confirmation",
    "next_step",
]
