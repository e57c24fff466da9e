"""Session dialogue state and the environment context fed to the backend."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class DialogueTurn:
    user: str
    reply: str


@dataclass
class DialogueHistory:
    """Completed (user, reply) exchanges, strictly append-only."""

    session_id: str
    turns: list = field(default_factory=list)

    def append(self, user: str, reply: str) -> None:
        self.turns.append(DialogueTurn(user=user, reply=reply))

    def __len__(self) -> int:
        return len(self.turns)


@dataclass(frozen=True)
class EnvironmentContext:
    scene_image_ref: str
    object_inventory: tuple  # ((object_name, (part, ...)), ...)
    free_text_summary: str = ""

    def __post_init__(self):
        inv = tuple((name, tuple(parts)) for name, parts in self.object_inventory)
        object.__setattr__(self, "object_inventory", inv)

    @classmethod
    def from_frame(cls, frame, scene_image_ref: str = "frame/color.png", summary: str = "") -> "EnvironmentContext":
        return cls(
            scene_image_ref=scene_image_ref,
            object_inventory=tuple((name, tuple(parts)) for name, parts in frame.inventory()),
            free_text_summary=summary,
        )
