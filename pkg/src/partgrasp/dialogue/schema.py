"""The frozen action-sequence contract.

A sequence is a JSON object:

    {
      "task_description": "...",
      "steps": [
        {"index": 1, "action": "grasp",
         "target": {"object": "hammer", "part": "handle", "features": ["wooden"]},
         "params": {"destination": {"object": "basket"}}}
      ]
    }

``action`` is one of detect / grasp / place / handover. ``part``, ``features``
and ``params`` are optional; ``place`` steps must carry a destination.
Indices run 1..n in order, and an object must be grasped before it is placed
or handed over. Each violation class maps to one diagnostic code, which the
structured-output grader and the mutation tests key on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import SequenceParseError

ACTIONS = ("detect", "grasp", "place", "handover")

# Diagnostic codes for the rejection catalogue.
INVALID_JSON = "invalid_json"
MISSING_FIELD = "missing_field"
WRONG_TYPE = "wrong_type"
UNKNOWN_ACTION = "unknown_action"
EMPTY_STEPS = "empty_steps"
DUPLICATE_INDEX = "duplicate_index"
BAD_INDEX_SEQUENCE = "bad_index_sequence"
MISSING_DESTINATION = "missing_destination"
ORDER_VIOLATION = "order_violation"
UNEXPECTED_FIELD = "unexpected_field"
EMPTY_FIELD = "empty_field"


def _norm_name(name: str) -> str:
    return " ".join(str(name).strip().lower().replace("_", " ").split())


@dataclass(frozen=True)
class TargetQuery:
    object_name: str
    part_name: str | None = None
    features: tuple = ()

    def __post_init__(self):
        if not self.object_name or not str(self.object_name).strip():
            raise SequenceParseError(EMPTY_FIELD, "target object must be non-empty")
        if self.part_name is not None and not str(self.part_name).strip():
            raise SequenceParseError(EMPTY_FIELD, "target part, when present, must be non-empty")
        object.__setattr__(self, "features", tuple(self.features))

    @property
    def normalized_object(self) -> str:
        return _norm_name(self.object_name)

    @property
    def normalized_part(self) -> str | None:
        return _norm_name(self.part_name) if self.part_name else None


@dataclass(frozen=True)
class ActionStep:
    index: int
    action: str
    target: TargetQuery
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise SequenceParseError(UNKNOWN_ACTION, f"unknown action {self.action!r}")
        if self.action == "place" and "destination" not in self.params:
            raise SequenceParseError(
                MISSING_DESTINATION, f"place step {self.index} has no destination"
            )
        object.__setattr__(self, "params", dict(self.params))


@dataclass(frozen=True)
class ActionSequence:
    task_description: str
    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise SequenceParseError(EMPTY_STEPS, "sequence has no steps")
        indices = [s.index for s in self.steps]
        if len(set(indices)) != len(indices):
            raise SequenceParseError(DUPLICATE_INDEX, f"duplicate step indices {indices}")
        if indices != list(range(1, len(indices) + 1)):
            raise SequenceParseError(
                BAD_INDEX_SEQUENCE, f"indices must run 1..n in order, got {indices}"
            )
        grasped = set()
        for step in self.steps:
            obj = step.target.normalized_object
            if step.action == "grasp":
                grasped.add(obj)
            elif step.action in ("place", "handover") and obj not in grasped:
                # only a violation if some later grasp targets the same object
                later = any(
                    s.action == "grasp" and s.target.normalized_object == obj
                    for s in self.steps
                    if s.index > step.index
                )
                if later:
                    raise SequenceParseError(
                        ORDER_VIOLATION,
                        f"{step.action} of {obj!r} at step {step.index} precedes its grasp",
                    )

    def __len__(self) -> int:
        return len(self.steps)


def _require(obj: dict, key: str, types, path: str, type_names: str):
    if key not in obj:
        raise SequenceParseError(MISSING_FIELD, f"missing field {key!r}", path=f"{path}.{key}")
    value = obj[key]
    if not isinstance(value, types) or isinstance(value, bool):
        raise SequenceParseError(
            WRONG_TYPE, f"field {key!r} must be {type_names}", path=f"{path}.{key}"
        )
    return value


def _parse_target(obj, path: str) -> TargetQuery:
    if not isinstance(obj, dict):
        raise SequenceParseError(WRONG_TYPE, "target must be an object", path=path)
    extra = set(obj) - {"object", "part", "features"}
    if extra:
        raise SequenceParseError(
            UNEXPECTED_FIELD, f"unexpected target fields {sorted(extra)}", path=path
        )
    name = _require(obj, "object", str, path, "a string")
    part = obj.get("part")
    if part is not None and (not isinstance(part, str) or isinstance(part, bool)):
        raise SequenceParseError(WRONG_TYPE, "part must be a string", path=f"{path}.part")
    features = obj.get("features", [])
    if not isinstance(features, list) or any(not isinstance(f, str) for f in features):
        raise SequenceParseError(
            WRONG_TYPE, "features must be a list of strings", path=f"{path}.features"
        )
    return TargetQuery(object_name=name, part_name=part, features=tuple(features))


def _parse_step(obj, path: str) -> ActionStep:
    if not isinstance(obj, dict):
        raise SequenceParseError(WRONG_TYPE, "step must be an object", path=path)
    extra = set(obj) - {"index", "action", "target", "params"}
    if extra:
        raise SequenceParseError(
            UNEXPECTED_FIELD, f"unexpected step fields {sorted(extra)}", path=path
        )
    index = _require(obj, "index", int, path, "an integer")
    action = _require(obj, "action", str, path, "a string")
    target = _parse_target(_require(obj, "target", dict, path, "an object"), f"{path}.target")
    params_obj = obj.get("params", {})
    if not isinstance(params_obj, dict):
        raise SequenceParseError(WRONG_TYPE, "params must be an object", path=f"{path}.params")
    extra = set(params_obj) - {"destination"}
    if extra:
        raise SequenceParseError(
            UNEXPECTED_FIELD, f"unexpected params fields {sorted(extra)}", path=f"{path}.params"
        )
    params = {}
    if "destination" in params_obj:
        params["destination"] = _parse_target(params_obj["destination"], f"{path}.params.destination")
    return ActionStep(index=index, action=action, target=target, params=params)


def parse_action_sequence(raw: str) -> ActionSequence:
    """Parse and validate the frozen contract; raises SequenceParseError with
    a per-violation diagnostic code."""
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SequenceParseError(INVALID_JSON, f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SequenceParseError(WRONG_TYPE, "top level must be a JSON object")
    extra = set(doc) - {"task_description", "steps"}
    if extra:
        raise SequenceParseError(UNEXPECTED_FIELD, f"unexpected fields {sorted(extra)}")
    task = _require(doc, "task_description", str, "$", "a string")
    steps_obj = _require(doc, "steps", list, "$", "a list")
    steps = tuple(_parse_step(s, f"$.steps[{i}]") for i, s in enumerate(steps_obj))
    return ActionSequence(task_description=task, steps=steps)


def target_to_dict(target: TargetQuery) -> dict:
    out = {"object": target.object_name}
    if target.part_name is not None:
        out["part"] = target.part_name
    if target.features:
        out["features"] = list(target.features)
    return out


def step_to_dict(step: ActionStep) -> dict:
    out = {"index": step.index, "action": step.action, "target": target_to_dict(step.target)}
    if step.params:
        out["params"] = {k: target_to_dict(v) for k, v in step.params.items()}
    return out


def sequence_to_dict(seq: ActionSequence) -> dict:
    return {
        "task_description": seq.task_description,
        "steps": [step_to_dict(s) for s in seq.steps],
    }


def serialize_action_sequence(seq: ActionSequence) -> str:
    return json.dumps(sequence_to_dict(seq), sort_keys=True)
