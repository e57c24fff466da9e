"""Action-sequence contract: fixture round trips and the eight-class mutation
catalogue, each class rejected with its designated diagnostic code."""

import copy
import json
from pathlib import Path

import pytest

from partgrasp.dialogue import schema
from partgrasp.dialogue.schema import (
    ActionSequence,
    ActionStep,
    TargetQuery,
    parse_action_sequence,
    sequence_to_dict,
    serialize_action_sequence,
)
from partgrasp.errors import SequenceParseError

GOLD_PATH = Path(__file__).resolve().parents[1] / "assets" / "gold_instructions.json"


def gold_fixture_dicts():
    with open(GOLD_PATH) as fh:
        return [entry["expected_sequence"] for entry in json.load(fh)]


FIXTURES = gold_fixture_dicts()


def test_twelve_fixtures_shipped():
    assert len(FIXTURES) == 12


@pytest.mark.parametrize("doc", FIXTURES, ids=[f["task_description"][:24] for f in FIXTURES])
def test_fixtures_parse_and_round_trip(doc):
    seq = parse_action_sequence(json.dumps(doc))
    assert len(seq) == len(doc["steps"])
    again = parse_action_sequence(serialize_action_sequence(seq))
    assert again == seq
    assert sequence_to_dict(again) == sequence_to_dict(seq)


# --- mutation catalogue -----------------------------------------------------

def mutate_missing_field(doc):
    out = copy.deepcopy(doc)
    del out["steps"][0]["action"]
    return out


def mutate_wrong_type(doc):
    out = copy.deepcopy(doc)
    out["steps"][0]["index"] = "one"
    return out


def mutate_unknown_action(doc):
    out = copy.deepcopy(doc)
    out["steps"][0]["action"] = "throw"
    return out


def mutate_empty_steps(doc):
    out = copy.deepcopy(doc)
    out["steps"] = []
    return out


def mutate_duplicate_index(doc):
    out = copy.deepcopy(doc)
    dup = copy.deepcopy(out["steps"][0])
    out["steps"].append(dup)
    return out


def mutate_index_permutation(doc):
    out = copy.deepcopy(doc)
    for step in out["steps"]:
        step["index"] = step["index"] + 1
    return out


def mutate_missing_destination(doc):
    out = copy.deepcopy(doc)
    step = out["steps"][0]
    step["action"] = "place"
    step.pop("params", None)
    return out


def mutate_order_violation(doc):
    out = copy.deepcopy(doc)
    grasp = next(s for s in out["steps"] if s["action"] == "grasp")
    early = {"index": 1, "action": "handover", "target": copy.deepcopy(grasp["target"])}
    steps = [early] + copy.deepcopy(out["steps"])
    for i, step in enumerate(steps):
        step["index"] = i + 1
    out["steps"] = steps
    return out


MUTATIONS = [
    (mutate_missing_field, schema.MISSING_FIELD),
    (mutate_wrong_type, schema.WRONG_TYPE),
    (mutate_unknown_action, schema.UNKNOWN_ACTION),
    (mutate_empty_steps, schema.EMPTY_STEPS),
    (mutate_duplicate_index, schema.DUPLICATE_INDEX),
    (mutate_index_permutation, schema.BAD_INDEX_SEQUENCE),
    (mutate_missing_destination, schema.MISSING_DESTINATION),
    (mutate_order_violation, schema.ORDER_VIOLATION),
]


@pytest.mark.parametrize("mutate,code", MUTATIONS, ids=[m.__name__ for m, _ in MUTATIONS])
def test_mutations_rejected_with_designated_code(mutate, code):
    for doc in FIXTURES:
        mutant = mutate(doc)
        with pytest.raises(SequenceParseError) as err:
            parse_action_sequence(json.dumps(mutant))
        assert err.value.code == code, f"{mutate.__name__}: got {err.value.code}"


def test_invalid_json_and_non_object():
    with pytest.raises(SequenceParseError) as err:
        parse_action_sequence("not json {")
    assert err.value.code == schema.INVALID_JSON
    with pytest.raises(SequenceParseError) as err:
        parse_action_sequence("[1, 2]")
    assert err.value.code == schema.WRONG_TYPE


def test_unexpected_fields_rejected():
    doc = copy.deepcopy(FIXTURES[0])
    doc["confidence"] = 0.9
    with pytest.raises(SequenceParseError) as err:
        parse_action_sequence(json.dumps(doc))
    assert err.value.code == schema.UNEXPECTED_FIELD


def test_empty_object_name_rejected():
    with pytest.raises(SequenceParseError) as err:
        TargetQuery(object_name="  ")
    assert err.value.code == schema.EMPTY_FIELD


def test_programmatic_invariants():
    t = TargetQuery(object_name="pen")
    with pytest.raises(SequenceParseError):
        ActionSequence(task_description="x", steps=())
    with pytest.raises(SequenceParseError):
        ActionStep(index=1, action="place", target=t)  # no destination
    seq = ActionSequence(
        task_description="x", steps=(ActionStep(index=1, action="grasp", target=t),)
    )
    assert len(seq) == 1
