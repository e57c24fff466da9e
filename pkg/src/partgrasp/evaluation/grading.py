"""Mechanized grading of predicted action sequences against gold annotations.

Gold file: JSON list of
    {"instruction": str, "level": "simple|ordinary|complex",
     "expected_sequence": <sequence object>,
     "expected_substructures": [{"object": str, "part": str?}, ...]}

Prediction file: JSON list of {"instruction": str, "output": str} where
``output`` is the raw backend text (extraction and parsing happen here).

Conventions (frozen so results are reproducible):
  - semantic correctness R = 1 iff the multiset of (action, target object)
    pairs matches gold;
  - field counts compare the flattened predicted JSON leaves against gold by
    path, with the total taken over the *predicted* fields (correct and
    incorrect alike);
  - substructure counts S measure how many gold (object [, part]) targets
    appear among the predicted step targets;
  - an unparseable prediction grades as R=0, F=0/1, S=0/S_total.
"""

from __future__ import annotations

import json
from collections import Counter

from ..dialogue.inference import extract_json_object
from ..dialogue.schema import (
    ActionSequence,
    TargetQuery,
    _norm_name,
    parse_action_sequence,
    sequence_to_dict,
)
from ..errors import SequenceParseError
from .metrics import InstructionRecord


def flatten_fields(doc, prefix: str = "$") -> dict:
    """Leaf fields of a JSON document keyed by path; list items index by
    position."""
    out = {}
    if isinstance(doc, dict):
        for key in sorted(doc):
            out.update(flatten_fields(doc[key], f"{prefix}.{key}"))
    elif isinstance(doc, list):
        for i, item in enumerate(doc):
            out.update(flatten_fields(item, f"{prefix}[{i}]"))
    else:
        out[prefix] = doc
    return out


def _action_object_multiset(seq: ActionSequence) -> Counter:
    return Counter((step.action, step.target.normalized_object) for step in seq.steps)


def _substructure_recovered(sub: dict, seq: ActionSequence) -> bool:
    obj = _norm_name(sub["object"])
    part = _norm_name(sub["part"]) if sub.get("part") else None
    for step in seq.steps:
        if step.target.normalized_object == obj and (
            part is None or step.target.normalized_part == part
        ):
            return True
    return False


def grade_sequence(predicted: ActionSequence | None, gold: ActionSequence, gold_substructures) -> tuple:
    """(R, F_correct, F_total, S_correct, S_total) per the grading
    conventions above."""
    subs = list(gold_substructures)
    if not subs:
        raise ValueError("gold annotations must list at least one substructure")
    s_total = len(subs)
    if predicted is None:
        return (0, 0, 1, 0, s_total)
    r = 1 if _action_object_multiset(predicted) == _action_object_multiset(gold) else 0
    pred_fields = flatten_fields(sequence_to_dict(predicted))
    gold_fields = flatten_fields(sequence_to_dict(gold))
    f_total = len(pred_fields)
    f_correct = sum(1 for path, value in pred_fields.items() if gold_fields.get(path) == value)
    s_correct = sum(1 for sub in subs if _substructure_recovered(sub, predicted))
    return (r, f_correct, f_total, s_correct, s_total)


def load_gold(path) -> list:
    with open(path) as fh:
        entries = json.load(fh)
    out = []
    for entry in entries:
        out.append(
            {
                "instruction": entry["instruction"],
                "level": entry["level"],
                "sequence": parse_action_sequence(json.dumps(entry["expected_sequence"])),
                "substructures": entry["expected_substructures"],
            }
        )
    return out


def load_predictions(path) -> dict:
    """instruction -> raw output text."""
    with open(path) as fh:
        entries = json.load(fh)
    return {entry["instruction"]: entry["output"] for entry in entries}


def parse_prediction(raw_text: str) -> ActionSequence | None:
    raw = extract_json_object(raw_text)
    if raw is None:
        return None
    try:
        return parse_action_sequence(raw)
    except SequenceParseError:
        return None


def records_from_files(gold_path, pred_path) -> list:
    """One InstructionRecord per gold instruction; missing predictions grade
    as unparseable."""
    gold = load_gold(gold_path)
    preds = load_predictions(pred_path)
    records = []
    for entry in gold:
        raw = preds.get(entry["instruction"])
        predicted = parse_prediction(raw) if raw is not None else None
        r, fc, ft, sc, st = grade_sequence(predicted, entry["sequence"], entry["substructures"])
        records.append(
            InstructionRecord(
                instruction=entry["instruction"],
                level=entry["level"],
                r=r,
                f_correct=fc,
                f_total=ft,
                s_correct=sc,
                s_total=st,
            )
        )
    return records
