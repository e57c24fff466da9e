"""Exception hierarchy. Every error carries a machine-readable ``code`` so the
HTTP layer, the CLI, and the structured-output grader can report failures
without string matching."""

from __future__ import annotations


class PartGraspError(Exception):
    """Base class; ``code`` identifies the failure class, ``context`` carries
    structured payload (offending query, raw text, diagnostics...)."""

    code = "error"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context


class SceneValidationError(PartGraspError):
    code = "invalid_scene"


class EmptyMaskError(PartGraspError):
    """Segmentation query matched nothing in the frame."""

    code = "empty_mask"


class EmptyTargetError(PartGraspError):
    """ROI crop produced zero target-tagged points."""

    code = "empty_target"


class SequenceParseError(PartGraspError):
    """Action-sequence text violated the frozen JSON contract.

    ``code`` is set per instance to the diagnostic class (missing_field,
    wrong_type, unknown_action, empty_steps, duplicate_index,
    bad_index_sequence, missing_destination, order_violation, invalid_json,
    unexpected_field, empty_field).
    """

    def __init__(self, code: str, message: str, path: str = "$", **context):
        super().__init__(message, **context)
        self.code = code
        self.path = path


class BackendUnavailableError(PartGraspError):
    code = "backend_unavailable"


class MockMatchError(BackendUnavailableError):
    """Scripted mock had no rule matching the dialogue."""

    code = "mock_no_match"


class MalformedOutputError(PartGraspError):
    """Backend reply failed parsing even after retries; carries the raw text
    and every parse diagnostic collected along the way."""

    code = "malformed_output"

    def __init__(self, message: str, raw: str, diagnostics: list, **context):
        super().__init__(message, **context)
        self.raw = raw
        self.diagnostics = diagnostics


class NoGraspError(PartGraspError):
    code = "no_grasp"


class SessionStateError(PartGraspError):
    code = "invalid_state"


class UndefinedMetricError(PartGraspError):
    code = "undefined_metric"
