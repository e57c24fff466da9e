from .metrics import (
    InstructionRecord,
    MetricsReport,
    build_report,
    compute_ig,
    compute_so,
    compute_su,
)
from .grading import grade_sequence, load_gold, load_predictions, records_from_files
from .ablation import (
    AblationCase,
    AblationConfig,
    AblationResult,
    STRATEGIES,
    load_suite,
    make_adjacency_case,
    make_adjacency_suite,
    run_ablation,
    save_suite,
    summarize,
)

__all__ = [
    "InstructionRecord",
    "MetricsReport",
    "build_report",
    "compute_su",
    "compute_so",
    "compute_ig",
    "grade_sequence",
    "load_gold",
    "load_predictions",
    "records_from_files",
    "AblationCase",
    "AblationConfig",
    "AblationResult",
    "STRATEGIES",
    "make_adjacency_case",
    "make_adjacency_suite",
    "run_ablation",
    "save_suite",
    "load_suite",
    "summarize",
]
