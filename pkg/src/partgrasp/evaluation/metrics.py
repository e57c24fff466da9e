"""Instruction-level quality metrics.

Semantic understanding is the mean of per-instruction binary correctness;
structured output and inference granularity are means of per-instruction
correct/total ratios (fields and target substructures respectively). Each is
a mean of values in [0, 1] and permutation-invariant over the records.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UndefinedMetricError

LEVELS = ("simple", "ordinary", "complex")


@dataclass(frozen=True)
class InstructionRecord:
    instruction: str
    level: str
    r: int  # binary semantic correctness
    f_correct: int
    f_total: int
    s_correct: int
    s_total: int

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"unknown instruction level {self.level!r}")
        if self.r not in (0, 1):
            raise ValueError("r must be 0 or 1")
        if not 0 <= self.f_correct <= self.f_total or self.f_total < 1:
            raise ValueError("field counts must satisfy 0 <= correct <= total, total >= 1")
        if not 0 <= self.s_correct <= self.s_total or self.s_total < 1:
            raise ValueError("substructure counts must satisfy 0 <= correct <= total, total >= 1")


def _require_records(records):
    records = list(records)
    if not records:
        raise UndefinedMetricError("metric undefined over an empty record set")
    return records


def compute_su(records) -> float:
    records = _require_records(records)
    return sum(rec.r for rec in records) / len(records)


def compute_so(records) -> float:
    records = _require_records(records)
    if any(rec.f_total < 1 for rec in records):
        raise UndefinedMetricError("structured-output ratio undefined for zero fields")
    return sum(rec.f_correct / rec.f_total for rec in records) / len(records)


def compute_ig(records) -> float:
    records = _require_records(records)
    if any(rec.s_total < 1 for rec in records):
        raise UndefinedMetricError("granularity ratio undefined for zero substructures")
    return sum(rec.s_correct / rec.s_total for rec in records) / len(records)


@dataclass(frozen=True)
class MetricsReport:
    levels: dict  # level -> {"su", "so", "ig", "overall", "n"}
    overall: dict  # same keys over all records

    def to_dict(self) -> dict:
        return {"levels": self.levels, "overall": self.overall}

    def to_text(self) -> str:
        header = f"{'level':<10}{'N':>4}{'SU':>9}{'SO':>9}{'IG':>9}{'Overall':>10}"
        lines = [header, "-" * len(header)]

        def fmt(name, row):
            return (
                f"{name:<10}{row['n']:>4}"
                f"{row['su'] * 100:>8.1f}%{row['so'] * 100:>8.1f}%"
                f"{row['ig'] * 100:>8.1f}%{row['overall'] * 100:>9.1f}%"
            )

        for level in LEVELS:
            if level in self.levels:
                lines.append(fmt(level, self.levels[level]))
        lines.append(fmt("all", self.overall))
        return "\n".join(lines)


def _row(records) -> dict:
    su, so, ig = compute_su(records), compute_so(records), compute_ig(records)
    return {
        "su": su,
        "so": so,
        "ig": ig,
        "overall": (su + so + ig) / 3.0,  # unweighted mean of the three
        "n": len(records),
    }


def build_report(records) -> MetricsReport:
    records = _require_records(records)
    levels = {}
    for level in LEVELS:
        subset = [r for r in records if r.level == level]
        if subset:
            levels[level] = _row(subset)
    return MetricsReport(levels=levels, overall=_row(records))
