"""Assessment result type and its JSON / Markdown renderings.

The JSON form is canonical: object keys sorted, arrays in report order,
real-valued metrics fixed to six decimal places, UTF-8 with a trailing
newline. Reports with identical content therefore serialize to identical
bytes, which makes golden-file comparison in CI meaningful. The Markdown
form mirrors the same content for human review; levels always render with
both numeral and label ("4-Critical") in both forms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .metrics import DrResult
from .model import ExposureLevel, RiskLevel, SeverityLevel, SeverityRating, global_severity

if TYPE_CHECKING:  # row types are produced by the engine
    from .engine import ExploitabilityRow, FlaggedRecord, RiskRow


@dataclass(frozen=True)
class AttributeSeverityEntry:
    attribute: str
    rating: SeverityRating

    @property
    def global_level(self) -> SeverityLevel:
        return global_severity(self.rating)


@dataclass(frozen=True)
class ValueSeverityEntry:
    attribute: str
    value: str
    level: SeverityLevel


@dataclass(frozen=True)
class ExposureEntry:
    attribute: str
    exposure: ExposureLevel


@dataclass(frozen=True)
class LDiversityEntry:
    sensitive: str
    l_value: int


@dataclass(frozen=True)
class MetricsAppendix:
    """Raw metric values backing the levels, so a report can be re-derived."""

    qi_set: tuple[str, ...]
    k_anonymity: int
    l_diversity: tuple[LDiversityEntry, ...]
    dr_results: tuple[DrResult, ...]


@dataclass(frozen=True)
class AssessmentReport:
    dataset_label: str
    row_count: int
    attribute_severity_table: tuple[AttributeSeverityEntry, ...]
    value_severity_table: tuple[ValueSeverityEntry, ...]
    exposure_table: tuple[ExposureEntry, ...]
    exploitability_rows: tuple["ExploitabilityRow", ...]
    risk_rows: tuple["RiskRow", ...]
    overall_risk: RiskLevel
    flagged_records: tuple["FlaggedRecord", ...]
    metrics_appendix: MetricsAppendix
    warnings: tuple[str, ...]


def _num(x: float) -> str:
    return f"{x:.6f}"


def _level(level) -> dict:
    return {"level": int(level), "label": level.label}


def _dr_entry(dr: DrResult) -> dict:
    return {
        "qi": list(dr.qi_set),
        "sensitive": dr.sensitive,
        "h_s": _num(dr.h_s),
        "h_s_given_qi": _num(dr.h_s_given_qi),
        "dr": _num(dr.dr),
        "inference": _level(dr.inference),
    }


def report_to_dict(report: AssessmentReport) -> dict:
    """Plain-data form of a report (the JSON document before encoding)."""
    return {
        "dataset_label": report.dataset_label,
        "row_count": report.row_count,
        "attribute_severity_table": [
            {
                "attribute": e.attribute,
                "bodily": _level(e.rating.bodily),
                "material": _level(e.rating.material),
                "moral": _level(e.rating.moral),
                "global": _level(e.global_level),
            }
            for e in report.attribute_severity_table
        ],
        "value_severity_table": [
            {"attribute": e.attribute, "value": e.value, "severity": _level(e.level)}
            for e in report.value_severity_table
        ],
        "exposure_table": [
            {"attribute": e.attribute, "exposure": _level(e.exposure)}
            for e in report.exposure_table
        ],
        "exploitability_rows": [
            {
                "sensitive": row.sensitive,
                "combination": list(row.combination.members),
                "origin": row.combination.origin.value,
                "exposure": _level(row.combination.exposure),
                "inference": _level(row.inference),
                "dr": _num(row.dr.dr),
                "exploitability": _level(row.exploitability),
            }
            for row in report.exploitability_rows
        ],
        "risk_rows": [
            {
                "description": row.description,
                "sensitive": row.sensitive,
                "combination": list(row.members),
                "exploitability": _level(row.exploitability),
                "severity": _level(row.severity),
                "risk": _level(row.risk),
            }
            for row in report.risk_rows
        ],
        "overall_risk": _level(report.overall_risk),
        "flagged_records": [
            {
                "row": rec.row_index + 1,
                "attribute": rec.attribute,
                "value": rec.sensitive_value,
                "value_severity": _level(rec.value_severity),
                "class_inference": _num(rec.class_inference),
                "record_risk": _level(rec.record_risk),
            }
            for rec in report.flagged_records
        ],
        "metrics_appendix": {
            "qi_set": list(report.metrics_appendix.qi_set),
            "k_anonymity": report.metrics_appendix.k_anonymity,
            "l_diversity": [
                {"sensitive": e.sensitive, "l": e.l_value}
                for e in report.metrics_appendix.l_diversity
            ],
            "discrimination_rates": [
                _dr_entry(dr) for dr in report.metrics_appendix.dr_results
            ],
        },
        "warnings": list(report.warnings),
    }


def to_json(report: AssessmentReport) -> bytes:
    """Canonical JSON bytes: sorted keys, fixed formatting, trailing newline."""
    payload = report_to_dict(report)
    text = json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return (text + "\n").encode("utf-8")


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("|" + "|".join(" --- " for _ in header) + "|")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return lines


def to_markdown(report: AssessmentReport) -> str:
    """Human-readable report with sections in fixed order."""
    out: list[str] = []
    out.append(f"# Re-identification Risk Assessment: {report.dataset_label}")
    out.append("")

    out.append("## Summary")
    out.append("")
    out.append(f"- Dataset: {report.dataset_label} ({report.row_count} rows)")
    out.append(f"- Overall risk: **{report.overall_risk.display}**")
    out.append("")

    out.append("## Severity")
    out.append("")
    if report.attribute_severity_table:
        out.extend(
            _table(
                ["Attribute", "Bodily", "Material", "Moral", "Global"],
                [
                    [
                        e.attribute,
                        e.rating.bodily.display,
                        e.rating.material.display,
                        e.rating.moral.display,
                        e.global_level.display,
                    ]
                    for e in report.attribute_severity_table
                ],
            )
        )
    else:
        out.append("none")
    out.append("")
    if report.value_severity_table:
        out.append("Value severity overrides:")
        out.append("")
        out.extend(
            _table(
                ["Attribute", "Value", "Severity"],
                [
                    [e.attribute, e.value, e.level.display]
                    for e in report.value_severity_table
                ],
            )
        )
        out.append("")

    out.append("## Exposure")
    out.append("")
    if report.exposure_table:
        out.extend(
            _table(
                ["Attribute", "Exposure"],
                [[e.attribute, e.exposure.display] for e in report.exposure_table],
            )
        )
    else:
        out.append("none")
    out.append("")

    out.append("## Exploitability")
    out.append("")
    out.extend(
        _table(
            ["Sensitive", "Combination", "Exposure", "Inference", "Exploitability"],
            [
                [
                    row.sensitive,
                    "/".join(row.combination.members),
                    row.combination.exposure.display,
                    row.inference.display,
                    row.exploitability.display,
                ]
                for row in report.exploitability_rows
            ],
        )
    )
    out.append("")

    out.append("## Risk")
    out.append("")
    out.extend(
        _table(
            ["Description", "Exploitability", "Severity", "Risk Level"],
            [
                [row.description, row.exploitability.display, row.severity.display, row.risk.display]
                for row in report.risk_rows
            ],
        )
    )
    out.append("")

    out.append("## Flagged Records")
    out.append("")
    if report.flagged_records:
        out.extend(
            _table(
                ["Row", "Attribute", "Value", "Severity", "Class Inference", "Record Risk"],
                [
                    [
                        f"**{rec.row_index + 1}**",
                        f"**{rec.attribute}**",
                        f"**{rec.sensitive_value}**",
                        f"**{rec.value_severity.display}**",
                        f"**{_num(rec.class_inference)}**",
                        f"**{rec.record_risk.display}**",
                    ]
                    for rec in report.flagged_records
                ],
            )
        )
    else:
        out.append("none")
    out.append("")

    appendix = report.metrics_appendix
    out.append("## Metrics Appendix")
    out.append("")
    out.append(f"- k-anonymity over {'/'.join(appendix.qi_set)}: {appendix.k_anonymity}")
    for entry in appendix.l_diversity:
        out.append(f"- distinct l-diversity for {entry.sensitive}: {entry.l_value}")
    out.append("")
    out.extend(
        _table(
            ["Sensitive", "Quasi-identifiers", "H(S)", "H(S|QI)", "DR", "Inference"],
            [
                [
                    dr.sensitive,
                    "/".join(dr.qi_set),
                    _num(dr.h_s),
                    _num(dr.h_s_given_qi),
                    _num(dr.dr),
                    dr.inference.display,
                ]
                for dr in appendix.dr_results
            ],
        )
    )
    out.append("")

    out.append("## Warnings")
    out.append("")
    if report.warnings:
        out.extend(f"- {w}" for w in report.warnings)
    else:
        out.append("none")
    out.append("")

    return "\n".join(out)
