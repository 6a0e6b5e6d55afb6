"""Assessment engine: combinations, exploitability, risk, flagged records.

Likelihood of a successful attack is modelled per quasi-identifier
combination as a matrix lookup of (exposure, inference), and risk as a
lookup of (exploitability, severity). Both matrices default to explicit
closed forms and can be overridden from metadata:

- exploitability: cell(e, i) = floor((e + i) / 2) — a middle course between
  the linkage channel (exposure) and the inference channel;
- risk: the product e * s banded at <=2 -> 1, <=6 -> 2, <=9 -> 3, else 4.

Combined exposure of a combination is the maximum over its members: the
attacker is assumed to reach every member through the most exposed channel
the combination offers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .metrics import (
    DrResult,
    band,
    discrimination_rate,
    distinct_l_diversity,
    equivalence_classes,
    k_anonymity,
    value_inference,
)
from .model import (
    AttributeMeta,
    AttributeRole,
    Dataset,
    ExploitabilityLevel,
    ExposureLevel,
    InferenceLevel,
    RiskLevel,
    ScaleMatrix,
    SeverityLevel,
    global_severity,
    validate_meta,
)
from .report import (
    AssessmentReport,
    AttributeSeverityEntry,
    ExposureEntry,
    LDiversityEntry,
    MetricsAppendix,
    ValueSeverityEntry,
)

DEFAULT_EXPLOITABILITY_MATRIX = ScaleMatrix(
    name="exploitability",
    cells=tuple(tuple((e + i) // 2 for i in range(1, 5)) for e in range(1, 5)),
)


def _risk_band(product: int) -> int:
    if product <= 2:
        return 1
    if product <= 6:
        return 2
    if product <= 9:
        return 3
    return 4


DEFAULT_RISK_MATRIX = ScaleMatrix(
    name="risk",
    cells=tuple(tuple(_risk_band(e * s) for s in range(1, 5)) for e in range(1, 5)),
)


class CombinationStrategy(str, Enum):
    PER_LEVEL = "per_level"
    CUMULATIVE = "cumulative"
    EXPLICIT = "explicit"

    @classmethod
    def parse(cls, raw: "CombinationStrategy | str") -> "CombinationStrategy":
        if isinstance(raw, cls):
            return raw
        try:
            return cls(str(raw).strip().lower())
        except ValueError:
            raise ValueError(f"unknown combination strategy {raw!r}") from None


class CombinationOrigin(str, Enum):
    INDIVIDUAL = "individual"
    PER_LEVEL_GROUP = "per_level_group"
    CUMULATIVE_GROUP = "cumulative_group"
    EXPLICIT = "explicit"


class AssessmentError(ValueError):
    """Raised when assessment preconditions fail; carries all of them."""

    def __init__(self, errors: Sequence[str]):
        self.errors = tuple(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class QiCombination:
    members: tuple[str, ...]
    exposure: ExposureLevel
    origin: CombinationOrigin


@dataclass(frozen=True)
class ExploitabilityRow:
    sensitive: str
    combination: QiCombination
    dr: DrResult
    exploitability: ExploitabilityLevel

    @property
    def inference(self) -> InferenceLevel:
        return self.dr.inference


@dataclass(frozen=True)
class RiskRow:
    description: str
    sensitive: str
    members: tuple[str, ...]
    exploitability: ExploitabilityLevel
    severity: SeverityLevel
    risk: RiskLevel


@dataclass(frozen=True)
class FlaggedRecord:
    """A record whose sensitive value is severe enough to call out.

    ``row_index`` is 0-based; reports render it 1-based to match the way
    source tables are usually numbered. ``class_inference`` is the
    per-class inference score of the record's equivalence class under the
    highest-exposure combination.
    """

    row_index: int
    attribute: str
    sensitive_value: str
    value_severity: SeverityLevel
    class_inference: float
    record_risk: RiskLevel


@dataclass(frozen=True)
class AssessmentOptions:
    flag_threshold: int = 3
    combination_strategy: CombinationStrategy = CombinationStrategy.PER_LEVEL
    explicit_combinations: tuple[tuple[str, ...], ...] = ()
    exploitability_matrix: ScaleMatrix = DEFAULT_EXPLOITABILITY_MATRIX
    risk_matrix: ScaleMatrix = DEFAULT_RISK_MATRIX
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "combination_strategy", CombinationStrategy.parse(self.combination_strategy)
        )
        if not 1 <= int(self.flag_threshold) <= 4:
            raise ValueError(f"flag_threshold {self.flag_threshold!r} out of range 1..4")
        object.__setattr__(
            self,
            "explicit_combinations",
            tuple(tuple(str(m) for m in combo) for combo in self.explicit_combinations),
        )
        object.__setattr__(self, "notes", tuple(str(n) for n in self.notes))


def severity_of_value(meta: Sequence[AttributeMeta], attribute: str, value: str) -> SeverityLevel:
    """Global severity of one value: its override, else the attribute rating."""
    entry = next((m for m in meta if m.name == attribute), None)
    if entry is None:
        raise ValueError(f"no metadata for attribute {attribute!r}")
    if entry.role is not AttributeRole.SENSITIVE:
        raise ValueError(f"attribute {attribute!r} is not sensitive")
    override = entry.value_severity.get(value)
    if override is not None:
        return global_severity(override)
    if entry.severity is None:
        raise ValueError(f"sensitive attribute {attribute!r} has no severity rating")
    return global_severity(entry.severity)


def build_combinations(
    meta: Sequence[AttributeMeta],
    strategy: CombinationStrategy | str = CombinationStrategy.PER_LEVEL,
    explicit: Sequence[Sequence[str]] = (),
) -> list[QiCombination]:
    """Quasi-identifier combinations to evaluate.

    Every quasi-identifier is always evaluated individually. The strategy
    adds grouped combinations: ``per_level`` groups the attributes sharing
    each occupied exposure level, ``cumulative`` takes, for each occupied
    level, every attribute at that level or above, and ``explicit`` adds no
    automatic groups. Explicitly listed combinations are always added on
    top, whatever the strategy. Duplicates (same member set) are emitted
    once, keeping the first occurrence.
    """
    strategy = CombinationStrategy.parse(strategy)
    qis = [m for m in meta if m.role is AttributeRole.QUASI_IDENTIFIER]
    if not qis:
        raise ValueError("at least one quasi-identifier is required")
    for m in qis:
        if m.exposure is None:
            raise ValueError(f"quasi-identifier {m.name!r}: missing exposure level")
    exposure_of = {m.name: m.exposure for m in qis}
    order = {m.name: i for i, m in enumerate(qis)}

    def make(names: Sequence[str], origin: CombinationOrigin) -> QiCombination:
        members = tuple(sorted(names, key=order.__getitem__))
        return QiCombination(
            members=members,
            exposure=ExposureLevel(max(exposure_of[n] for n in members)),
            origin=origin,
        )

    candidates: list[QiCombination] = [make([m.name], CombinationOrigin.INDIVIDUAL) for m in qis]

    occupied = sorted({int(m.exposure) for m in qis}, reverse=True)
    if strategy is CombinationStrategy.PER_LEVEL:
        for level in occupied:
            members = [m.name for m in qis if int(m.exposure) == level]
            candidates.append(make(members, CombinationOrigin.PER_LEVEL_GROUP))
    elif strategy is CombinationStrategy.CUMULATIVE:
        for level in occupied:
            members = [m.name for m in qis if int(m.exposure) >= level]
            candidates.append(make(members, CombinationOrigin.CUMULATIVE_GROUP))

    for combo in explicit:
        names = [str(n) for n in combo]
        if not names:
            raise ValueError("explicit combination must not be empty")
        for n in names:
            if n not in exposure_of:
                raise ValueError(f"explicit combination names {n!r}, not a declared quasi-identifier")
        if len(set(names)) != len(names):
            raise ValueError(f"explicit combination repeats an attribute: {names!r}")
        candidates.append(make(names, CombinationOrigin.EXPLICIT))

    result: list[QiCombination] = []
    seen: set[frozenset[str]] = set()
    for c in candidates:
        key = frozenset(c.members)
        if key not in seen:
            seen.add(key)
            result.append(c)
    return result


def exploitability(
    exposure: ExposureLevel,
    inference: InferenceLevel,
    matrix: ScaleMatrix = DEFAULT_EXPLOITABILITY_MATRIX,
) -> ExploitabilityLevel:
    return ExploitabilityLevel(matrix.lookup(int(exposure), int(inference)))


def risk(
    exploitability_level: ExploitabilityLevel,
    severity: SeverityLevel,
    matrix: ScaleMatrix = DEFAULT_RISK_MATRIX,
) -> RiskLevel:
    return RiskLevel(matrix.lookup(int(exploitability_level), int(severity)))


def _member_sort_key(dataset: Dataset, combo: QiCombination) -> tuple[int, ...]:
    return tuple(dataset.attribute_index(n) for n in combo.members)


def assess(
    dataset: Dataset,
    meta: Sequence[AttributeMeta],
    options: AssessmentOptions | None = None,
) -> AssessmentReport:
    """Run the full assessment and assemble the report.

    Raises :class:`AssessmentError` with the complete list of problems when
    the metadata does not validate against the dataset, when no sensitive
    attribute or quasi-identifier is declared, or when the dataset has
    fewer than two rows.
    """
    options = options or AssessmentOptions()
    outcome = validate_meta(dataset, meta)
    errors = list(outcome.errors)

    roles = {m.name: m.role for m in meta}
    sensitive_names = [n for n in dataset.attributes if roles.get(n) is AttributeRole.SENSITIVE]
    qi_names = [n for n in dataset.attributes if roles.get(n) is AttributeRole.QUASI_IDENTIFIER]
    if not sensitive_names:
        errors.append("at least one sensitive attribute is required")
    if not qi_names:
        errors.append("at least one quasi-identifier is required")
    if dataset.row_count < 2:
        errors.append(f"dataset has {dataset.row_count} rows; at least 2 are required")
    if errors:
        raise AssessmentError(errors)

    # Normalize metadata to dataset attribute order so member ordering and
    # every report table follow the table's own column order.
    by_name = {m.name: m for m in meta}
    ordered_meta = [by_name[n] for n in dataset.attributes]

    warnings = list(outcome.warnings)
    identifier_names = [n for n in dataset.attributes if roles.get(n) is AttributeRole.IDENTIFIER]
    if identifier_names:
        listed = ", ".join(repr(n) for n in identifier_names)
        warnings.append(
            f"identifier attributes present ({listed}); they are excluded from "
            "combinations and should have been removed by anonymization"
        )
    empty_cells = sum(1 for row in dataset.rows for cell in row if cell == "")
    if empty_cells:
        warnings.append(
            f"dataset contains {empty_cells} empty-string cell(s), treated as a distinct category"
        )

    try:
        combinations = build_combinations(
            ordered_meta, options.combination_strategy, options.explicit_combinations
        )
    except ValueError as exc:
        raise AssessmentError([str(exc)]) from exc

    exploitability_rows = []
    risk_rows = []
    dr_results: list[DrResult] = []
    for sensitive in sensitive_names:
        value_severities = {
            v: severity_of_value(ordered_meta, sensitive, v)
            for v in dict.fromkeys(dataset.column(sensitive))
        }
        attribute_max_severity = SeverityLevel(max(value_severities.values()))

        rows = []
        for combo in combinations:
            dr = discrimination_rate(dataset, combo.members, sensitive)
            level = exploitability(combo.exposure, dr.inference, options.exploitability_matrix)
            rows.append(
                ExploitabilityRow(
                    sensitive=sensitive, combination=combo, dr=dr, exploitability=level
                )
            )
        rows.sort(
            key=lambda r: (
                -int(r.exploitability),
                -int(r.combination.exposure),
                -int(r.inference),
                -len(r.combination.members),
                _member_sort_key(dataset, r.combination),
            )
        )
        exploitability_rows.extend(rows)
        dr_results.extend(r.dr for r in rows)

        if rows and rows[0].dr.h_s == 0.0:
            warnings.append(
                f"sensitive attribute {sensitive!r} carries a single value; "
                "discrimination rate is defined as 1"
            )

        for row in rows:
            combo = row.combination
            risk_rows.append(
                RiskRow(
                    description=(
                        f"Re-identification risk based on {combo.exposure.display}: "
                        + "/".join(combo.members)
                    ),
                    sensitive=sensitive,
                    members=combo.members,
                    exploitability=row.exploitability,
                    severity=attribute_max_severity,
                    risk=risk(row.exploitability, attribute_max_severity, options.risk_matrix),
                )
            )

    overall_risk = RiskLevel(max(int(r.risk) for r in risk_rows))

    # Flag severe records under the highest-exposure combination; ties go to
    # the larger member set (weakly higher inference), then dataset order.
    top_combo = min(
        combinations,
        key=lambda c: (-int(c.exposure), -len(c.members), _member_sort_key(dataset, c)),
    )
    flagged: list[FlaggedRecord] = []
    threshold = int(options.flag_threshold)
    for sensitive in sensitive_names:
        column = dataset.column(sensitive)
        classing = equivalence_classes(dataset, top_combo.members)
        class_scores = {
            c.key: value_inference(dataset, top_combo.members, c.key, sensitive)
            for c in classing.classes
        }
        projections = dataset.project(top_combo.members)
        for i in range(dataset.row_count):
            level = severity_of_value(ordered_meta, sensitive, column[i])
            if int(level) < threshold:
                continue
            score = class_scores[projections[i]]
            record_exploitability = exploitability(
                top_combo.exposure, band(score), options.exploitability_matrix
            )
            flagged.append(
                FlaggedRecord(
                    row_index=i,
                    attribute=sensitive,
                    sensitive_value=column[i],
                    value_severity=level,
                    class_inference=score,
                    record_risk=risk(record_exploitability, level, options.risk_matrix),
                )
            )

    attribute_severity_table = tuple(
        AttributeSeverityEntry(attribute=m.name, rating=m.severity)
        for m in ordered_meta
        if m.severity is not None
    )
    value_severity_table = tuple(
        ValueSeverityEntry(attribute=m.name, value=v, level=global_severity(rating))
        for m in ordered_meta
        for v, rating in m.value_severity.items()
    )
    exposure_table = tuple(
        ExposureEntry(attribute=m.name, exposure=m.exposure)
        for m in ordered_meta
        if m.exposure is not None
    )

    appendix = MetricsAppendix(
        qi_set=tuple(qi_names),
        k_anonymity=k_anonymity(dataset, qi_names),
        l_diversity=tuple(
            LDiversityEntry(sensitive=s, l_value=distinct_l_diversity(dataset, qi_names, s))
            for s in sensitive_names
        ),
        dr_results=tuple(dr_results),
    )

    warnings.extend(options.notes)

    return AssessmentReport(
        dataset_label=dataset.source_label,
        row_count=dataset.row_count,
        attribute_severity_table=attribute_severity_table,
        value_severity_table=value_severity_table,
        exposure_table=exposure_table,
        exploitability_rows=tuple(exploitability_rows),
        risk_rows=tuple(risk_rows),
        overall_risk=overall_risk,
        flagged_records=tuple(flagged),
        metrics_appendix=appendix,
        warnings=tuple(warnings),
    )
