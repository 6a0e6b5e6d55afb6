"""Domain types: datasets, attribute metadata, and the ordinal four-level scales.

Everything here is immutable after construction and free of I/O. Validation
that needs a dataset *and* metadata together lives in :func:`validate_meta`,
which reports problems instead of raising so callers can display all of them
at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence


class ScaleError(ValueError):
    """Raised for out-of-range levels, unknown labels, or bad matrices."""


class _OrdinalScale(IntEnum):
    """Base for the 1..4 ordinal scales. Labels are bijective with values."""

    @property
    def label(self) -> str:
        return self.name.replace("_", " ").title()

    @property
    def display(self) -> str:
        """Rendering used throughout reports, e.g. ``4-Critical``."""
        return f"{self.value}-{self.label}"

    @classmethod
    def _extra_aliases(cls) -> dict[str, int]:
        return {}

    @classmethod
    def parse(cls, raw: int | str) -> "_OrdinalScale":
        """Coerce an integer 1..4 or a label (case-insensitive) to a level."""
        if isinstance(raw, bool):
            raise ScaleError(f"{cls.__name__}: expected level 1..4 or label, got bool")
        if isinstance(raw, int):
            if not 1 <= raw <= 4:
                raise ScaleError(f"{cls.__name__}: level {raw} out of range 1..4")
            return cls(raw)
        if isinstance(raw, str):
            text = raw.strip().lower()
            for member in cls:
                if text in (member.label.lower(), member.name.lower(), member.display.lower()):
                    return member
            aliases = {k.lower(): v for k, v in cls._extra_aliases().items()}
            if text in aliases:
                return cls(aliases[text])
            raise ScaleError(f"{cls.__name__}: unknown label {raw!r}")
        raise ScaleError(f"{cls.__name__}: expected int or str, got {type(raw).__name__}")


class SeverityLevel(_OrdinalScale):
    """Impact of disclosure on the individual (CNIL four-level scale)."""

    NEGLIGIBLE = 1
    LIMITED = 2
    SIGNIFICANT = 3
    MAXIMUM = 4


class ExposureLevel(_OrdinalScale):
    """How findable an attribute is in auxiliary data sources."""

    INTERNAL_RESTRICTED = 1
    INTERNAL_EXTENDED = 2
    EXTERNAL_RESTRICTED = 3
    EXTERNAL_EXTENDED = 4

    @property
    def label(self) -> str:
        return ("IR", "IE", "ER", "EE")[self.value - 1]

    @classmethod
    def _extra_aliases(cls) -> dict[str, int]:
        # RI/EI are accepted swapped spellings seen in the wild.
        return {
            "RI": 1,
            "EI": 2,
            "1-RI": 1,
            "2-EI": 2,
            "Internal Restricted": 1,
            "Internal Extended": 2,
            "External Restricted": 3,
            "External Extended": 4,
        }


class InferenceLevel(_OrdinalScale):
    """How well quasi-identifier values determine the sensitive value."""

    WEAK = 1
    MODERATE = 2
    SEVERE = 3
    CRITICAL = 4


class ExploitabilityLevel(_OrdinalScale):
    """Attacker's ability to execute the linkage/inference attack."""

    VERY_DIFFICULT = 1
    DIFFICULT = 2
    EASY = 3
    VERY_EASY = 4


class RiskLevel(_OrdinalScale):
    """Final re-identification risk verdict."""

    LOW = 1
    MEDIUM = 2
    HIGH = 3
    CRITICAL = 4


class AttributeRole(str, Enum):
    IDENTIFIER = "identifier"
    QUASI_IDENTIFIER = "quasi_identifier"
    SENSITIVE = "sensitive"
    OTHER = "other"

    @classmethod
    def parse(cls, raw: str) -> "AttributeRole":
        try:
            return cls(str(raw).strip().lower())
        except ValueError:
            raise ScaleError(f"unknown attribute role {raw!r}") from None


@dataclass(frozen=True)
class SeverityRating:
    """Per-impact-type severity: bodily, material, and moral, each 1..4."""

    bodily: SeverityLevel
    material: SeverityLevel
    moral: SeverityLevel

    def __post_init__(self) -> None:
        for name in ("bodily", "material", "moral"):
            level = getattr(self, name)
            object.__setattr__(self, name, SeverityLevel.parse(level))

    def components(self) -> tuple[SeverityLevel, SeverityLevel, SeverityLevel]:
        return (self.bodily, self.material, self.moral)


def global_severity(rating: SeverityRating) -> SeverityLevel:
    """Global severity of a rating: the maximum over its three impact types."""
    return SeverityLevel(max(rating.components()))


@dataclass(frozen=True)
class AttributeMeta:
    """Analyst judgments for one attribute.

    ``exposure`` is meaningful for quasi-identifiers and ``severity`` for
    sensitive attributes; both may be supplied for any role (the severity
    table in a report lists every attribute that carries a rating).
    Role-based *requirements* are checked by :func:`validate_meta`, not at
    construction, so a half-complete document can still be loaded and all
    its problems reported together.
    """

    name: str
    role: AttributeRole
    exposure: ExposureLevel | None = None
    severity: SeverityRating | None = None
    value_severity: Mapping[str, SeverityRating] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("attribute name must be non-empty")
        object.__setattr__(self, "value_severity", MappingProxyType(dict(self.value_severity)))


@dataclass(frozen=True)
class Dataset:
    """Immutable table of categorical string cells with a named header."""

    attributes: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    source_label: str = ""

    def __post_init__(self) -> None:
        attrs = tuple(str(a) for a in self.attributes)
        object.__setattr__(self, "attributes", attrs)
        if not attrs:
            raise ValueError("dataset needs at least one attribute")
        if any(a == "" for a in attrs):
            raise ValueError("attribute names must be non-empty")
        if len(set(attrs)) != len(attrs):
            dupes = sorted({a for a in attrs if attrs.count(a) > 1})
            raise ValueError(f"duplicate attribute names: {', '.join(dupes)}")
        rows = tuple(tuple(str(c) for c in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        for i, row in enumerate(rows):
            if len(row) != len(attrs):
                raise ValueError(
                    f"row {i + 1} has {len(row)} cells, expected {len(attrs)}"
                )

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def attribute_index(self, name: str) -> int:
        try:
            return self.attributes.index(name)
        except ValueError:
            raise KeyError(f"unknown attribute {name!r}") from None

    def column(self, name: str) -> tuple[str, ...]:
        idx = self.attribute_index(name)
        return tuple(row[idx] for row in self.rows)

    def project(self, names: Sequence[str]) -> list[tuple[str, ...]]:
        """Per-row tuples of the cells under ``names``, in row order."""
        idxs = [self.attribute_index(n) for n in names]
        return [tuple(row[i] for i in idxs) for row in self.rows]


@dataclass(frozen=True)
class ScaleMatrix:
    """4x4 lookup combining two ordinal levels into one.

    ``cells[r][c]`` is the output level for row level ``r+1`` and column
    level ``c+1``. Cells must be in 1..4 and monotone non-decreasing along
    rows and columns: a higher input level never lowers the output.
    """

    name: str
    cells: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.cells)
        object.__setattr__(self, "cells", rows)
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ScaleError(f"matrix {self.name!r}: expected a 4x4 grid")
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                if not 1 <= v <= 4:
                    raise ScaleError(
                        f"matrix {self.name!r}: cell ({r + 1},{c + 1}) value {v} out of range 1..4"
                    )
        for r in range(4):
            for c in range(4):
                if c > 0 and rows[r][c] < rows[r][c - 1]:
                    raise ScaleError(
                        f"matrix {self.name!r}: row {r + 1} decreases at column {c + 1}"
                    )
                if r > 0 and rows[r][c] < rows[r - 1][c]:
                    raise ScaleError(
                        f"matrix {self.name!r}: column {c + 1} decreases at row {r + 1}"
                    )

    def lookup(self, row_level: int, col_level: int) -> int:
        if not (1 <= int(row_level) <= 4 and 1 <= int(col_level) <= 4):
            raise ScaleError(f"matrix {self.name!r}: lookup levels must be 1..4")
        return self.cells[int(row_level) - 1][int(col_level) - 1]


@dataclass(frozen=True)
class ValidationOutcome:
    """Errors and warnings from cross-checking metadata against a dataset."""

    errors: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_meta(dataset: Dataset, meta: Sequence[AttributeMeta]) -> ValidationOutcome:
    """Cross-check attribute metadata against a dataset.

    Errors: metadata naming attributes absent from the dataset, dataset
    attributes without metadata, duplicate metadata entries, and missing
    role-required fields (exposure for quasi-identifiers, severity for
    sensitive attributes). Warnings: value-severity overrides for values
    never seen in the dataset, and an absence of declared quasi-identifiers.
    """
    errors: list[str] = []
    warnings: list[str] = []

    seen: dict[str, AttributeMeta] = {}
    for m in meta:
        if m.name in seen:
            errors.append(f"duplicate metadata for attribute {m.name!r}")
            continue
        seen[m.name] = m

    dataset_attrs = set(dataset.attributes)
    for name in seen:
        if name not in dataset_attrs:
            errors.append(f"unknown attribute {name!r}: not present in the dataset")
    for name in dataset.attributes:
        if name not in seen:
            errors.append(f"attribute {name!r} has no metadata entry")

    for name, m in seen.items():
        if m.role is AttributeRole.QUASI_IDENTIFIER and m.exposure is None:
            errors.append(f"quasi-identifier {name!r}: missing exposure level")
        if m.role is AttributeRole.SENSITIVE and m.severity is None:
            errors.append(f"sensitive attribute {name!r}: missing severity rating")
        if m.value_severity and name in dataset_attrs:
            present = set(dataset.column(name))
            unused = [v for v in m.value_severity if v not in present]
            if unused:
                listed = ", ".join(repr(v) for v in unused)
                warnings.append(
                    f"attribute {name!r}: value severity overrides never used: {listed}"
                )

    if not any(m.role is AttributeRole.QUASI_IDENTIFIER for m in seen.values()):
        warnings.append("no quasi-identifiers declared")

    return ValidationOutcome(errors=tuple(errors), warnings=tuple(warnings))


def parse_severity_rating(raw: Mapping[str, int | str] | Iterable) -> SeverityRating:
    """Build a rating from a mapping with bodily/material/moral keys."""
    if isinstance(raw, Mapping):
        missing = [k for k in ("bodily", "material", "moral") if k not in raw]
        if missing:
            raise ScaleError(f"severity rating missing components: {', '.join(missing)}")
        return SeverityRating(
            bodily=SeverityLevel.parse(raw["bodily"]),
            material=SeverityLevel.parse(raw["material"]),
            moral=SeverityLevel.parse(raw["moral"]),
        )
    raise ScaleError("severity rating must be an object with bodily/material/moral")
