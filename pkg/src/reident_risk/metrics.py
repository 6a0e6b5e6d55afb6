"""Exact frequency-based privacy metrics over a Dataset.

All probabilities are empirical frequencies taken from the assessed table
itself; nothing is estimated from an external population. Entropies are in
bits (log base 2). The discrimination rate of a quasi-identifier set Q for
a sensitive attribute S is

    dr = 1 - H(S | Q) / H(S)

which is 0 when Q reveals nothing about S and exactly 1 when every
equivalence class under Q carries a single sensitive value. The same ratio
evaluated inside one equivalence class gives the per-value (per-class)
inference score. A degenerate sensitive attribute with H(S) = 0 is treated
as dr = 1: the constant value is known without looking at Q at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import Dataset, InferenceLevel

__all__ = [
    "EquivalenceClass",
    "EquivalenceClassing",
    "DrResult",
    "equivalence_classes",
    "k_anonymity",
    "distinct_l_diversity",
    "entropy",
    "conditional_entropy",
    "discrimination_rate",
    "value_inference",
    "band",
]


@dataclass(frozen=True)
class EquivalenceClass:
    key: tuple[str, ...]
    row_indices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.row_indices)


@dataclass(frozen=True)
class EquivalenceClassing:
    """Partition of the rows by their projection onto a quasi-identifier set."""

    qi_set: tuple[str, ...]
    classes: tuple[EquivalenceClass, ...]

    def sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.classes)

    def find(self, key: Sequence[str]) -> EquivalenceClass:
        wanted = tuple(key)
        for c in self.classes:
            if c.key == wanted:
                return c
        raise KeyError(f"unknown class {wanted!r} for quasi-identifiers {self.qi_set!r}")


@dataclass(frozen=True)
class DrResult:
    """Discrimination rate with the entropies it was derived from."""

    qi_set: tuple[str, ...]
    sensitive: str
    h_s: float
    h_s_given_qi: float
    dr: float
    inference: InferenceLevel


def _check_qi_set(dataset: Dataset, qi_set: Sequence[str]) -> tuple[str, ...]:
    names = tuple(qi_set)
    if not names:
        raise ValueError("quasi-identifier set must be non-empty")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate attribute in quasi-identifier set: {names!r}")
    for name in names:
        dataset.attribute_index(name)  # raises KeyError on unknown names
    return names


def equivalence_classes(dataset: Dataset, qi_set: Sequence[str]) -> EquivalenceClassing:
    """Group rows by exact equality of their projection onto ``qi_set``.

    Classes are ordered by the first row index at which each key occurs.
    """
    names = _check_qi_set(dataset, qi_set)
    if dataset.row_count == 0:
        raise ValueError("no rows: cannot build equivalence classes")
    groups: dict[tuple[str, ...], list[int]] = {}
    for i, key in enumerate(dataset.project(names)):
        groups.setdefault(key, []).append(i)
    classes = tuple(
        EquivalenceClass(key=key, row_indices=tuple(idxs)) for key, idxs in groups.items()
    )
    return EquivalenceClassing(qi_set=names, classes=classes)


def k_anonymity(dataset: Dataset, qi_set: Sequence[str]) -> int:
    """Minimum equivalence-class size; k = 1 means some record is unique."""
    return min(equivalence_classes(dataset, qi_set).sizes())


def distinct_l_diversity(dataset: Dataset, qi_set: Sequence[str], sensitive: str) -> int:
    """Minimum number of distinct sensitive values within any class."""
    names = _check_qi_set(dataset, qi_set)
    if sensitive in names:
        raise ValueError(f"sensitive attribute {sensitive!r} must not be a quasi-identifier")
    column = dataset.column(sensitive)
    classing = equivalence_classes(dataset, names)
    return min(len({column[i] for i in c.row_indices}) for c in classing.classes)


def entropy(counts: Iterable[int | float]) -> float:
    """Shannon entropy in bits of a multiset of category counts."""
    values = [float(c) for c in counts]
    if any(c < 0 for c in values):
        raise ValueError("counts must be non-negative")
    total = sum(values)
    if total <= 0:
        raise ValueError("total count must be positive")
    h = 0.0
    for c in values:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def _counts(values: Iterable[str]) -> list[int]:
    tally: dict[str, int] = {}
    for v in values:
        tally[v] = tally.get(v, 0) + 1
    return list(tally.values())


def conditional_entropy(dataset: Dataset, target: str, given_set: Sequence[str]) -> float:
    """H(target | given_set) in bits, weighting each class by its frequency."""
    names = _check_qi_set(dataset, given_set)
    if target in names:
        raise ValueError(f"target {target!r} must not appear in the conditioning set")
    column = dataset.column(target)
    classing = equivalence_classes(dataset, names)
    n = dataset.row_count
    h = 0.0
    for c in classing.classes:
        h += (c.size / n) * entropy(_counts(column[i] for i in c.row_indices))
    return h


def band(dr: float) -> InferenceLevel:
    """Map a discrimination rate in [0, 1] to its inference level.

    Boundaries belong to the upper band, so 0.25 is already Moderate and
    0.75 is Critical.
    """
    if not 0.0 <= dr <= 1.0:
        raise ValueError(f"discrimination rate {dr!r} out of range [0, 1]")
    if dr < 0.25:
        return InferenceLevel.WEAK
    if dr < 0.5:
        return InferenceLevel.MODERATE
    if dr < 0.75:
        return InferenceLevel.SEVERE
    return InferenceLevel.CRITICAL


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def discrimination_rate(dataset: Dataset, qi_set: Sequence[str], sensitive: str) -> DrResult:
    """Discrimination rate of ``qi_set`` for ``sensitive``: 1 - H(S|Q)/H(S).

    With H(S) = 0 the sensitive attribute is constant and the rate is
    defined as 1 (the value is trivially inferable). The ratio is clamped
    to [0, 1] against floating-point drift.
    """
    names = _check_qi_set(dataset, qi_set)
    if sensitive in names:
        raise ValueError(f"sensitive attribute {sensitive!r} must not be a quasi-identifier")
    h_s = entropy(_counts(dataset.column(sensitive)))
    h_s_given_qi = conditional_entropy(dataset, sensitive, names)
    if h_s == 0.0:
        dr = 1.0
    else:
        dr = _clamp01(1.0 - h_s_given_qi / h_s)
    return DrResult(
        qi_set=names,
        sensitive=sensitive,
        h_s=h_s,
        h_s_given_qi=h_s_given_qi,
        dr=dr,
        inference=band(dr),
    )


def value_inference(
    dataset: Dataset, qi_set: Sequence[str], key: Sequence[str], sensitive: str
) -> float:
    """Per-class inference score for one quasi-identifier value combination.

    1 - H(S within the class) / H(S overall), clamped to [0, 1]; a pure
    class scores 1 regardless of the overall entropy.
    """
    names = _check_qi_set(dataset, qi_set)
    if sensitive in names:
        raise ValueError(f"sensitive attribute {sensitive!r} must not be a quasi-identifier")
    cls = equivalence_classes(dataset, names).find(key)
    column = dataset.column(sensitive)
    h_class = entropy(_counts(column[i] for i in cls.row_indices))
    if h_class == 0.0:
        return 1.0
    h_s = entropy(_counts(column))
    if h_s == 0.0:
        return 1.0
    return _clamp01(1.0 - h_class / h_s)
