"""Grouping of per-person results by sex and age decade, and the
trim/merge experiment helpers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from svrand.bitseq import BitSequence
from svrand.estimator import EpsilonProfile
from svrand.ingest import PersonMeta

__all__ = [
    "PersonResult",
    "CohortStats",
    "bucket",
    "quartiles",
    "trim_to_min",
    "merge_persons",
    "MergedSequence",
]


@dataclass(frozen=True)
class PersonResult:
    """Weighted-epsilon outcome for one person under one experiment mode."""

    meta: PersonMeta
    n_bits: int
    profile: EpsilonProfile | None
    weighted: float | None
    mode_tag: str

    def __post_init__(self):
        if self.weighted is not None and not 0.0 <= self.weighted <= 0.5:
            raise ValueError(f"weighted epsilon outside [0, 1/2]: {self.weighted}")


@dataclass(frozen=True)
class CohortStats:
    """Five-number summary plus mean of weighted epsilon for one (sex, decade).

    decade is the lower age bound of the bracket [decade, decade + 10).
    """

    sex: str
    decade: int
    count: int
    q0: float
    q1: float
    q2: float
    q3: float
    q4: float
    mean: float

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("a cohort holds at least one person")
        qs = (self.q0, self.q1, self.q2, self.q3, self.q4)
        if any(a > b for a, b in zip(qs, qs[1:])):
            raise ValueError(f"quartiles must be non-decreasing, got {qs}")


def quartiles(values: Sequence[float]) -> tuple[float, float, float, float, float, float]:
    """(q0..q4, mean) with min/median/max exact and q1/q3 linearly interpolated."""
    if len(values) == 0:
        raise ValueError("no values")
    v = np.asarray(values, dtype=float)
    q0, q1, q2, q3, q4 = np.percentile(v, [0, 25, 50, 75, 100], method="linear")
    return float(q0), float(q1), float(q2), float(q3), float(q4), float(np.mean(v))


def bucket(results: Sequence[PersonResult]
           ) -> tuple[list[CohortStats], list[PersonResult]]:
    """Cohort summaries per non-empty (sex, decade), plus the left-over persons.

    Persons with unknown sex or age, or without a weighted epsilon, cannot be
    bucketed and are returned separately.
    """
    groups: dict[tuple[str, int], list[float]] = {}
    leftover = []
    for r in results:
        if r.meta.sex in ("F", "M") and r.meta.age is not None and r.weighted is not None:
            groups.setdefault((r.meta.sex, 10 * (r.meta.age // 10)), []).append(r.weighted)
        else:
            leftover.append(r)
    stats = []
    for (sex, decade), vals in sorted(groups.items()):
        q0, q1, q2, q3, q4, mean = quartiles(vals)
        stats.append(CohortStats(sex=sex, decade=decade, count=len(vals),
                                 q0=q0, q1=q1, q2=q2, q3=q3, q4=q4, mean=mean))
    return stats, leftover


def trim_to_min(sequences: Sequence[BitSequence]) -> list[BitSequence]:
    """Truncate every sequence to the shortest length in the set."""
    if not sequences:
        return []
    shortest = min(len(s) for s in sequences)
    return [s[:shortest] for s in sequences]


class MergedSequence(NamedTuple):
    bits: BitSequence
    boundaries: tuple[int, ...]  # start offset per person, then the total length


def merge_persons(sequences: Sequence[BitSequence]) -> MergedSequence:
    """Concatenate per-person sequences into one, keeping the join offsets."""
    boundaries = [0]
    for s in sequences:
        boundaries.append(boundaries[-1] + len(s))
    merged = BitSequence("".join(s.bits for s in sequences))
    return MergedSequence(merged, tuple(boundaries))
